#pragma once

#include <string>
#include <vector>

#include "seapos/pipeline.hpp"

namespace seapos::io {

// Readers throw Error(Parse) naming "path:line" for malformed records.

std::vector<Detection> read_detections(const std::string& path);
std::vector<Detection> parse_detections(const std::string& text, const std::string& origin = "<detections>");
std::string format_detections(const std::vector<Detection>& dets);

std::vector<CameraSample> read_camera_track(const std::string& path);
std::vector<CameraSample> parse_camera_track(const std::string& text, const std::string& origin = "<camera>");
std::string format_camera_track(const std::vector<CameraSample>& samples);

std::vector<Quadruplet> read_quadruplets(const std::string& path);
std::vector<Quadruplet> parse_quadruplets(const std::string& text, const std::string& origin = "<quadruplets>");
std::string format_quadruplets(const std::vector<Quadruplet>& quads);

Calibration read_calibration(const std::string& path);
Calibration parse_calibration(const std::string& text, const std::string& origin = "<calibration>");
std::string format_calibration(const Calibration& cal);

// Trajectory records carry both fixes and the smoothed plane offset. On load
// the per-frame reference is recovered by inverting that offset, and the raw
// offset is recomputed against it.
GeoTrajectory read_trajectory(const std::string& path);
GeoTrajectory parse_trajectory(const std::string& text, const std::string& origin = "<trajectory>");
std::string format_trajectory(const GeoTrajectory& traj);

std::vector<TruthSample> read_truth(const std::string& path);
std::vector<TruthSample> parse_truth(const std::string& text, const std::string& origin = "<truth>");
std::string format_truth(const std::vector<TruthSample>& truth);

std::string format_report_json(const EvalReport& report);
std::string format_report_text(const EvalReport& report);
/// Polylines of truth, raw and smoothed positions as [lat, lon] pairs.
std::string format_plot_data(const GeoTrajectory& traj, const std::vector<TruthSample>& truth);

std::string read_file(const std::string& path);
/// Writes to a sibling temporary file and renames it over path.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace seapos::io
