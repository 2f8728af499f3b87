#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seapos/config.hpp"
#include "seapos/geodesy.hpp"
#include "seapos/planar_map.hpp"
#include "seapos/tracker.hpp"

namespace seapos {

struct CameraSample {
  double t = 0.0;
  GeoPoint position;
  std::optional<double> heading_deg;  // clockwise from north, [0, 360)
};

struct CameraFix {
  GeoPoint position;
  std::optional<double> heading_deg;
};

/// Platform GPS track with linear interpolation between samples. Headings
/// interpolate along the shorter arc.
class CameraTrack {
public:
  explicit CameraTrack(std::vector<CameraSample> samples);

  CameraFix at(double t) const;
  bool covers(double t) const;
  const std::vector<CameraSample>& samples() const { return samples_; }
  bool has_heading() const { return has_heading_; }

private:
  std::vector<CameraSample> samples_;
  bool has_heading_ = false;
};

struct Quadruplet {
  double t = 0.0;
  PixelPoint pixel;  // bbox bottom-center
  GeoPoint geo;
};

struct CalibrationSet {
  std::vector<Quadruplet> quadruplets;
  std::vector<CameraSample> camera_track;
};

struct Calibration {
  GeoPoint origin;
  PlanarMap map;
  // Camera heading at the origin; set when the camera track carries headings.
  std::optional<double> heading_ref_deg;
};

/// Rotates an east/north vector clockwise by angle_deg.
LocalPoint rotate_clockwise(const LocalPoint& p, double angle_deg);

Calibration calibrate(const CalibrationSet& cal, const CalibrationSettings& settings = {});

struct TrajectoryPoint {
  double t = 0.0;
  long frame = 0;
  GeoPoint raw_geo;
  GeoPoint smoothed_geo;
  LocalPoint raw_local;       // relative to reference
  LocalPoint smoothed_local;  // relative to reference
  GeoPoint reference;         // plane anchor used for this frame
  bool coasted = false;
};

struct GeoTrajectory {
  std::vector<TrajectoryPoint> points;
};

/// Groups detections by frame and fills missing frame indices with
/// timestamps interpolated between their neighbours.
std::vector<FrameDetections> group_frames(std::span<const Detection> detections);

/// The designated target: config init_frame/init_index, else the highest-p_c
/// detection of the first non-empty frame.
Detection select_initial(std::span<const FrameDetections> frames, const TrackerSettings& settings);

GeoTrajectory run(std::span<const FrameDetections> frames, const CameraTrack& camera, const Calibration& calibration,
                  const Config& config);

struct TruthSample {
  double t = 0.0;
  GeoPoint position;
};

struct ErrorStats {
  double rmse_m = 0.0;
  double mean_err_m = 0.0;
  double max_err_m = 0.0;
  double rmse_east_m = 0.0;
  double rmse_north_m = 0.0;
  std::size_t n_matched = 0;
};

struct EvalReport {
  ErrorStats raw;
  ErrorStats smoothed;
  bool skip_coasted = false;
};

EvalReport evaluate(const GeoTrajectory& traj, std::span<const TruthSample> truth, bool skip_coasted = false);

}  // namespace seapos
