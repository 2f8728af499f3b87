#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "seapos/config.hpp"
#include "seapos/pipeline.hpp"

namespace seapos::synth {

// Forward-looking camera above the sea plane. Zero roll.
struct Pinhole {
  double height_m = 10.0;
  double pitch_deg = 5.0;  // below the horizontal
  double focal_px = 1000.0;
  double cx = 640.0;
  double cy = 360.0;
};

struct CameraSpec {
  GeoPoint start{36.0, -75.0};
  Eigen::Vector2d velocity = Eigen::Vector2d::Zero();  // m/s east, north
  double heading_deg = 0.0;
  bool emit_heading = false;
  Pinhole pinhole;
  // Pixel -> camera-relative plane map. Overrides the pinhole when set.
  std::optional<Eigen::Matrix3d> homography;
};

struct Waypoint {
  double t = 0.0;
  Eigen::Vector2d position = Eigen::Vector2d::Zero();
};

// A boat moves piecewise-linearly through its waypoints and holds the end
// points outside their time span. With a single waypoint it moves at constant
// velocity from it.
struct BoatSpec {
  bool target = false;
  std::vector<Waypoint> waypoints;
  Eigen::Vector2d velocity = Eigen::Vector2d::Zero();
  double p_c_mean = 0.5;
  double p_c_std = 0.0;
  double width_m = 8.0;
  double aspect = 0.4;  // bbox height / width
  double det_score = 0.9;

  Eigen::Vector2d position(double t) const;
};

struct NoiseSpec {
  double pixel_std = 0.0;
  double dropout_prob = 0.0;
  std::vector<std::pair<double, double>> dropout_windows;  // [start, end) in seconds, target only
};

struct ScenarioConfig {
  std::string name;
  std::uint64_t seed = 1;
  double duration_s = 20.0;
  double fps = 30.0;
  CameraSpec camera;
  std::vector<BoatSpec> boats;  // positions in metres east/north of camera.start
  NoiseSpec noise;
  int distractors = 0;  // extra constant-velocity boats drawn from the seed
  // Calibration boat, in metres relative to the moving camera. Falls back to
  // the target's track when empty.
  std::vector<Waypoint> calibration_path;
  double quad_interval_s = 1.0;
  double truth_interval_s = 1.0;
  // Filter settings the pipeline should run this scenario with.
  UkfSettings ukf;

  void validate() const;
};

struct DetectionLabel {
  long frame = 0;
  std::size_t index = 0;  // position within the frame
  std::size_t boat = 0;
  bool target = false;
};

struct SynthBundle {
  std::vector<Detection> detections;
  std::vector<DetectionLabel> labels;
  std::vector<CameraSample> camera_track;
  std::vector<Quadruplet> quadruplets;
  std::vector<TruthSample> truth;
  Calibration true_calibration;
  Config config;  // recommended pipeline config
};

/// Pixel -> camera-relative plane homography of a pinhole camera.
Eigen::Matrix3d pinhole_homography(const Pinhole& cam, double heading_deg);
PlanarMap true_map(const CameraSpec& cam);

SynthBundle generate(const ScenarioConfig& cfg);

std::vector<ScenarioConfig> bundled_scenarios();
ScenarioConfig bundled_scenario(const std::string& name);

/// Applies the [synth] overrides (seed, pixel_std, dropout_prob, duration_s, fps).
ScenarioConfig with_overrides(ScenarioConfig cfg, const SynthSettings& settings);

std::string scenario_to_json(const ScenarioConfig& cfg);
ScenarioConfig scenario_from_json(const std::string& text, const std::string& origin = "<scenario>");

/// Writes the bundle files into dir (created if missing).
void write_bundle(const SynthBundle& bundle, const ScenarioConfig& cfg, const std::string& dir);

}  // namespace seapos::synth
