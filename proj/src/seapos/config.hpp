#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "seapos/planar_map.hpp"
#include "seapos/tracker.hpp"
#include "seapos/world_filter.hpp"

namespace seapos {

// How camera-referenced plane coordinates are converted to GPS.
enum class Anchoring {
  PerFrame,  // plane anchored at the interpolated camera fix of each frame
  Fixed,     // plane anchored at the calibration origin for every frame
};

struct TrackerSettings {
  AssociationConfig association;
  TrackerNoise noise;
  // Target designation; defaults to the highest-p_c detection of the first frame.
  std::optional<long> init_frame;
  std::optional<std::size_t> init_index;
};

struct UkfSettings {
  UkfParams params;
  // When positive the measurement covariance is the pixel noise pushed
  // through the homography Jacobian, plus r_pos on the diagonal.
  double pixel_std = 0.0;
};

struct CalibrationSettings {
  double earth_radius_m = kDefaultEarthRadiusM;
  Anchoring anchoring = Anchoring::PerFrame;
  std::optional<DistortionParams> distortion;
};

struct SynthSettings {
  std::string scenario = "noiseless-straight";
  std::optional<std::uint64_t> seed;
  std::optional<double> pixel_std;
  std::optional<double> dropout_prob;
  std::optional<double> duration_s;
  std::optional<double> fps;
};

/**
 * Run configuration, read from an INI file with [tracker], [ukf],
 * [calibration] and [synth] sections. Unknown sections or keys are errors.
 */
struct Config {
  TrackerSettings tracker;
  UkfSettings ukf;
  CalibrationSettings calibration;
  SynthSettings synth;

  static Config load(const std::string& path);
  static Config parse(const std::string& text, const std::string& origin = "<config>");

  /// Sets one key from its textual value, e.g. set("tracker", "alpha", "0.4").
  void set(const std::string& section, const std::string& key, const std::string& value);
  void validate() const;

  /// Renders every non-default-free key so that parse(to_ini()) reproduces *this.
  std::string to_ini() const;
};

}  // namespace seapos
