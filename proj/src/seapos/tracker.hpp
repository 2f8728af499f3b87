#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

#include "seapos/planar_map.hpp"

namespace seapos {

using Vector5d = Eigen::Matrix<double, 5, 1>;
using Matrix5d = Eigen::Matrix<double, 5, 5>;

struct BBox {
  double x = 0.0;  // left edge
  double y = 0.0;  // top edge
  double w = 0.0;
  double h = 0.0;
};

struct Detection {
  long frame = 0;
  double t = 0.0;
  BBox bbox;
  std::optional<double> det_score;
  // Classifier probability. Absent values are resolved by resolved_p_c().
  std::optional<double> p_c;
};

// p_c, else the detector score, else 0.5.
double resolved_p_c(const Detection& d);

/// Point where the hull meets the water.
PixelPoint bottom_center(const BBox& b);

/// Image-space belief over [x, y, w, vx, vy]; (x, y) is the bbox bottom-center.
struct TrackState {
  Vector5d mean = Vector5d::Zero();
  Matrix5d cov = Matrix5d::Identity();
  double last_t = 0.0;
  int frames_coasted = 0;

  PixelPoint position() const { return {mean(0), mean(1)}; }
};

struct AssociationConfig {
  double alpha = 0.5;
  double sigma = 10.0;
  double p_thr = 0.51;
  int max_coast_frames = 30;

  void validate() const;
};

struct TrackerNoise {
  double meas_std_xy = 2.0;   // px
  double meas_std_w = 4.0;    // px
  double q = 10.0;            // px^2/s^3, white-noise acceleration on x/y
  double width_q = 1.0;       // px^2/s, random walk on w
  double init_vel_var = 400.0;
  double width_floor = 1.0;

  void validate() const;
  Eigen::Vector3d measurement_variances() const;
};

TrackState kf_predict(const TrackState& s, double t_next, double q, double width_q = 1.0, double width_floor = 1.0);
TrackState kf_update(const TrackState& s, const Eigen::Vector3d& obs, const Eigen::Vector3d& r, double width_floor = 1.0);

/// Distance gate exp(-d^2 / sigma^2).
double gating_probability(const PixelPoint& predicted, const PixelPoint& detected, double sigma);
/// alpha * p_c + (1 - alpha) * p_k.
double association_score(double p_c, double p_k, double alpha);

struct Association {
  std::optional<std::size_t> index;  // into the candidate list
  double score = 0.0;                // P of the best candidate, chosen or not
};

/// Picks the highest-P detection, breaking ties by distance then input order.
/// Returns no index when the best score is below cfg.p_thr.
Association associate(const TrackState& s, std::span<const Detection> dets, const AssociationConfig& cfg);

TrackState init_track(const Detection& d, const TrackerNoise& noise);

struct TrackStep {
  TrackState state;              // posterior, or prediction when coasting
  std::optional<Detection> chosen;
  double score = 0.0;
  bool coasted = false;
  bool lost = false;
};

/**
 * Single-target tracking-by-detection fold.
 *
 * Each step predicts to the frame time, associates against the frame's
 * detections and either corrects or coasts. After max_coast_frames
 * consecutive coasts the track is lost; an association with P >= p_thr while
 * lost reinitializes the state at that detection.
 */
class Tracker {
public:
  Tracker(const Detection& init, AssociationConfig cfg, TrackerNoise noise);

  TrackStep step(double t, std::span<const Detection> dets);

  const TrackState& state() const { return state_; }
  bool lost() const { return lost_; }

private:
  AssociationConfig cfg_;
  TrackerNoise noise_;
  TrackState state_;
  bool lost_ = false;
  bool first_ = true;
  Detection init_;
};

struct FrameDetections {
  long frame = 0;
  double t = 0.0;
  std::vector<Detection> detections;
};

std::vector<TrackStep> track_sequence(std::span<const FrameDetections> frames, const Detection& init,
                                      const AssociationConfig& cfg, const TrackerNoise& noise);

}  // namespace seapos
