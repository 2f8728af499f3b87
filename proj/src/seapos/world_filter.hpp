#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "seapos/geodesy.hpp"

namespace seapos {

using Eigen::Matrix4d;
using Eigen::Vector4d;

// Belief over [east, north, v_east, v_north] on a fixed local plane.
struct WorldState {
  Vector4d mean = Vector4d::Zero();
  Matrix4d cov = Matrix4d::Identity();
  double last_t = 0.0;

  LocalPoint position() const { return {mean(0), mean(1)}; }
};

/**
 * Scaled unscented transform parameters plus the filter's noise model.
 *
 * lambda = spread^2 * (n + secondary_scaling) - n. prior_knowledge is the
 * distribution-shape term added to the centre covariance weight (2 is optimal
 * for Gaussians).
 */
struct UkfParams {
  double spread = 1e-3;
  double prior_knowledge = 2.0;
  double secondary_scaling = 0.0;
  double q_intensity = 0.05;  // m^2/s^3
  double r_pos = 1.0;         // m^2 per axis
  double init_vel_var = 25.0;
  double r_floor = 1e-6;

  void validate(int n = 4) const;
  double lambda(int n) const { return spread * spread * (n + secondary_scaling) - n; }
};

struct SigmaPoints {
  Eigen::MatrixXd points;  // n x (2n+1), column 0 is the mean
  Eigen::VectorXd mean_weights;
  Eigen::VectorXd cov_weights;
};

SigmaPoints sigma_points(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov, const UkfParams& params);

/// Symmetric square root with eigenvalues in [-1e-9, 0) clamped to zero.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m);

// Weighted mean of the columns of pts, accumulated relative to column 0.
Eigen::VectorXd unscented_mean(const Eigen::MatrixXd& pts, const Eigen::VectorXd& wm);

WorldState ukf_predict(const WorldState& s, double t_next, const UkfParams& params);
WorldState ukf_update(const WorldState& s, const LocalPoint& z, const UkfParams& params);
/// Update with an explicit 2x2 measurement covariance (floored by r_floor on the diagonal).
WorldState ukf_update(const WorldState& s, const LocalPoint& z, const Eigen::Matrix2d& r, const UkfParams& params);

WorldState init_world_state(double t, const LocalPoint& z, const UkfParams& params);
WorldState init_world_state(double t, const LocalPoint& z, const Eigen::Matrix2d& r, const UkfParams& params);

struct TimedPoint {
  double t = 0.0;
  LocalPoint p;
};

struct TimedState {
  double t = 0.0;
  WorldState state;
};

/// Causal forward filter over the samples; timestamps must strictly increase.
std::vector<TimedState> smooth_trajectory(std::span<const TimedPoint> samples, const UkfParams& params);

}  // namespace seapos
