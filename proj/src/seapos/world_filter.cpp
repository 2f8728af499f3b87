#include "seapos/world_filter.hpp"

#include <cmath>
#include <sstream>

#include "seapos/covariance.hpp"
#include "seapos/error.hpp"

namespace seapos {
namespace {

Matrix4d transition(double dt) {
  Matrix4d f = Matrix4d::Identity();
  f(0, 2) = f(1, 3) = dt;
  return f;
}

Matrix4d process_noise(double dt, double q) {
  Matrix4d m = Matrix4d::Zero();
  const Eigen::Matrix2d axis = white_noise_acceleration(dt, q);
  for (int a : {0, 1}) {
    m(a, a) = axis(0, 0);
    m(a, a + 2) = m(a + 2, a) = axis(0, 1);
    m(a + 2, a + 2) = axis(1, 1);
  }
  return m;
}

Eigen::MatrixXd unscented_cov(const Eigen::MatrixXd& pts, const Eigen::VectorXd& mean, const Eigen::VectorXd& wc) {
  const Eigen::MatrixXd dev = pts.colwise() - mean;
  return dev * wc.asDiagonal() * dev.transpose();
}

Eigen::Matrix2d floored(const Eigen::Matrix2d& r, double floor) {
  Eigen::Matrix2d out = r;
  out(0, 0) = std::max(out(0, 0), floor);
  out(1, 1) = std::max(out(1, 1), floor);
  return out;
}

void check_finite(const LocalPoint& z) {
  if (!std::isfinite(z.east_m) || !std::isfinite(z.north_m)) fail(ErrorCode::InvalidArgument, "measurement is not finite");
}

}  // namespace

void UkfParams::validate(int n) const {
  if (!(spread > 0.0 && spread <= 1.0)) fail(ErrorCode::InvalidArgument, "ukf spread must lie in (0, 1]");
  if (!(n + lambda(n) > 0.0)) fail(ErrorCode::InvalidArgument, "ukf parameters give n + lambda <= 0");
  if (!(q_intensity >= 0.0)) fail(ErrorCode::InvalidArgument, "ukf q_intensity must be non-negative");
  if (!(r_pos >= 0.0)) fail(ErrorCode::InvalidArgument, "ukf r_pos must be non-negative");
  if (!(init_vel_var > 0.0)) fail(ErrorCode::InvalidArgument, "ukf init_vel_var must be positive");
  if (!(r_floor > 0.0)) fail(ErrorCode::InvalidArgument, "ukf r_floor must be positive");
}

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) fail(ErrorCode::FilterDegeneracy, "eigen decomposition failed");
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < kCovEigenFloor) fail(ErrorCode::FilterDegeneracy, "covariance is indefinite");
    ev(i) = std::sqrt(std::max(ev(i), 0.0));
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

SigmaPoints sigma_points(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov, const UkfParams& params) {
  const auto n = static_cast<int>(mean.size());
  if (cov.rows() != n || cov.cols() != n) fail(ErrorCode::InvalidArgument, "sigma_points: shape mismatch");
  const double lambda = params.lambda(n);
  const double c = n + lambda;
  if (!(c > 0.0)) fail(ErrorCode::InvalidArgument, "sigma_points: n + lambda must be positive");

  const Eigen::MatrixXd root = psd_sqrt(c * cov);
  SigmaPoints sp;
  sp.points.resize(n, 2 * n + 1);
  sp.points.col(0) = mean;
  for (int i = 0; i < n; ++i) {
    sp.points.col(1 + i) = mean + root.col(i);
    sp.points.col(1 + n + i) = mean - root.col(i);
  }
  sp.mean_weights = Eigen::VectorXd::Constant(2 * n + 1, 0.5 / c);
  sp.cov_weights = sp.mean_weights;
  sp.mean_weights(0) = lambda / c;
  sp.cov_weights(0) = lambda / c + (1.0 - params.spread * params.spread + params.prior_knowledge);
  return sp;
}

Eigen::VectorXd unscented_mean(const Eigen::MatrixXd& pts, const Eigen::VectorXd& wm) {
  // The mean weights sum to one, so mu = x0 + sum_i wm_i (x_i - x0). This avoids
  // the cancellation of the large negative centre weight at small spread.
  const Eigen::VectorXd x0 = pts.col(0);
  return x0 + (pts.colwise() - x0) * wm;
}

WorldState ukf_predict(const WorldState& s, double t_next, const UkfParams& params) {
  params.validate();
  const double dt = t_next - s.last_t;
  if (dt < 0.0) {
    std::ostringstream os;
    os << "ukf predict to t=" << t_next << " before last update t=" << s.last_t;
    fail(ErrorCode::TimeOrder, os.str());
  }
  WorldState out = s;
  out.last_t = t_next;
  if (dt == 0.0 && params.q_intensity == 0.0) return out;

  const SigmaPoints sp = sigma_points(s.mean, s.cov, params);
  const Eigen::MatrixXd propagated = transition(dt) * sp.points;
  const Eigen::VectorXd mean = unscented_mean(propagated, sp.mean_weights);
  out.mean = mean;
  out.cov = unscented_cov(propagated, mean, sp.cov_weights) + process_noise(dt, params.q_intensity);
  symmetrize(out.cov);
  check_covariance(out.cov, "ukf_predict");
  return out;
}

WorldState ukf_update(const WorldState& s, const LocalPoint& z, const UkfParams& params) {
  return ukf_update(s, z, Eigen::Matrix2d::Identity() * params.r_pos, params);
}

WorldState ukf_update(const WorldState& s, const LocalPoint& z, const Eigen::Matrix2d& r, const UkfParams& params) {
  params.validate();
  check_finite(z);
  const SigmaPoints sp = sigma_points(s.mean, s.cov, params);
  const Eigen::MatrixXd zs = sp.points.topRows(2);
  const Eigen::Vector2d z_mean = unscented_mean(zs, sp.mean_weights);
  const Eigen::Vector4d x_mean = unscented_mean(sp.points, sp.mean_weights);

  const Eigen::MatrixXd dz = zs.colwise() - Eigen::VectorXd(z_mean);
  const Eigen::MatrixXd dx = sp.points.colwise() - Eigen::VectorXd(x_mean);
  const Eigen::Matrix2d innov_cov = dz * sp.cov_weights.asDiagonal() * dz.transpose() + floored(r, params.r_floor);
  const Eigen::Matrix<double, 4, 2> cross = dx * sp.cov_weights.asDiagonal() * dz.transpose();

  const Eigen::LDLT<Eigen::Matrix2d> ldlt(innov_cov);
  if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().minCoeff() > 0.0)) {
    fail(ErrorCode::FilterDegeneracy, "ukf_update: innovation covariance is singular");
  }
  const Eigen::Matrix<double, 4, 2> gain = ldlt.solve(cross.transpose()).transpose();

  WorldState out = s;
  out.mean = x_mean + gain * (Eigen::Vector2d(z.east_m, z.north_m) - z_mean);
  out.cov = s.cov - gain * innov_cov * gain.transpose();
  symmetrize(out.cov);
  check_covariance(out.cov, "ukf_update");
  return out;
}

WorldState init_world_state(double t, const LocalPoint& z, const UkfParams& params) {
  return init_world_state(t, z, Eigen::Matrix2d::Identity() * params.r_pos, params);
}

WorldState init_world_state(double t, const LocalPoint& z, const Eigen::Matrix2d& r, const UkfParams& params) {
  check_finite(z);
  WorldState s;
  s.mean << z.east_m, z.north_m, 0.0, 0.0;
  s.cov = Matrix4d::Zero();
  s.cov.topLeftCorner<2, 2>() = floored(r, params.r_floor);
  s.cov(2, 2) = s.cov(3, 3) = params.init_vel_var;
  s.last_t = t;
  return s;
}

std::vector<TimedState> smooth_trajectory(std::span<const TimedPoint> samples, const UkfParams& params) {
  params.validate();
  std::vector<TimedState> out;
  out.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const TimedPoint& s = samples[i];
    if (i == 0) {
      out.push_back({s.t, init_world_state(s.t, s.p, params)});
      continue;
    }
    if (!(s.t > samples[i - 1].t)) {
      std::ostringstream os;
      os << "sample " << i << " at t=" << s.t << " does not follow t=" << samples[i - 1].t;
      fail(ErrorCode::TimeOrder, os.str());
    }
    const WorldState pred = ukf_predict(out.back().state, s.t, params);
    out.push_back({s.t, ukf_update(pred, s.p, params)});
  }
  return out;
}

}  // namespace seapos
