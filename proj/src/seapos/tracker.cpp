#include "seapos/tracker.hpp"

#include <cmath>
#include <sstream>

#include "seapos/covariance.hpp"
#include "seapos/error.hpp"

namespace seapos {
namespace {

Eigen::Matrix<double, 3, 5> observation_matrix() {
  Eigen::Matrix<double, 3, 5> h = Eigen::Matrix<double, 3, 5>::Zero();
  h(0, 0) = h(1, 1) = h(2, 2) = 1.0;
  return h;
}

Eigen::Vector3d observe(const Detection& d) {
  const PixelPoint p = bottom_center(d.bbox);
  return {p.u, p.v, d.bbox.w};
}

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

double resolved_p_c(const Detection& d) {
  if (d.p_c) return *d.p_c;
  if (d.det_score) return *d.det_score;
  return 0.5;
}

PixelPoint bottom_center(const BBox& b) {
  if (!(b.w > 0.0) || !(b.h > 0.0)) {
    std::ostringstream os;
    os << "bounding box must have positive size, got w=" << b.w << " h=" << b.h;
    fail(ErrorCode::InvalidArgument, os.str());
  }
  return {b.x + b.w / 2.0, b.y + b.h};
}

void AssociationConfig::validate() const {
  if (!in_unit(alpha)) fail(ErrorCode::InvalidArgument, "alpha must lie in [0, 1]");
  if (!(sigma > 0.0)) fail(ErrorCode::InvalidArgument, "sigma must be positive");
  if (!(p_thr > 0.0 && p_thr < 1.0)) fail(ErrorCode::InvalidArgument, "p_thr must lie in (0, 1)");
  if (max_coast_frames < 0) fail(ErrorCode::InvalidArgument, "max_coast_frames must be non-negative");
}

void TrackerNoise::validate() const {
  if (!(meas_std_xy > 0.0) || !(meas_std_w > 0.0)) fail(ErrorCode::InvalidArgument, "measurement std must be positive");
  if (!(q >= 0.0) || !(width_q >= 0.0)) fail(ErrorCode::InvalidArgument, "process noise must be non-negative");
  if (!(init_vel_var > 0.0)) fail(ErrorCode::InvalidArgument, "initial velocity variance must be positive");
  if (!(width_floor > 0.0)) fail(ErrorCode::InvalidArgument, "width floor must be positive");
}

Eigen::Vector3d TrackerNoise::measurement_variances() const {
  return {meas_std_xy * meas_std_xy, meas_std_xy * meas_std_xy, meas_std_w * meas_std_w};
}

TrackState kf_predict(const TrackState& s, double t_next, double q, double width_q, double width_floor) {
  const double dt = t_next - s.last_t;
  if (dt < 0.0) {
    std::ostringstream os;
    os << "predict to t=" << t_next << " before last update t=" << s.last_t;
    fail(ErrorCode::TimeOrder, os.str());
  }
  TrackState out = s;
  out.last_t = t_next;
  if (dt == 0.0) return out;

  Matrix5d f = Matrix5d::Identity();
  f(0, 3) = f(1, 4) = dt;
  Matrix5d qm = Matrix5d::Zero();
  const Eigen::Matrix2d axis = white_noise_acceleration(dt, q);
  for (int a : {0, 1}) {
    qm(a, a) = axis(0, 0);
    qm(a, a + 3) = qm(a + 3, a) = axis(0, 1);
    qm(a + 3, a + 3) = axis(1, 1);
  }
  qm(2, 2) = width_q * dt;

  out.mean = f * s.mean;
  out.mean(2) = std::max(out.mean(2), width_floor);
  out.cov = f * s.cov * f.transpose() + qm;
  symmetrize(out.cov);
  check_covariance(out.cov, "kf_predict");
  return out;
}

TrackState kf_update(const TrackState& s, const Eigen::Vector3d& obs, const Eigen::Vector3d& r, double width_floor) {
  const Eigen::Matrix<double, 3, 5> h = observation_matrix();
  const Eigen::Matrix3d rm = r.asDiagonal();
  const Eigen::Matrix3d innov_cov = h * s.cov * h.transpose() + rm;
  const Eigen::LDLT<Eigen::Matrix3d> ldlt(innov_cov);
  const double dmin = ldlt.vectorD().minCoeff();
  if (ldlt.info() != Eigen::Success || !(dmin > 1e-12 * std::max(1.0, ldlt.vectorD().maxCoeff()))) {
    fail(ErrorCode::FilterDegeneracy, "kf_update: innovation covariance is singular");
  }
  const Eigen::Matrix<double, 5, 3> gain = ldlt.solve(h * s.cov).transpose();
  TrackState out = s;
  out.mean = s.mean + gain * (obs - h * s.mean);
  out.mean(2) = std::max(out.mean(2), width_floor);
  const Matrix5d ikh = Matrix5d::Identity() - gain * h;
  out.cov = ikh * s.cov * ikh.transpose() + gain * rm * gain.transpose();
  symmetrize(out.cov);
  check_covariance(out.cov, "kf_update");
  out.frames_coasted = 0;
  return out;
}

double gating_probability(const PixelPoint& predicted, const PixelPoint& detected, double sigma) {
  if (!(sigma > 0.0)) fail(ErrorCode::InvalidArgument, "sigma must be positive");
  const double du = predicted.u - detected.u;
  const double dv = predicted.v - detected.v;
  return std::exp(-(du * du + dv * dv) / (sigma * sigma));
}

double association_score(double p_c, double p_k, double alpha) {
  if (!in_unit(p_c) || !in_unit(p_k) || !in_unit(alpha)) {
    fail(ErrorCode::InvalidArgument, "association inputs must lie in [0, 1]");
  }
  return alpha * p_c + (1.0 - alpha) * p_k;
}

Association associate(const TrackState& s, std::span<const Detection> dets, const AssociationConfig& cfg) {
  Association best;
  std::optional<std::size_t> best_index;
  double best_d2 = 0.0;
  const PixelPoint pred = s.position();
  for (std::size_t i = 0; i < dets.size(); ++i) {
    const PixelPoint bc = bottom_center(dets[i].bbox);
    const double du = pred.u - bc.u;
    const double dv = pred.v - bc.v;
    const double d2 = du * du + dv * dv;
    const double p = association_score(resolved_p_c(dets[i]), gating_probability(pred, bc, cfg.sigma), cfg.alpha);
    if (!best_index || p > best.score || (p == best.score && d2 < best_d2)) {
      best_index = i;
      best.score = p;
      best_d2 = d2;
    }
  }
  if (best_index && best.score >= cfg.p_thr) best.index = best_index;
  return best;
}

TrackState init_track(const Detection& d, const TrackerNoise& noise) {
  TrackState s;
  const Eigen::Vector3d z = observe(d);
  s.mean << z(0), z(1), std::max(z(2), noise.width_floor), 0.0, 0.0;
  s.cov = Matrix5d::Zero();
  s.cov.diagonal().head<3>() = noise.measurement_variances();
  s.cov(3, 3) = s.cov(4, 4) = noise.init_vel_var;
  s.last_t = d.t;
  s.frames_coasted = 0;
  return s;
}

Tracker::Tracker(const Detection& init, AssociationConfig cfg, TrackerNoise noise)
    : cfg_(cfg), noise_(noise), init_(init) {
  cfg_.validate();
  noise_.validate();
  state_ = init_track(init, noise_);
}

TrackStep Tracker::step(double t, std::span<const Detection> dets) {
  TrackStep out;
  if (first_ && t == init_.t) {
    first_ = false;
    out.state = state_;
    out.chosen = init_;
    out.score = 1.0;
    return out;
  }
  first_ = false;

  const TrackState pred = kf_predict(state_, t, noise_.q, noise_.width_q, noise_.width_floor);
  const Association a = associate(pred, dets, cfg_);
  out.score = a.score;
  if (a.index) {
    const Detection& d = dets[*a.index];
    if (lost_) {
      state_ = init_track(d, noise_);
      state_.last_t = t;
      lost_ = false;
    } else {
      state_ = kf_update(pred, observe(d), noise_.measurement_variances(), noise_.width_floor);
    }
    out.chosen = d;
  } else {
    state_ = pred;
    ++state_.frames_coasted;
    if (state_.frames_coasted >= cfg_.max_coast_frames) lost_ = true;
    out.coasted = true;
  }
  out.state = state_;
  out.lost = lost_;
  return out;
}

std::vector<TrackStep> track_sequence(std::span<const FrameDetections> frames, const Detection& init,
                                      const AssociationConfig& cfg, const TrackerNoise& noise) {
  Tracker tracker(init, cfg, noise);
  std::vector<TrackStep> out;
  out.reserve(frames.size());
  double last_t = -std::numeric_limits<double>::infinity();
  for (const auto& f : frames) {
    if (f.t < last_t) {
      std::ostringstream os;
      os << "frame " << f.frame << " at t=" << f.t << " precedes t=" << last_t;
      fail(ErrorCode::TimeOrder, os.str());
    }
    last_t = f.t;
    if (f.t < init.t) continue;
    out.push_back(tracker.step(f.t, f.detections));
  }
  return out;
}

}  // namespace seapos
