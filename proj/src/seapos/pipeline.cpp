#include "seapos/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "seapos/error.hpp"
#include "seapos/world_filter.hpp"

namespace seapos {
namespace {

double wrap_heading(double deg) {
  double h = std::fmod(deg, 360.0);
  if (h < 0.0) h += 360.0;
  return h;
}

double lerp(double a, double b, double w) { return a + w * (b - a); }

std::string time_str(double t) {
  std::ostringstream os;
  os << t;
  return os.str();
}

}  // namespace

CameraTrack::CameraTrack(std::vector<CameraSample> samples) : samples_(std::move(samples)) {
  if (samples_.empty()) fail(ErrorCode::Coverage, "camera track is empty");
  const bool first_heading = samples_.front().heading_deg.has_value();
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    validate(samples_[i].position);
    if (i > 0 && !(samples_[i].t > samples_[i - 1].t)) {
      fail(ErrorCode::TimeOrder, "camera track timestamps must strictly increase (sample " + std::to_string(i) + ")");
    }
    if (samples_[i].heading_deg.has_value() != first_heading) {
      fail(ErrorCode::InvalidArgument, "camera track mixes samples with and without heading");
    }
    if (const auto& h = samples_[i].heading_deg; h && !(*h >= 0.0 && *h < 360.0)) {
      fail(ErrorCode::Domain, "camera heading must lie in [0, 360)");
    }
  }
  has_heading_ = first_heading;
}

bool CameraTrack::covers(double t) const { return t >= samples_.front().t && t <= samples_.back().t; }

CameraFix CameraTrack::at(double t) const {
  if (!covers(t)) {
    std::ostringstream os;
    os << "t=" << t << " outside camera track span [" << samples_.front().t << ", " << samples_.back().t << "]";
    fail(ErrorCode::Coverage, os.str());
  }
  const auto it = std::lower_bound(samples_.begin(), samples_.end(), t,
                                   [](const CameraSample& s, double v) { return s.t < v; });
  if (it->t == t) return {it->position, it->heading_deg};
  const CameraSample& b = *it;
  const CameraSample& a = *(it - 1);
  const double w = (t - a.t) / (b.t - a.t);
  CameraFix fix{{lerp(a.position.lat_deg, b.position.lat_deg, w), lerp(a.position.lon_deg, b.position.lon_deg, w)},
                std::nullopt};
  if (a.heading_deg && b.heading_deg) {
    double delta = *b.heading_deg - *a.heading_deg;
    if (delta > 180.0) delta -= 360.0;
    if (delta < -180.0) delta += 360.0;
    fix.heading_deg = wrap_heading(*a.heading_deg + w * delta);
  }
  return fix;
}

LocalPoint rotate_clockwise(const LocalPoint& p, double angle_deg) {
  const double a = angle_deg * std::numbers::pi / 180.0;
  const double c = std::cos(a);
  const double s = std::sin(a);
  return {p.east_m * c + p.north_m * s, -p.east_m * s + p.north_m * c};
}

Calibration calibrate(const CalibrationSet& cal, const CalibrationSettings& settings) {
  if (cal.quadruplets.size() < 4) {
    fail(ErrorCode::Arity, "calibration needs at least 4 quadruplets, got " + std::to_string(cal.quadruplets.size()));
  }
  const CameraTrack track(cal.camera_track);
  for (const auto& q : cal.quadruplets) {
    if (!track.covers(q.t)) fail(ErrorCode::Coverage, "quadruplet at t=" + time_str(q.t) + " outside camera track");
  }
  const auto first = std::min_element(cal.quadruplets.begin(), cal.quadruplets.end(),
                                      [](const Quadruplet& a, const Quadruplet& b) { return a.t < b.t; });
  const CameraFix origin = track.at(first->t);

  std::vector<Correspondence> corr;
  corr.reserve(cal.quadruplets.size());
  for (const auto& q : cal.quadruplets) {
    const CameraFix cam = track.at(q.t);
    const GeoReference ref(cam.position, settings.earth_radius_m);
    LocalPoint w = geo_to_local(ref, q.geo);
    if (origin.heading_deg && cam.heading_deg) w = rotate_clockwise(w, -(*cam.heading_deg - *origin.heading_deg));
    corr.push_back({q.pixel, w});
  }
  return {origin.position, estimate_homography(corr, settings.distortion), origin.heading_deg};
}

std::vector<FrameDetections> group_frames(std::span<const Detection> detections) {
  std::vector<FrameDetections> frames;
  for (const auto& d : detections) {
    if (!frames.empty() && d.frame == frames.back().frame) {
      if (d.t != frames.back().t) {
        fail(ErrorCode::TimeOrder, "frame " + std::to_string(d.frame) + " has inconsistent timestamps");
      }
      frames.back().detections.push_back(d);
      continue;
    }
    if (!frames.empty()) {
      const FrameDetections& prev = frames.back();
      if (d.frame < prev.frame || d.t <= prev.t) {
        fail(ErrorCode::TimeOrder, "frame " + std::to_string(d.frame) + " at t=" + time_str(d.t) +
                                       " does not follow frame " + std::to_string(prev.frame));
      }
      const FrameDetections a = prev;
      for (long f = a.frame + 1; f < d.frame; ++f) {
        const double w = static_cast<double>(f - a.frame) / static_cast<double>(d.frame - a.frame);
        frames.push_back({f, lerp(a.t, d.t, w), {}});
      }
    }
    frames.push_back({d.frame, d.t, {d}});
  }
  return frames;
}

Detection select_initial(std::span<const FrameDetections> frames, const TrackerSettings& settings) {
  if (settings.init_frame) {
    for (const auto& f : frames) {
      if (f.frame != *settings.init_frame) continue;
      const std::size_t idx = settings.init_index.value_or(0);
      if (idx >= f.detections.size()) {
        fail(ErrorCode::InvalidArgument, "init_index out of range for frame " + std::to_string(f.frame));
      }
      return f.detections[idx];
    }
    fail(ErrorCode::InvalidArgument, "init_frame " + std::to_string(*settings.init_frame) + " has no detections");
  }
  for (const auto& f : frames) {
    if (f.detections.empty()) continue;
    if (settings.init_index) {
      if (*settings.init_index >= f.detections.size()) fail(ErrorCode::InvalidArgument, "init_index out of range");
      return f.detections[*settings.init_index];
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < f.detections.size(); ++i) {
      if (resolved_p_c(f.detections[i]) > resolved_p_c(f.detections[best])) best = i;
    }
    return f.detections[best];
  }
  fail(ErrorCode::InvalidArgument, "detection stream is empty");
}

GeoTrajectory run(std::span<const FrameDetections> frames, const CameraTrack& camera, const Calibration& calibration,
                  const Config& config) {
  config.validate();
  const double radius = config.calibration.earth_radius_m;
  const GeoReference world_ref(calibration.origin, radius);
  const UkfParams& ukf = config.ukf.params;
  const Detection init = select_initial(frames, config.tracker);
  Tracker tracker(init, config.tracker.association, config.tracker.noise);

  GeoTrajectory traj;
  traj.points.reserve(frames.size());
  std::optional<WorldState> world;

  for (const auto& frame : frames) {
    if (frame.t < init.t) continue;
    const TrackStep step = tracker.step(frame.t, frame.detections);
    const CameraFix cam = camera.at(frame.t);
    const GeoPoint anchor = config.calibration.anchoring == Anchoring::PerFrame ? cam.position : calibration.origin;
    const GeoReference frame_ref(anchor, radius);
    const double yaw = (calibration.heading_ref_deg && cam.heading_deg) ? *cam.heading_deg - *calibration.heading_ref_deg : 0.0;

    const PixelPoint pixel = step.chosen ? bottom_center(step.chosen->bbox) : step.state.position();
    std::optional<LocalPoint> enu;
    Eigen::Matrix2d r = Eigen::Matrix2d::Identity() * ukf.r_pos;
    try {
      enu = rotate_clockwise(calibration.map.apply(pixel), yaw);
      if (config.ukf.pixel_std > 0.0) {
        const double a = yaw * std::numbers::pi / 180.0;
        Eigen::Matrix2d rot;
        rot << std::cos(a), std::sin(a), -std::sin(a), std::cos(a);
        const Eigen::Matrix2d j = rot * calibration.map.jacobian(pixel);
        r += config.ukf.pixel_std * config.ukf.pixel_std * j * j.transpose();
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::PointAtInfinity) throw;
    }

    const bool measured = enu.has_value() && !step.coasted;
    std::optional<GeoPoint> raw_geo;
    std::optional<LocalPoint> world_z;
    if (enu) {
      raw_geo = local_to_geo(frame_ref, *enu);
      world_z = geo_to_local(world_ref, *raw_geo);
    }

    if (!world) {
      if (!measured) continue;
      world = init_world_state(frame.t, *world_z, r, ukf);
    } else {
      world = ukf_predict(*world, frame.t, ukf);
      if (measured) world = ukf_update(*world, *world_z, r, ukf);
    }

    TrajectoryPoint pt;
    pt.t = frame.t;
    pt.frame = frame.frame;
    pt.reference = anchor;
    pt.coasted = !measured;
    pt.smoothed_geo = local_to_geo(world_ref, world->position());
    pt.smoothed_local = geo_to_local(frame_ref, pt.smoothed_geo);
    pt.raw_geo = raw_geo.value_or(pt.smoothed_geo);
    pt.raw_local = geo_to_local(frame_ref, pt.raw_geo);
    traj.points.push_back(pt);
  }
  return traj;
}

EvalReport evaluate(const GeoTrajectory& traj, std::span<const TruthSample> truth, bool skip_coasted) {
  std::vector<const TrajectoryPoint*> pts;
  pts.reserve(traj.points.size());
  for (const auto& p : traj.points) {
    if (skip_coasted && p.coasted) continue;
    if (!pts.empty() && !(p.t > pts.back()->t)) fail(ErrorCode::TimeOrder, "trajectory timestamps must strictly increase");
    pts.push_back(&p);
  }
  for (std::size_t i = 1; i < truth.size(); ++i) {
    if (truth[i].t < truth[i - 1].t) fail(ErrorCode::TimeOrder, "truth timestamps must be sorted");
  }

  struct Acc {
    double sum_sq = 0.0, sum = 0.0, max = 0.0, sum_e = 0.0, sum_n = 0.0;
    void add(const LocalPoint& e) {
      const double d2 = e.east_m * e.east_m + e.north_m * e.north_m;
      sum_sq += d2;
      sum += std::sqrt(d2);
      max = std::max(max, std::sqrt(d2));
      sum_e += e.east_m * e.east_m;
      sum_n += e.north_m * e.north_m;
    }
    ErrorStats stats(std::size_t n) const {
      const auto dn = static_cast<double>(n);
      return {std::sqrt(sum_sq / dn), sum / dn, max, std::sqrt(sum_e / dn), std::sqrt(sum_n / dn), n};
    }
  } raw, smoothed;

  std::size_t n = 0;
  for (const auto& ts : truth) {
    if (pts.empty() || ts.t < pts.front()->t || ts.t > pts.back()->t) continue;
    const GeoReference ref(ts.position);
    const auto it = std::lower_bound(pts.begin(), pts.end(), ts.t, [](const TrajectoryPoint* p, double v) { return p->t < v; });
    const TrajectoryPoint& b = **it;
    if (b.t == ts.t) {
      raw.add(geo_to_local(ref, b.raw_geo));
      smoothed.add(geo_to_local(ref, b.smoothed_geo));
    } else {
      const TrajectoryPoint& a = **(it - 1);
      const double w = (ts.t - a.t) / (b.t - a.t);
      const auto interp = [&](const GeoPoint& ga, const GeoPoint& gb) {
        const LocalPoint la = geo_to_local(ref, ga);
        const LocalPoint lb = geo_to_local(ref, gb);
        return LocalPoint{lerp(la.east_m, lb.east_m, w), lerp(la.north_m, lb.north_m, w)};
      };
      raw.add(interp(a.raw_geo, b.raw_geo));
      smoothed.add(interp(a.smoothed_geo, b.smoothed_geo));
    }
    ++n;
  }
  if (n == 0) fail(ErrorCode::EmptyReport, "no truth sample falls inside the trajectory time span");
  return {raw.stats(n), smoothed.stats(n), skip_coasted};
}

}  // namespace seapos
