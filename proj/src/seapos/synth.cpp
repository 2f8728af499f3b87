#include "seapos/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "seapos/error.hpp"
#include "seapos/io.hpp"

namespace seapos::synth {
namespace {

using nlohmann::json;

constexpr double kDegToRad = std::numbers::pi / 180.0;

Eigen::Vector2d lerp(const Eigen::Vector2d& a, const Eigen::Vector2d& b, double w) { return a + w * (b - a); }

Eigen::Vector2d path_position(const std::vector<Waypoint>& wps, double t) {
  if (t <= wps.front().t) return wps.front().position;
  if (t >= wps.back().t) return wps.back().position;
  const auto it = std::lower_bound(wps.begin(), wps.end(), t, [](const Waypoint& w, double v) { return w.t < v; });
  const Waypoint& b = *it;
  const Waypoint& a = *(it - 1);
  return lerp(a.position, b.position, (t - a.t) / (b.t - a.t));
}

// Depth-like coordinate of a camera-relative plane point, positive in front of
// the camera. Its zero set is the horizon locus.
class HorizonGuard {
public:
  HorizonGuard(const PlanarMap& map, double heading_deg) : g_(map.h().inverse()) {
    const Eigen::Vector3d fwd(100.0 * std::sin(heading_deg * kDegToRad), 100.0 * std::cos(heading_deg * kDegToRad), 1.0);
    sign_ = (g_ * fwd).z() >= 0.0 ? 1.0 : -1.0;
    scale_ = g_.row(2).norm();
  }
  bool in_front(const LocalPoint& p) const {
    return sign_ * (g_ * Eigen::Vector3d(p.east_m, p.north_m, 1.0)).z() > 1e-9 * scale_;
  }

private:
  Eigen::Matrix3d g_;
  double sign_ = 1.0;
  double scale_ = 1.0;
};

[[noreturn]] void horizon_error(const std::string& what, double t) {
  std::ostringstream os;
  os << what << " crosses the horizon locus at t=" << t;
  fail(ErrorCode::Generation, os.str());
}

json vec(const Eigen::Vector2d& v) { return json::array({v.x(), v.y()}); }

Eigen::Vector2d vec_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    fail(ErrorCode::Parse, where + ": expected [east, north]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json waypoints_json(const std::vector<Waypoint>& wps) {
  json arr = json::array();
  for (const auto& w : wps) arr.push_back({{"t", w.t}, {"position", vec(w.position)}});
  return arr;
}

std::vector<Waypoint> waypoints_from(const json& j, const std::string& where) {
  std::vector<Waypoint> out;
  if (!j.is_array()) fail(ErrorCode::Parse, where + ": waypoints must be an array");
  for (const auto& w : j) out.push_back({w.at("t").get<double>(), vec_from(w.at("position"), where)});
  return out;
}

}  // namespace

Eigen::Vector2d BoatSpec::position(double t) const {
  if (waypoints.size() == 1) return waypoints.front().position + velocity * (t - waypoints.front().t);
  return path_position(waypoints, t);
}

void ScenarioConfig::validate() const {
  if (!(fps > 0.0)) fail(ErrorCode::InvalidArgument, "scenario fps must be positive");
  if (!(duration_s > 0.0)) fail(ErrorCode::InvalidArgument, "scenario duration must be positive");
  if (std::count_if(boats.begin(), boats.end(), [](const BoatSpec& b) { return b.target; }) != 1) {
    fail(ErrorCode::InvalidArgument, "scenario must mark exactly one boat as target");
  }
  for (const auto& b : boats) {
    if (b.waypoints.empty()) fail(ErrorCode::InvalidArgument, "boat needs at least one waypoint");
    for (std::size_t i = 1; i < b.waypoints.size(); ++i) {
      if (!(b.waypoints[i].t > b.waypoints[i - 1].t)) fail(ErrorCode::InvalidArgument, "boat waypoints must be time-ordered");
    }
    if (!(b.width_m > 0.0) || !(b.aspect > 0.0)) fail(ErrorCode::InvalidArgument, "boat size must be positive");
    if (!(b.det_score >= 0.0 && b.det_score <= 1.0)) fail(ErrorCode::InvalidArgument, "det_score must lie in [0, 1]");
  }
  for (std::size_t i = 1; i < calibration_path.size(); ++i) {
    if (!(calibration_path[i].t > calibration_path[i - 1].t)) {
      fail(ErrorCode::InvalidArgument, "calibration path must be time-ordered");
    }
  }
  if (!(noise.pixel_std >= 0.0)) fail(ErrorCode::InvalidArgument, "pixel_std must be non-negative");
  if (!(noise.dropout_prob >= 0.0 && noise.dropout_prob <= 1.0)) fail(ErrorCode::InvalidArgument, "dropout_prob must lie in [0, 1]");
  if (!(quad_interval_s > 0.0) || !(truth_interval_s > 0.0)) fail(ErrorCode::InvalidArgument, "intervals must be positive");
  if (distractors < 0) fail(ErrorCode::InvalidArgument, "distractor count must be non-negative");
  if (!(camera.pinhole.focal_px > 0.0) || !(camera.pinhole.height_m > 0.0)) {
    fail(ErrorCode::InvalidArgument, "pinhole focal length and height must be positive");
  }
}

Eigen::Matrix3d pinhole_homography(const Pinhole& cam, double heading_deg) {
  const double psi = heading_deg * kDegToRad;
  const double theta = cam.pitch_deg * kDegToRad;
  const Eigen::Vector3d forward(std::sin(psi) * std::cos(theta), std::cos(psi) * std::cos(theta), -std::sin(theta));
  const Eigen::Vector3d right(std::cos(psi), -std::sin(psi), 0.0);
  const Eigen::Vector3d down = forward.cross(right);
  Eigen::Matrix3d rot;
  rot.row(0) = right.transpose();
  rot.row(1) = down.transpose();
  rot.row(2) = forward.transpose();
  Eigen::Matrix3d k;
  k << cam.focal_px, 0.0, cam.cx, 0.0, cam.focal_px, cam.cy, 0.0, 0.0, 1.0;
  Eigen::Matrix3d plane_to_pixel;
  plane_to_pixel.col(0) = rot.col(0);
  plane_to_pixel.col(1) = rot.col(1);
  plane_to_pixel.col(2) = -cam.height_m * rot.col(2);
  plane_to_pixel = k * plane_to_pixel;
  return plane_to_pixel.inverse();
}

PlanarMap true_map(const CameraSpec& cam) {
  return PlanarMap::from_matrix(cam.homography ? *cam.homography : pinhole_homography(cam.pinhole, cam.heading_deg));
}

SynthBundle generate(const ScenarioConfig& input) {
  input.validate();
  ScenarioConfig cfg = input;
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  for (int i = 0; i < cfg.distractors; ++i) {
    BoatSpec b;
    const double range = 40.0 + 110.0 * uniform(rng);
    const double lateral = (uniform(rng) - 0.5) * 0.8 * range;
    const double psi = cfg.camera.heading_deg * kDegToRad;
    const Eigen::Vector2d fwd(std::sin(psi), std::cos(psi));
    const Eigen::Vector2d right(std::cos(psi), -std::sin(psi));
    b.waypoints = {{0.0, range * fwd + lateral * right}};
    // Relative velocity in the camera's forward/right frame; the forward part
    // is limited so the boat stays at least 20 m ahead for the whole run.
    const double v_fwd = std::max((uniform(rng) - 0.5) * 6.0, -(range - 20.0) / cfg.duration_s);
    const double v_right = (uniform(rng) - 0.5) * 6.0;
    b.velocity = v_fwd * fwd + v_right * right + cfg.camera.velocity;
    b.p_c_mean = 0.1;
    b.p_c_std = 0.05;
    b.width_m = 5.0 + 10.0 * uniform(rng);
    cfg.boats.push_back(b);
  }

  const PlanarMap map = true_map(cfg.camera);
  const HorizonGuard guard(map, cfg.camera.heading_deg);
  const GeoReference start_ref(cfg.camera.start);
  const double psi = cfg.camera.heading_deg * kDegToRad;
  const Eigen::Vector2d right(std::cos(psi), -std::sin(psi));

  const auto camera_geo = [&](double t) {
    const Eigen::Vector2d c = cfg.camera.velocity * t;
    return local_to_geo(start_ref, {c.x(), c.y()});
  };
  const auto boat_geo = [&](const BoatSpec& b, double t) {
    const Eigen::Vector2d p = b.position(t);
    return local_to_geo(start_ref, {p.x(), p.y()});
  };

  SynthBundle out{.detections = {},
                  .labels = {},
                  .camera_track = {},
                  .quadruplets = {},
                  .truth = {},
                  .true_calibration = {cfg.camera.start, map,
                                       cfg.camera.emit_heading ? std::optional<double>(cfg.camera.heading_deg)
                                                               : std::nullopt},
                  .config = {}};

  const auto n_frames = static_cast<long>(std::floor(cfg.duration_s * cfg.fps + 1e-9)) + 1;
  for (long k = 0; k < n_frames; ++k) {
    const double t = static_cast<double>(k) / cfg.fps;
    const GeoPoint cam = camera_geo(t);
    out.camera_track.push_back({t, cam, cfg.camera.emit_heading ? std::optional<double>(cfg.camera.heading_deg) : std::nullopt});
    const GeoReference cam_ref(cam);

    std::size_t index = 0;
    for (std::size_t bi = 0; bi < cfg.boats.size(); ++bi) {
      const BoatSpec& b = cfg.boats[bi];
      const LocalPoint rel = geo_to_local(cam_ref, boat_geo(b, t));
      if (!guard.in_front(rel)) horizon_error(b.target ? "target boat" : "boat " + std::to_string(bi), t);
      const PixelPoint px = map.inverse_apply(rel);
      // Plane -> pixel Jacobian is the inverse of the pixel -> plane one.
      const Eigen::Matrix2d j_inv = map.jacobian(px).inverse();
      const double width_px = b.width_m * (j_inv * right).norm();

      // Noise draws happen for every boat and frame so that dropouts do not
      // shift the random stream of later frames.
      const double nu = unit(rng), nv = unit(rng), nw = unit(rng), npc = unit(rng), drop = uniform(rng);
      bool dropped = false;
      if (b.target) {
        dropped = drop < cfg.noise.dropout_prob;
        for (const auto& [a, e] : cfg.noise.dropout_windows) dropped = dropped || (t >= a && t < e);
      }
      if (dropped) continue;

      const double u = px.u + cfg.noise.pixel_std * nu;
      const double v = px.v + cfg.noise.pixel_std * nv;
      const double w = std::max(1.0, width_px + cfg.noise.pixel_std * nw);
      const double h = b.aspect * w;
      Detection d;
      d.frame = k;
      d.t = t;
      d.bbox = {u - w / 2.0, v - h, w, h};
      d.det_score = b.det_score;
      d.p_c = std::clamp(b.p_c_mean + b.p_c_std * npc, 0.0, 1.0);
      out.detections.push_back(d);
      out.labels.push_back({k, index++, bi, b.target});
    }
  }

  const BoatSpec& target = *std::find_if(cfg.boats.begin(), cfg.boats.end(), [](const BoatSpec& b) { return b.target; });
  for (double t = 0.0; t <= cfg.duration_s + 1e-9; t += cfg.truth_interval_s) {
    // Snap to the frame clock so truth samples coincide with frames when the
    // interval is a multiple of the frame period.
    const double ts = std::round(t * cfg.fps) / cfg.fps;
    out.truth.push_back({ts, boat_geo(target, ts)});
  }

  for (double t = 0.0; t <= cfg.duration_s + 1e-9; t += cfg.quad_interval_s) {
    const double ts = std::round(t * cfg.fps) / cfg.fps;
    const GeoPoint cam = camera_geo(ts);
    const GeoReference cam_ref(cam);
    LocalPoint rel;
    GeoPoint geo;
    if (cfg.calibration_path.empty()) {
      geo = boat_geo(target, ts);
      rel = geo_to_local(cam_ref, geo);
    } else {
      const Eigen::Vector2d off = path_position(cfg.calibration_path, ts);
      rel = {off.x(), off.y()};
      geo = local_to_geo(cam_ref, rel);
    }
    if (!guard.in_front(rel)) horizon_error("calibration boat", ts);
    out.quadruplets.push_back({ts, map.inverse_apply(rel), geo});
  }

  out.config.ukf = cfg.ukf;
  out.config.synth.scenario = cfg.name;
  out.config.synth.seed = cfg.seed;
  return out;
}

std::vector<ScenarioConfig> bundled_scenarios() {
  std::vector<ScenarioConfig> out;

  // Zigzag across the near and middle field; not collinear in either frame.
  const std::vector<Waypoint> near_cal = {{0.0, {-20.0, 40.0}}, {5.0, {25.0, 60.0}}, {10.0, {-35.0, 90.0}},
                                          {15.0, {45.0, 120.0}}, {20.0, {-50.0, 150.0}}};

  {
    ScenarioConfig s;
    s.name = "noiseless-straight";
    s.seed = 1;
    s.duration_s = 20.0;
    BoatSpec t;
    t.target = true;
    t.waypoints = {{0.0, {-30.0, 70.0}}};
    t.velocity = {3.0, 0.5};
    t.p_c_mean = 0.95;
    s.boats = {t};
    s.calibration_path = near_cal;
    s.ukf.params.r_pos = 1e-4;
    s.ukf.params.q_intensity = 0.01;
    out.push_back(s);
  }
  {
    ScenarioConfig s;
    s.name = "noisy-near-horizon";
    s.seed = 2;
    s.duration_s = 30.0;
    s.camera.pinhole.pitch_deg = 2.0;
    BoatSpec t;
    t.target = true;
    t.waypoints = {{0.0, {-60.0, 260.0}}};
    t.velocity = {4.0, -1.0};
    t.p_c_mean = 0.95;
    t.p_c_std = 0.02;
    t.width_m = 12.0;
    s.boats = {t};
    s.noise.pixel_std = 1.0;
    s.calibration_path = {{0.0, {-30.0, 60.0}}, {6.0, {40.0, 110.0}}, {12.0, {-90.0, 200.0}},
                          {18.0, {100.0, 260.0}}, {24.0, {-110.0, 300.0}}, {30.0, {60.0, 320.0}}};
    s.ukf.params.r_pos = 0.0;
    s.ukf.params.q_intensity = 0.01;
    s.ukf.pixel_std = 1.0;
    out.push_back(s);
  }
  {
    ScenarioConfig s;
    s.name = "crossing-distractor";
    s.seed = 3;
    s.duration_s = 20.0;
    BoatSpec t;
    t.target = true;
    t.waypoints = {{0.0, {-30.0, 80.0}}};
    t.velocity = {3.0, 0.0};
    t.p_c_mean = 0.95;
    t.p_c_std = 0.02;
    BoatSpec d = t;
    d.target = false;
    d.waypoints = {{0.0, {30.0, 82.0}}};
    d.velocity = {-3.0, 0.0};
    d.p_c_mean = 0.05;
    s.boats = {t, d};
    s.noise.pixel_std = 0.5;
    s.calibration_path = near_cal;
    s.ukf.params.r_pos = 0.05;
    s.ukf.params.q_intensity = 0.01;
    out.push_back(s);
  }
  {
    ScenarioConfig s;
    s.name = "occlusion-gap";
    s.seed = 4;
    s.duration_s = 20.0;
    BoatSpec t;
    t.target = true;
    t.waypoints = {{0.0, {-30.0, 70.0}}};
    t.velocity = {3.0, 0.5};
    t.p_c_mean = 0.95;
    t.p_c_std = 0.02;
    s.boats = {t};
    s.noise.pixel_std = 0.5;
    s.noise.dropout_windows = {{8.0, 8.5}};
    s.calibration_path = near_cal;
    s.ukf.params.r_pos = 0.05;
    s.ukf.params.q_intensity = 0.01;
    out.push_back(s);
  }
  {
    ScenarioConfig s;
    s.name = "moving-platform";
    s.seed = 5;
    s.duration_s = 20.0;
    s.camera.velocity = {2.0, 3.0};
    s.camera.emit_heading = true;
    BoatSpec t;
    t.target = true;
    t.waypoints = {{0.0, {-30.0, 70.0}}};
    t.velocity = {4.0, 3.5};
    t.p_c_mean = 0.95;
    s.boats = {t};
    s.calibration_path = near_cal;
    s.ukf.params.r_pos = 1e-4;
    s.ukf.params.q_intensity = 0.01;
    out.push_back(s);
  }
  return out;
}

ScenarioConfig bundled_scenario(const std::string& name) {
  for (auto& s : bundled_scenarios()) {
    if (s.name == name) return s;
  }
  fail(ErrorCode::InvalidArgument, "unknown scenario '" + name + "'");
}

ScenarioConfig with_overrides(ScenarioConfig cfg, const SynthSettings& settings) {
  if (settings.seed) cfg.seed = *settings.seed;
  if (settings.pixel_std) cfg.noise.pixel_std = *settings.pixel_std;
  if (settings.dropout_prob) cfg.noise.dropout_prob = *settings.dropout_prob;
  if (settings.duration_s) cfg.duration_s = *settings.duration_s;
  if (settings.fps) cfg.fps = *settings.fps;
  return cfg;
}

std::string scenario_to_json(const ScenarioConfig& cfg) {
  json j;
  j["name"] = cfg.name;
  j["seed"] = cfg.seed;
  j["duration_s"] = cfg.duration_s;
  j["fps"] = cfg.fps;
  json cam;
  cam["start"] = {{"lat", cfg.camera.start.lat_deg}, {"lon", cfg.camera.start.lon_deg}};
  cam["velocity"] = vec(cfg.camera.velocity);
  cam["heading_deg"] = cfg.camera.heading_deg;
  cam["emit_heading"] = cfg.camera.emit_heading;
  const Pinhole& p = cfg.camera.pinhole;
  cam["pinhole"] = {{"height_m", p.height_m}, {"pitch_deg", p.pitch_deg}, {"focal_px", p.focal_px}, {"cx", p.cx}, {"cy", p.cy}};
  if (cfg.camera.homography) {
    json h = json::array();
    for (int i = 0; i < 9; ++i) h.push_back((*cfg.camera.homography)(i / 3, i % 3));
    cam["homography"] = h;
  }
  j["camera"] = cam;
  json boats = json::array();
  for (const auto& b : cfg.boats) {
    boats.push_back({{"target", b.target},
                     {"waypoints", waypoints_json(b.waypoints)},
                     {"velocity", vec(b.velocity)},
                     {"p_c_mean", b.p_c_mean},
                     {"p_c_std", b.p_c_std},
                     {"width_m", b.width_m},
                     {"aspect", b.aspect},
                     {"det_score", b.det_score}});
  }
  j["boats"] = boats;
  json windows = json::array();
  for (const auto& [a, e] : cfg.noise.dropout_windows) windows.push_back({a, e});
  j["noise"] = {{"pixel_std", cfg.noise.pixel_std}, {"dropout_prob", cfg.noise.dropout_prob}, {"dropout_windows", windows}};
  j["distractors"] = cfg.distractors;
  j["calibration_path"] = waypoints_json(cfg.calibration_path);
  j["quad_interval_s"] = cfg.quad_interval_s;
  j["truth_interval_s"] = cfg.truth_interval_s;
  const UkfParams& u = cfg.ukf.params;
  j["ukf"] = {{"spread", u.spread},           {"prior_knowledge", u.prior_knowledge}, {"secondary_scaling", u.secondary_scaling},
              {"q_intensity", u.q_intensity}, {"r_pos", u.r_pos},                     {"init_vel_var", u.init_vel_var},
              {"r_floor", u.r_floor},         {"pixel_std", cfg.ukf.pixel_std}};
  return j.dump(2) + "\n";
}

ScenarioConfig scenario_from_json(const std::string& text, const std::string& origin) {
  ScenarioConfig cfg;
  try {
    const json j = json::parse(text);
    cfg.name = j.value("name", std::string("custom"));
    cfg.seed = j.value("seed", cfg.seed);
    cfg.duration_s = j.value("duration_s", cfg.duration_s);
    cfg.fps = j.value("fps", cfg.fps);
    if (j.contains("camera")) {
      const json& c = j.at("camera");
      if (c.contains("start")) cfg.camera.start = {c.at("start").at("lat").get<double>(), c.at("start").at("lon").get<double>()};
      if (c.contains("velocity")) cfg.camera.velocity = vec_from(c.at("velocity"), origin);
      cfg.camera.heading_deg = c.value("heading_deg", cfg.camera.heading_deg);
      cfg.camera.emit_heading = c.value("emit_heading", cfg.camera.emit_heading);
      if (c.contains("pinhole")) {
        const json& p = c.at("pinhole");
        Pinhole& ph = cfg.camera.pinhole;
        ph.height_m = p.value("height_m", ph.height_m);
        ph.pitch_deg = p.value("pitch_deg", ph.pitch_deg);
        ph.focal_px = p.value("focal_px", ph.focal_px);
        ph.cx = p.value("cx", ph.cx);
        ph.cy = p.value("cy", ph.cy);
      }
      if (c.contains("homography")) {
        const auto h = c.at("homography").get<std::vector<double>>();
        if (h.size() != 9) fail(ErrorCode::Parse, origin + ": camera.homography must hold 9 numbers");
        Eigen::Matrix3d m;
        for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = h[static_cast<std::size_t>(i)];
        cfg.camera.homography = m;
      }
    }
    for (const auto& b : j.value("boats", json::array())) {
      BoatSpec s;
      s.target = b.value("target", false);
      s.waypoints = waypoints_from(b.at("waypoints"), origin);
      if (b.contains("velocity")) s.velocity = vec_from(b.at("velocity"), origin);
      s.p_c_mean = b.value("p_c_mean", s.p_c_mean);
      s.p_c_std = b.value("p_c_std", s.p_c_std);
      s.width_m = b.value("width_m", s.width_m);
      s.aspect = b.value("aspect", s.aspect);
      s.det_score = b.value("det_score", s.det_score);
      cfg.boats.push_back(s);
    }
    if (j.contains("noise")) {
      const json& n = j.at("noise");
      cfg.noise.pixel_std = n.value("pixel_std", 0.0);
      cfg.noise.dropout_prob = n.value("dropout_prob", 0.0);
      for (const auto& w : n.value("dropout_windows", json::array())) {
        cfg.noise.dropout_windows.emplace_back(w.at(0).get<double>(), w.at(1).get<double>());
      }
    }
    cfg.distractors = j.value("distractors", 0);
    if (j.contains("calibration_path")) cfg.calibration_path = waypoints_from(j.at("calibration_path"), origin);
    cfg.quad_interval_s = j.value("quad_interval_s", cfg.quad_interval_s);
    cfg.truth_interval_s = j.value("truth_interval_s", cfg.truth_interval_s);
    if (j.contains("ukf")) {
      const json& u = j.at("ukf");
      UkfParams& p = cfg.ukf.params;
      p.spread = u.value("spread", p.spread);
      p.prior_knowledge = u.value("prior_knowledge", p.prior_knowledge);
      p.secondary_scaling = u.value("secondary_scaling", p.secondary_scaling);
      p.q_intensity = u.value("q_intensity", p.q_intensity);
      p.r_pos = u.value("r_pos", p.r_pos);
      p.init_vel_var = u.value("init_vel_var", p.init_vel_var);
      p.r_floor = u.value("r_floor", p.r_floor);
      cfg.ukf.pixel_std = u.value("pixel_std", cfg.ukf.pixel_std);
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::Parse, origin + ": " + e.what());
  }
  cfg.validate();
  return cfg;
}

void write_bundle(const SynthBundle& bundle, const ScenarioConfig& cfg, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::Io, "cannot create " + dir + ": " + ec.message());
  const std::filesystem::path d(dir);
  io::write_file_atomic((d / "detections.jsonl").string(), io::format_detections(bundle.detections));
  io::write_file_atomic((d / "camera.jsonl").string(), io::format_camera_track(bundle.camera_track));
  io::write_file_atomic((d / "quadruplets.jsonl").string(), io::format_quadruplets(bundle.quadruplets));
  io::write_file_atomic((d / "truth.jsonl").string(), io::format_truth(bundle.truth));
  io::write_file_atomic((d / "true_calibration.json").string(), io::format_calibration(bundle.true_calibration));
  std::string labels;
  for (const auto& l : bundle.labels) {
    labels += json{{"frame", l.frame}, {"index", l.index}, {"boat", l.boat}, {"target", l.target}}.dump() + "\n";
  }
  io::write_file_atomic((d / "labels.jsonl").string(), labels);
  io::write_file_atomic((d / "config.ini").string(), bundle.config.to_ini());
  io::write_file_atomic((d / "scenario.json").string(), scenario_to_json(cfg));
}

}  // namespace seapos::synth
