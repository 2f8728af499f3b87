#include "seapos/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "seapos/error.hpp"

namespace seapos::io {
namespace {

using nlohmann::json;

struct Record {
  const json& j;
  const std::string& where;

  [[noreturn]] void error(const std::string& msg) const { fail(ErrorCode::Parse, where + ": " + msg); }

  const json& field(const char* name) const {
    const auto it = j.find(name);
    if (it == j.end()) error(std::string("missing field '") + name + "'");
    return *it;
  }
  bool has(const char* name) const {
    const auto it = j.find(name);
    return it != j.end() && !it->is_null();
  }
  double number(const char* name) const { return as_number(field(name), name); }
  double as_number(const json& v, const char* name) const {
    if (!v.is_number()) error(std::string("field '") + name + "' must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) error(std::string("field '") + name + "' is not finite");
    return d;
  }
  long integer(const char* name) const {
    const json& v = field(name);
    if (!v.is_number_integer()) error(std::string("field '") + name + "' must be an integer");
    return v.get<long>();
  }
  std::optional<double> optional_number(const char* name) const {
    if (!has(name)) return std::nullopt;
    return number(name);
  }
  bool boolean(const char* name) const {
    const json& v = field(name);
    if (!v.is_boolean()) error(std::string("field '") + name + "' must be a boolean");
    return v.get<bool>();
  }
  GeoPoint geo(const char* lat, const char* lon) const {
    const GeoPoint g{number(lat), number(lon)};
    try {
      validate(g);
    } catch (const Error& e) {
      error(e.what());
    }
    return g;
  }
};

void for_each_record(const std::string& text, const std::string& origin, const std::function<void(const Record&)>& fn) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = origin + ":" + std::to_string(lineno);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      fail(ErrorCode::Parse, where + ": invalid JSON (" + e.what() + ")");
    }
    if (!j.is_object()) fail(ErrorCode::Parse, where + ": record must be a JSON object");
    fn(Record{j, where});
  }
}

std::string jsonl(const std::vector<json>& records) {
  std::string out;
  for (const auto& r : records) {
    out += r.dump();
    out += '\n';
  }
  return out;
}

json similarity_json(const Similarity2D& s) {
  const Eigen::Matrix3d m = s.matrix();
  json arr = json::array();
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) arr.push_back(m(r, c));
  return arr;
}

Eigen::Matrix3d matrix_from(const json& v, const std::string& where, const char* name) {
  if (!v.is_array() || v.size() != 9) fail(ErrorCode::Parse, where + ": '" + name + "' must hold 9 numbers");
  Eigen::Matrix3d m;
  for (int i = 0; i < 9; ++i) {
    if (!v[static_cast<std::size_t>(i)].is_number()) fail(ErrorCode::Parse, where + ": '" + name + "' must hold 9 numbers");
    m(i / 3, i % 3) = v[static_cast<std::size_t>(i)].get<double>();
  }
  return m;
}

Similarity2D similarity_from(const json& v, const std::string& where, const char* name) {
  const Eigen::Matrix3d m = matrix_from(v, where, name);
  if (m(0, 1) != 0.0 || m(1, 0) != 0.0 || m(0, 0) != m(1, 1) || m(2, 0) != 0.0 || m(2, 1) != 0.0 || m(2, 2) != 1.0) {
    fail(ErrorCode::Parse, where + ": '" + name + "' is not an isotropic similarity");
  }
  return {m(0, 0), m.block<2, 1>(0, 2)};
}

json stats_json(const ErrorStats& s) {
  json j;
  j["rmse_m"] = s.rmse_m;
  j["mean_err_m"] = s.mean_err_m;
  j["max_err_m"] = s.max_err_m;
  j["rmse_east_m"] = s.rmse_east_m;
  j["rmse_north_m"] = s.rmse_north_m;
  j["n_matched"] = s.n_matched;
  return j;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::Io, "cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) fail(ErrorCode::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) fail(ErrorCode::Io, "cannot rename " + tmp.string() + " to " + path + ": " + ec.message());
}

std::vector<Detection> parse_detections(const std::string& text, const std::string& origin) {
  std::vector<Detection> out;
  for_each_record(text, origin, [&](const Record& r) {
    Detection d;
    d.frame = r.integer("frame");
    d.t = r.number("t");
    const json& bbox = r.field("bbox");
    if (!bbox.is_array() || bbox.size() != 4) r.error("field 'bbox' must be [x, y, w, h]");
    d.bbox = {r.as_number(bbox[0], "bbox"), r.as_number(bbox[1], "bbox"), r.as_number(bbox[2], "bbox"),
              r.as_number(bbox[3], "bbox")};
    if (!(d.bbox.w > 0.0) || !(d.bbox.h > 0.0)) r.error("bbox width and height must be positive");
    d.det_score = r.optional_number("score");
    d.p_c = r.optional_number("p_c");
    for (const auto& [name, v] : {std::pair{"score", d.det_score}, std::pair{"p_c", d.p_c}}) {
      if (v && !(*v >= 0.0 && *v <= 1.0)) r.error(std::string("field '") + name + "' must lie in [0, 1]");
    }
    if (d.frame < 0) r.error("frame index must be non-negative");
    if (!out.empty()) {
      const Detection& prev = out.back();
      if (d.frame < prev.frame) r.error("frame index decreases");
      if (d.t < prev.t) r.error("timestamp decreases");
      if (d.frame == prev.frame && d.t != prev.t) r.error("timestamp differs within frame");
      if (d.frame != prev.frame && d.t == prev.t) r.error("distinct frames share a timestamp");
    }
    out.push_back(d);
  });
  return out;
}

std::vector<Detection> read_detections(const std::string& path) { return parse_detections(read_file(path), path); }

std::string format_detections(const std::vector<Detection>& dets) {
  std::vector<json> recs;
  recs.reserve(dets.size());
  for (const auto& d : dets) {
    json j;
    j["frame"] = d.frame;
    j["t"] = d.t;
    j["bbox"] = {d.bbox.x, d.bbox.y, d.bbox.w, d.bbox.h};
    if (d.det_score) j["score"] = *d.det_score;
    if (d.p_c) j["p_c"] = *d.p_c;
    recs.push_back(std::move(j));
  }
  return jsonl(recs);
}

std::vector<CameraSample> parse_camera_track(const std::string& text, const std::string& origin) {
  std::vector<CameraSample> out;
  for_each_record(text, origin, [&](const Record& r) {
    CameraSample s{r.number("t"), r.geo("lat", "lon"), r.optional_number("heading")};
    if (s.heading_deg && !(*s.heading_deg >= 0.0 && *s.heading_deg < 360.0)) r.error("heading must lie in [0, 360)");
    if (!out.empty() && !(s.t > out.back().t)) r.error("timestamps must strictly increase");
    out.push_back(s);
  });
  return out;
}

std::vector<CameraSample> read_camera_track(const std::string& path) { return parse_camera_track(read_file(path), path); }

std::string format_camera_track(const std::vector<CameraSample>& samples) {
  std::vector<json> recs;
  for (const auto& s : samples) {
    json j;
    j["t"] = s.t;
    j["lat"] = s.position.lat_deg;
    j["lon"] = s.position.lon_deg;
    if (s.heading_deg) j["heading"] = *s.heading_deg;
    recs.push_back(std::move(j));
  }
  return jsonl(recs);
}

std::vector<Quadruplet> parse_quadruplets(const std::string& text, const std::string& origin) {
  std::vector<Quadruplet> out;
  for_each_record(text, origin, [&](const Record& r) {
    out.push_back({r.number("t"), {r.number("u"), r.number("v")}, r.geo("lat", "lon")});
  });
  return out;
}

std::vector<Quadruplet> read_quadruplets(const std::string& path) { return parse_quadruplets(read_file(path), path); }

std::string format_quadruplets(const std::vector<Quadruplet>& quads) {
  std::vector<json> recs;
  for (const auto& q : quads) {
    json j;
    j["t"] = q.t;
    j["u"] = q.pixel.u;
    j["v"] = q.pixel.v;
    j["lat"] = q.geo.lat_deg;
    j["lon"] = q.geo.lon_deg;
    recs.push_back(std::move(j));
  }
  return jsonl(recs);
}

std::string format_calibration(const Calibration& cal) {
  const PlanarMap& m = cal.map;
  json j;
  json h = json::array();
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) h.push_back(m.h()(r, c));
  j["H"] = h;
  j["T_local"] = similarity_json(m.t_local());
  j["T_world"] = similarity_json(m.t_world());
  j["origin"] = {{"lat", cal.origin.lat_deg}, {"lon", cal.origin.lon_deg}};
  j["heading_ref"] = cal.heading_ref_deg ? json(*cal.heading_ref_deg) : json(nullptr);
  if (m.distortion()) {
    const DistortionParams& d = *m.distortion();
    j["distortion"] = {{"k1", d.k1}, {"k2", d.k2}, {"cx", d.cx}, {"cy", d.cy}, {"f", d.f}};
  } else {
    j["distortion"] = nullptr;
  }
  j["condition"] = std::isfinite(m.condition()) ? json(m.condition()) : json(nullptr);
  j["format_version"] = 1;
  return j.dump(2) + "\n";
}

Calibration parse_calibration(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::Parse, origin + ": invalid JSON (" + e.what() + ")");
  }
  if (!j.is_object()) fail(ErrorCode::Parse, origin + ": calibration must be a JSON object");
  const Record r{j, origin};
  if (r.integer("format_version") != 1) r.error("unsupported format_version");
  const json& o = r.field("origin");
  if (!o.is_object()) r.error("'origin' must be an object");
  const GeoPoint org = Record{o, origin}.geo("lat", "lon");
  std::optional<DistortionParams> dist;
  if (r.has("distortion")) {
    const Record d{r.field("distortion"), origin};
    if (!d.j.is_object()) r.error("'distortion' must be an object or null");
    dist = DistortionParams{d.number("k1"), d.number("k2"), d.number("cx"), d.number("cy"), d.number("f")};
  }
  const double condition = r.has("condition") ? r.number("condition") : std::numeric_limits<double>::infinity();
  try {
    PlanarMap map(matrix_from(r.field("H"), origin, "H"), similarity_from(r.field("T_local"), origin, "T_local"),
                  similarity_from(r.field("T_world"), origin, "T_world"), condition, dist);
    return {org, std::move(map), r.optional_number("heading_ref")};
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Parse) throw;
    fail(ErrorCode::Parse, origin + ": " + e.what());
  }
}

Calibration read_calibration(const std::string& path) { return parse_calibration(read_file(path), path); }

std::string format_trajectory(const GeoTrajectory& traj) {
  std::vector<json> recs;
  recs.reserve(traj.points.size());
  for (const auto& p : traj.points) {
    json j;
    j["t"] = p.t;
    j["lat"] = p.smoothed_geo.lat_deg;
    j["lon"] = p.smoothed_geo.lon_deg;
    j["lat_raw"] = p.raw_geo.lat_deg;
    j["lon_raw"] = p.raw_geo.lon_deg;
    j["east"] = p.smoothed_local.east_m;
    j["north"] = p.smoothed_local.north_m;
    j["coasted"] = p.coasted;
    recs.push_back(std::move(j));
  }
  return jsonl(recs);
}

GeoTrajectory parse_trajectory(const std::string& text, const std::string& origin) {
  GeoTrajectory traj;
  long index = 0;
  for_each_record(text, origin, [&](const Record& r) {
    TrajectoryPoint p;
    p.t = r.number("t");
    p.frame = index++;
    p.smoothed_geo = r.geo("lat", "lon");
    p.raw_geo = r.geo("lat_raw", "lon_raw");
    p.smoothed_local = {r.number("east"), r.number("north")};
    p.coasted = r.boolean("coasted");
    if (!traj.points.empty() && !(p.t > traj.points.back().t)) r.error("timestamps must strictly increase");
    constexpr double rad_to_deg = 180.0 / std::numbers::pi;
    const double ref_lat = p.smoothed_geo.lat_deg - p.smoothed_local.north_m / kDefaultEarthRadiusM * rad_to_deg;
    const double east_scale = kDefaultEarthRadiusM * std::cos(ref_lat / rad_to_deg);
    p.reference = {ref_lat, p.smoothed_geo.lon_deg - p.smoothed_local.east_m / east_scale * rad_to_deg};
    try {
      p.raw_local = geo_to_local(GeoReference(p.reference), p.raw_geo);
    } catch (const Error& e) {
      r.error(e.what());
    }
    traj.points.push_back(p);
  });
  return traj;
}

GeoTrajectory read_trajectory(const std::string& path) { return parse_trajectory(read_file(path), path); }

std::vector<TruthSample> parse_truth(const std::string& text, const std::string& origin) {
  std::vector<TruthSample> out;
  for_each_record(text, origin, [&](const Record& r) {
    TruthSample s{r.number("t"), r.geo("lat", "lon")};
    if (!out.empty() && s.t < out.back().t) r.error("timestamps must be sorted");
    out.push_back(s);
  });
  return out;
}

std::vector<TruthSample> read_truth(const std::string& path) { return parse_truth(read_file(path), path); }

std::string format_truth(const std::vector<TruthSample>& truth) {
  std::vector<json> recs;
  for (const auto& s : truth) recs.push_back({{"t", s.t}, {"lat", s.position.lat_deg}, {"lon", s.position.lon_deg}});
  return jsonl(recs);
}

std::string format_report_json(const EvalReport& report) {
  json j;
  j["raw"] = stats_json(report.raw);
  j["smoothed"] = stats_json(report.smoothed);
  j["skip_coasted"] = report.skip_coasted;
  return j.dump(2) + "\n";
}

std::string format_report_text(const EvalReport& report) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4);
  os << "matched truth samples: " << report.smoothed.n_matched << (report.skip_coasted ? " (coasted points skipped)" : "")
     << "\n";
  os << "              rmse_m    mean_m     max_m    east_m   north_m\n";
  for (const auto& [name, s] : {std::pair{"raw     ", &report.raw}, std::pair{"smoothed", &report.smoothed}}) {
    os << name << "  " << std::setw(10) << s->rmse_m << std::setw(10) << s->mean_err_m << std::setw(10) << s->max_err_m
       << std::setw(10) << s->rmse_east_m << std::setw(10) << s->rmse_north_m << "\n";
  }
  return os.str();
}

std::string format_plot_data(const GeoTrajectory& traj, const std::vector<TruthSample>& truth) {
  json j;
  json t = json::array(), raw = json::array(), sm = json::array();
  for (const auto& s : truth) t.push_back({s.position.lat_deg, s.position.lon_deg});
  for (const auto& p : traj.points) {
    raw.push_back({p.raw_geo.lat_deg, p.raw_geo.lon_deg});
    sm.push_back({p.smoothed_geo.lat_deg, p.smoothed_geo.lon_deg});
  }
  j["truth"] = t;
  j["raw"] = raw;
  j["smoothed"] = sm;
  return j.dump() + "\n";
}

}  // namespace seapos::io
