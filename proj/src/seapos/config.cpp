#include "seapos/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

#include "seapos/error.hpp"

namespace seapos {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& name, const std::string& value, const char* expected) {
  fail(ErrorCode::Parse, "config key " + name + ": expected " + expected + ", got '" + value + "'");
}

double to_double(const std::string& name, const std::string& raw) {
  const std::string v = trim(raw);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) bad_value(name, v, "a number");
  return out;
}

long to_long(const std::string& name, const std::string& raw) {
  const std::string v = trim(raw);
  long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) bad_value(name, v, "an integer");
  return out;
}

std::uint64_t to_u64(const std::string& name, const std::string& raw) {
  const std::string v = trim(raw);
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) bad_value(name, v, "an unsigned integer");
  return out;
}

// Shortest text that parses back to the same double.
std::string fmt(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

struct Key {
  std::function<void(Config&, const std::string& name, const std::string& value)> set;
  // Empty optional when the key is unset and should be omitted from to_ini().
  std::function<std::optional<std::string>(const Config&)> get;
};

DistortionParams& distortion(Config& c) {
  if (!c.calibration.distortion) c.calibration.distortion = DistortionParams{};
  return *c.calibration.distortion;
}

template <typename Get>
Key dbl(Get get) {
  return {[get](Config& c, const std::string& n, const std::string& v) { get(c) = to_double(n, v); },
          [get](const Config& c) -> std::optional<std::string> { return fmt(get(c)); }};
}

template <typename Get>
Key opt_dbl(Get get) {
  return {[get](Config& c, const std::string& n, const std::string& v) { get(c) = to_double(n, v); },
          [get](const Config& c) -> std::optional<std::string> {
            const auto& o = get(c);
            if (!o) return std::nullopt;
            return fmt(*o);
          }};
}

Key distortion_key(double DistortionParams::*member) {
  return {[member](Config& c, const std::string& n, const std::string& v) { distortion(c).*member = to_double(n, v); },
          [member](const Config& c) -> std::optional<std::string> {
            if (!c.calibration.distortion) return std::nullopt;
            return fmt((*c.calibration.distortion).*member);
          }};
}

const std::map<std::string, std::map<std::string, Key>>& registry() {
  static const std::map<std::string, std::map<std::string, Key>> keys = [] {
    std::map<std::string, std::map<std::string, Key>> k;
    auto& tr = k["tracker"];
    tr["alpha"] = dbl([](auto& c) -> auto& { return c.tracker.association.alpha; });
    tr["sigma"] = dbl([](auto& c) -> auto& { return c.tracker.association.sigma; });
    tr["p_thr"] = dbl([](auto& c) -> auto& { return c.tracker.association.p_thr; });
    tr["max_coast_frames"] = {
        [](Config& c, const std::string& n, const std::string& v) {
          c.tracker.association.max_coast_frames = static_cast<int>(to_long(n, v));
        },
        [](const Config& c) -> std::optional<std::string> {
          return std::to_string(c.tracker.association.max_coast_frames);
        }};
    tr["meas_std_xy"] = dbl([](auto& c) -> auto& { return c.tracker.noise.meas_std_xy; });
    tr["meas_std_w"] = dbl([](auto& c) -> auto& { return c.tracker.noise.meas_std_w; });
    tr["q"] = dbl([](auto& c) -> auto& { return c.tracker.noise.q; });
    tr["width_q"] = dbl([](auto& c) -> auto& { return c.tracker.noise.width_q; });
    tr["init_vel_var"] = dbl([](auto& c) -> auto& { return c.tracker.noise.init_vel_var; });
    tr["width_floor"] = dbl([](auto& c) -> auto& { return c.tracker.noise.width_floor; });
    tr["init_frame"] = {[](Config& c, const std::string& n, const std::string& v) { c.tracker.init_frame = to_long(n, v); },
                        [](const Config& c) -> std::optional<std::string> {
                          if (!c.tracker.init_frame) return std::nullopt;
                          return std::to_string(*c.tracker.init_frame);
                        }};
    tr["init_index"] = {[](Config& c, const std::string& n, const std::string& v) {
                          const long i = to_long(n, v);
                          if (i < 0) bad_value(n, v, "a non-negative integer");
                          c.tracker.init_index = static_cast<std::size_t>(i);
                        },
                        [](const Config& c) -> std::optional<std::string> {
                          if (!c.tracker.init_index) return std::nullopt;
                          return std::to_string(*c.tracker.init_index);
                        }};

    auto& ukf = k["ukf"];
    ukf["spread"] = dbl([](auto& c) -> auto& { return c.ukf.params.spread; });
    ukf["prior_knowledge"] = dbl([](auto& c) -> auto& { return c.ukf.params.prior_knowledge; });
    ukf["secondary_scaling"] = dbl([](auto& c) -> auto& { return c.ukf.params.secondary_scaling; });
    ukf["q_intensity"] = dbl([](auto& c) -> auto& { return c.ukf.params.q_intensity; });
    ukf["r_pos"] = dbl([](auto& c) -> auto& { return c.ukf.params.r_pos; });
    ukf["init_vel_var"] = dbl([](auto& c) -> auto& { return c.ukf.params.init_vel_var; });
    ukf["r_floor"] = dbl([](auto& c) -> auto& { return c.ukf.params.r_floor; });
    ukf["pixel_std"] = dbl([](auto& c) -> auto& { return c.ukf.pixel_std; });

    auto& cal = k["calibration"];
    cal["earth_radius_m"] = dbl([](auto& c) -> auto& { return c.calibration.earth_radius_m; });
    cal["anchoring"] = {[](Config& c, const std::string& n, const std::string& raw) {
                          const std::string v = trim(raw);
                          if (v == "per_frame") {
                            c.calibration.anchoring = Anchoring::PerFrame;
                          } else if (v == "fixed") {
                            c.calibration.anchoring = Anchoring::Fixed;
                          } else {
                            bad_value(n, v, "per_frame or fixed");
                          }
                        },
                        [](const Config& c) -> std::optional<std::string> {
                          return c.calibration.anchoring == Anchoring::PerFrame ? "per_frame" : "fixed";
                        }};
    cal["distortion_k1"] = distortion_key(&DistortionParams::k1);
    cal["distortion_k2"] = distortion_key(&DistortionParams::k2);
    cal["distortion_cx"] = distortion_key(&DistortionParams::cx);
    cal["distortion_cy"] = distortion_key(&DistortionParams::cy);
    cal["distortion_f"] = distortion_key(&DistortionParams::f);

    auto& syn = k["synth"];
    syn["scenario"] = {[](Config& c, const std::string&, const std::string& v) { c.synth.scenario = trim(v); },
                       [](const Config& c) -> std::optional<std::string> { return c.synth.scenario; }};
    syn["seed"] = {[](Config& c, const std::string& n, const std::string& v) { c.synth.seed = to_u64(n, v); },
                   [](const Config& c) -> std::optional<std::string> {
                     if (!c.synth.seed) return std::nullopt;
                     return std::to_string(*c.synth.seed);
                   }};
    syn["pixel_std"] = opt_dbl([](auto& c) -> auto& { return c.synth.pixel_std; });
    syn["dropout_prob"] = opt_dbl([](auto& c) -> auto& { return c.synth.dropout_prob; });
    syn["duration_s"] = opt_dbl([](auto& c) -> auto& { return c.synth.duration_s; });
    syn["fps"] = opt_dbl([](auto& c) -> auto& { return c.synth.fps; });
    return k;
  }();
  return keys;
}

}  // namespace

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
  const auto& reg = registry();
  const auto s = reg.find(section);
  if (s == reg.end()) fail(ErrorCode::Parse, "unknown config section [" + section + "]");
  const auto k = s->second.find(key);
  if (k == s->second.end()) fail(ErrorCode::Parse, "unknown config key " + section + "." + key);
  k->second.set(*this, section + "." + key, value);
}

void Config::validate() const {
  tracker.association.validate();
  tracker.noise.validate();
  ukf.params.validate();
  if (!(ukf.pixel_std >= 0.0)) fail(ErrorCode::InvalidArgument, "ukf.pixel_std must be non-negative");
  if (!(calibration.earth_radius_m > 0.0)) fail(ErrorCode::InvalidArgument, "calibration.earth_radius_m must be positive");
  if (calibration.distortion && !(calibration.distortion->f > 0.0)) {
    fail(ErrorCode::InvalidArgument, "calibration.distortion_f must be positive");
  }
}

Config Config::parse(const std::string& text, const std::string& origin) {
  boost::property_tree::ptree tree;
  std::istringstream is(text);
  try {
    boost::property_tree::read_ini(is, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    std::ostringstream os;
    os << origin << ":" << e.line() << ": " << e.message();
    fail(ErrorCode::Parse, os.str());
  }
  Config c;
  for (const auto& [section, keys] : tree) {
    if (keys.empty() && !keys.data().empty()) fail(ErrorCode::Parse, origin + ": key '" + section + "' outside a section");
    for (const auto& [key, value] : keys) {
      try {
        c.set(section, key, value.data());
      } catch (const Error& e) {
        fail(ErrorCode::Parse, origin + ": " + e.what());
      }
    }
  }
  c.validate();
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

std::string Config::to_ini() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [section, keys] : registry()) {
    if (!first) os << "\n";
    first = false;
    os << "[" << section << "]\n";
    for (const auto& [key, k] : keys) {
      if (const auto v = k.get(*this)) os << key << " = " << *v << "\n";
    }
  }
  return os.str();
}

}  // namespace seapos
