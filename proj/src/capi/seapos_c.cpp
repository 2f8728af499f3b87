#include "seapos.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "seapos/config.hpp"
#include "seapos/error.hpp"
#include "seapos/io.hpp"
#include "seapos/pipeline.hpp"
#include "seapos/synth.hpp"

struct sp_config {
  seapos::Config value;
};
struct sp_detections {
  std::vector<seapos::FrameDetections> frames;
};
struct sp_camera_track {
  seapos::CameraTrack value;
};
struct sp_truth {
  std::vector<seapos::TruthSample> samples;
};
struct sp_calibration {
  seapos::Calibration value;
};
struct sp_trajectory {
  seapos::GeoTrajectory value;
};
struct sp_report {
  seapos::EvalReport value;
};

namespace {

thread_local std::string g_last_error;

sp_status status_of(seapos::ErrorCode code) {
  using seapos::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return SP_ERR_INVALID_ARGUMENT;
    case ErrorCode::Domain: return SP_ERR_DOMAIN;
    case ErrorCode::Degenerate: return SP_ERR_DEGENERATE;
    case ErrorCode::Arity: return SP_ERR_ARITY;
    case ErrorCode::PointAtInfinity: return SP_ERR_POINT_AT_INFINITY;
    case ErrorCode::TimeOrder: return SP_ERR_TIME_ORDER;
    case ErrorCode::FilterDegeneracy: return SP_ERR_FILTER_DEGENERACY;
    case ErrorCode::Coverage: return SP_ERR_COVERAGE;
    case ErrorCode::EmptyReport: return SP_ERR_EMPTY_REPORT;
    case ErrorCode::Parse: return SP_ERR_PARSE;
    case ErrorCode::Io: return SP_ERR_IO;
    case ErrorCode::Generation: return SP_ERR_GENERATION;
  }
  return SP_ERR_INTERNAL;
}

sp_status set_error(sp_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

template <typename F>
sp_status guarded(F&& fn) {
  try {
    fn();
    return SP_OK;
  } catch (const seapos::DegenerateError& e) {
    return set_error(SP_ERR_DEGENERATE, std::string(e.what()) + " (condition " + std::to_string(e.condition()) + ")");
  } catch (const seapos::Error& e) {
    return set_error(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(SP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(SP_ERR_INTERNAL, e.what());
  }
}

void require(bool ok, const char* what) {
  if (!ok) seapos::fail(seapos::ErrorCode::InvalidArgument, what);
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

const seapos::Config& config_or_default(const sp_config* cfg) {
  static const seapos::Config defaults;
  return cfg != nullptr ? cfg->value : defaults;
}

sp_geo_point to_c(const seapos::GeoPoint& g) { return {g.lat_deg, g.lon_deg}; }
sp_local_point to_c(const seapos::LocalPoint& p) { return {p.east_m, p.north_m}; }

sp_error_stats to_c(const seapos::ErrorStats& s) {
  return {s.rmse_m, s.mean_err_m, s.max_err_m, s.rmse_east_m, s.rmse_north_m, s.n_matched};
}

}  // namespace

extern "C" {

const char* sp_version(void) { return "0.1.0"; }

const char* sp_status_string(sp_status status) {
  switch (status) {
    case SP_OK: return "ok";
    case SP_ERR_INTERNAL: return "internal error";
    default: return seapos::to_string(static_cast<seapos::ErrorCode>(status));
  }
}

const char* sp_last_error(void) { return g_last_error.c_str(); }

void sp_string_free(char* s) { std::free(s); }

sp_status sp_config_create(sp_config** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = new sp_config{};
  });
}

sp_status sp_config_load(const char* path, sp_config** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    auto cfg = std::make_unique<sp_config>(sp_config{seapos::Config::load(path)});
    *out = cfg.release();
  });
}

sp_status sp_config_set(sp_config* cfg, const char* section, const char* key, const char* value) {
  return guarded([&] {
    require(cfg != nullptr && section != nullptr && key != nullptr && value != nullptr, "null argument");
    seapos::Config next = cfg->value;
    next.set(section, key, value);
    next.validate();
    cfg->value = std::move(next);
  });
}

sp_status sp_config_to_ini(const sp_config* cfg, char** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = dup(config_or_default(cfg).to_ini());
  });
}

void sp_config_destroy(sp_config* cfg) { delete cfg; }

sp_status sp_detections_load(const char* path, sp_detections** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    const auto dets = seapos::io::read_detections(path);
    *out = new sp_detections{seapos::group_frames(dets)};
  });
}

size_t sp_detections_frame_count(const sp_detections* dets) { return dets != nullptr ? dets->frames.size() : 0; }

void sp_detections_destroy(sp_detections* dets) { delete dets; }

sp_status sp_camera_track_load(const char* path, sp_camera_track** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new sp_camera_track{seapos::CameraTrack(seapos::io::read_camera_track(path))};
  });
}

void sp_camera_track_destroy(sp_camera_track* track) { delete track; }

sp_status sp_truth_load(const char* path, sp_truth** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new sp_truth{seapos::io::read_truth(path)};
  });
}

void sp_truth_destroy(sp_truth* truth) { delete truth; }

sp_status sp_calibrate(const char* quadruplets_path, const sp_camera_track* track, const sp_config* cfg,
                       sp_calibration** out) {
  return guarded([&] {
    require(quadruplets_path != nullptr && track != nullptr && out != nullptr, "null argument");
    seapos::CalibrationSet set{seapos::io::read_quadruplets(quadruplets_path), track->value.samples()};
    *out = new sp_calibration{seapos::calibrate(set, config_or_default(cfg).calibration)};
  });
}

sp_status sp_calibration_load(const char* path, sp_calibration** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new sp_calibration{seapos::io::read_calibration(path)};
  });
}

sp_status sp_calibration_save(const sp_calibration* cal, const char* path) {
  return guarded([&] {
    require(cal != nullptr && path != nullptr, "null argument");
    seapos::io::write_file_atomic(path, seapos::io::format_calibration(cal->value));
  });
}

double sp_calibration_condition(const sp_calibration* cal) { return cal != nullptr ? cal->value.map.condition() : 0.0; }

sp_geo_point sp_calibration_origin(const sp_calibration* cal) {
  return cal != nullptr ? to_c(cal->value.origin) : sp_geo_point{0.0, 0.0};
}

void sp_calibration_homography(const sp_calibration* cal, double out[9]) {
  if (cal == nullptr || out == nullptr) return;
  for (int i = 0; i < 9; ++i) out[i] = cal->value.map.h()(i / 3, i % 3);
}

sp_status sp_calibration_apply(const sp_calibration* cal, double u, double v, sp_local_point* out) {
  return guarded([&] {
    require(cal != nullptr && out != nullptr, "null argument");
    *out = to_c(cal->value.map.apply({u, v}));
  });
}

void sp_calibration_destroy(sp_calibration* cal) { delete cal; }

sp_status sp_track(const sp_detections* dets, const sp_camera_track* track, const sp_calibration* cal,
                   const sp_config* cfg, sp_trajectory** out) {
  return guarded([&] {
    require(dets != nullptr && track != nullptr && cal != nullptr && out != nullptr, "null argument");
    *out = new sp_trajectory{seapos::run(dets->frames, track->value, cal->value, config_or_default(cfg))};
  });
}

size_t sp_trajectory_size(const sp_trajectory* traj) { return traj != nullptr ? traj->value.points.size() : 0; }

sp_status sp_trajectory_point_at(const sp_trajectory* traj, size_t index, sp_trajectory_point* out) {
  return guarded([&] {
    require(traj != nullptr && out != nullptr, "null argument");
    require(index < traj->value.points.size(), "trajectory index out of range");
    const seapos::TrajectoryPoint& p = traj->value.points[index];
    *out = {p.t, p.frame, to_c(p.raw_geo), to_c(p.smoothed_geo), to_c(p.raw_local), to_c(p.smoothed_local),
            p.coasted ? 1 : 0};
  });
}

sp_status sp_trajectory_save(const sp_trajectory* traj, const char* path) {
  return guarded([&] {
    require(traj != nullptr && path != nullptr, "null argument");
    seapos::io::write_file_atomic(path, seapos::io::format_trajectory(traj->value));
  });
}

sp_status sp_trajectory_load(const char* path, sp_trajectory** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new sp_trajectory{seapos::io::read_trajectory(path)};
  });
}

void sp_trajectory_destroy(sp_trajectory* traj) { delete traj; }

sp_status sp_evaluate(const sp_trajectory* traj, const sp_truth* truth, int skip_coasted, sp_report** out) {
  return guarded([&] {
    require(traj != nullptr && truth != nullptr && out != nullptr, "null argument");
    *out = new sp_report{seapos::evaluate(traj->value, truth->samples, skip_coasted != 0)};
  });
}

sp_status sp_report_stats(const sp_report* report, int smoothed, sp_error_stats* out) {
  return guarded([&] {
    require(report != nullptr && out != nullptr, "null argument");
    *out = to_c(smoothed != 0 ? report->value.smoothed : report->value.raw);
  });
}

sp_status sp_report_json(const sp_report* report, char** out) {
  return guarded([&] {
    require(report != nullptr && out != nullptr, "null argument");
    *out = dup(seapos::io::format_report_json(report->value));
  });
}

sp_status sp_report_text(const sp_report* report, char** out) {
  return guarded([&] {
    require(report != nullptr && out != nullptr, "null argument");
    *out = dup(seapos::io::format_report_text(report->value));
  });
}

sp_status sp_report_save(const sp_report* report, const char* path) {
  return guarded([&] {
    require(report != nullptr && path != nullptr, "null argument");
    seapos::io::write_file_atomic(path, seapos::io::format_report_json(report->value));
  });
}

void sp_report_destroy(sp_report* report) { delete report; }

sp_status sp_plot_data_save(const sp_trajectory* traj, const sp_truth* truth, const char* path) {
  return guarded([&] {
    require(traj != nullptr && truth != nullptr && path != nullptr, "null argument");
    seapos::io::write_file_atomic(path, seapos::io::format_plot_data(traj->value, truth->samples));
  });
}

size_t sp_synth_scenario_count(void) {
  static const size_t n = seapos::synth::bundled_scenarios().size();
  return n;
}

const char* sp_synth_scenario_name(size_t index) {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& s : seapos::synth::bundled_scenarios()) out.push_back(s.name);
    return out;
  }();
  return index < names.size() ? names[index].c_str() : nullptr;
}

sp_status sp_synth_generate(const char* scenario_name, const char* scenario_file, const sp_config* cfg,
                            const char* out_dir) {
  return guarded([&] {
    require(out_dir != nullptr, "out_dir is null");
    const seapos::Config& config = config_or_default(cfg);
    seapos::synth::ScenarioConfig scenario;
    if (scenario_file != nullptr) {
      scenario = seapos::synth::scenario_from_json(seapos::io::read_file(scenario_file), scenario_file);
    } else {
      scenario = seapos::synth::bundled_scenario(scenario_name != nullptr ? scenario_name : config.synth.scenario);
    }
    scenario = seapos::synth::with_overrides(std::move(scenario), config.synth);
    const auto bundle = seapos::synth::generate(scenario);
    seapos::synth::write_bundle(bundle, scenario, out_dir);
  });
}

}  // extern "C"
