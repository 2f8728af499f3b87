#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "seapos.h"

namespace {

struct CliError {
  sp_status status;
};

void check(sp_status s) {
  if (s != SP_OK) throw CliError{s};
}

template <typename T, void (*Destroy)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Destroy(ptr); }
  T** out() { return &ptr; }
  T* get() const { return ptr; }
};

using Config = Handle<sp_config, sp_config_destroy>;
using Detections = Handle<sp_detections, sp_detections_destroy>;
using CameraTrack = Handle<sp_camera_track, sp_camera_track_destroy>;
using Truth = Handle<sp_truth, sp_truth_destroy>;
using Calibration = Handle<sp_calibration, sp_calibration_destroy>;
using Trajectory = Handle<sp_trajectory, sp_trajectory_destroy>;
using Report = Handle<sp_report, sp_report_destroy>;

struct OwnedString {
  char* s = nullptr;
  ~OwnedString() { sp_string_free(s); }
};

// Options shared by every subcommand that needs a configuration.
struct ConfigOptions {
  std::string path;
  std::vector<std::string> sets;
  std::map<std::string, std::string> flags;  // "section.key" -> value
};

void add_config_options(CLI::App* app, ConfigOptions& opts) {
  app->add_option("--config", opts.path, "INI configuration file")->check(CLI::ExistingFile);
  app->add_option("--set", opts.sets, "Override a config key, section.key=value")->take_all();
  struct Flag {
    const char* name;
    const char* key;
    const char* help;
  };
  static const Flag flags[] = {
      {"--alpha", "tracker.alpha", "Weight of the classifier probability in the association score"},
      {"--sigma", "tracker.sigma", "Gating scale in pixels"},
      {"--p-thr", "tracker.p_thr", "Association threshold"},
      {"--max-coast-frames", "tracker.max_coast_frames", "Frames a track may coast before it is lost"},
      {"--spread", "ukf.spread", "Sigma point spread"},
      {"--prior-knowledge", "ukf.prior_knowledge", "Distribution prior (2 for Gaussian)"},
      {"--secondary-scaling", "ukf.secondary_scaling", "Secondary scaling parameter"},
      {"--q-intensity", "ukf.q_intensity", "World process noise intensity, m^2/s^3"},
      {"--r-pos", "ukf.r_pos", "World measurement variance, m^2"},
  };
  for (const Flag& f : flags) {
    app->add_option_function<std::string>(
        f.name, [&opts, key = std::string(f.key)](const std::string& v) { opts.flags[key] = v; }, f.help);
  }
}

void apply_set(sp_config* cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
    std::fprintf(stderr, "seapos: --set expects section.key=value, got '%s'\n", assignment.c_str());
    throw CliError{SP_ERR_INVALID_ARGUMENT};
  }
  const std::string section = assignment.substr(0, dot);
  const std::string key = assignment.substr(dot + 1, eq - dot - 1);
  const std::string value = assignment.substr(eq + 1);
  check(sp_config_set(cfg, section.c_str(), key.c_str(), value.c_str()));
}

void build_config(const ConfigOptions& opts, Config& cfg) {
  if (opts.path.empty()) {
    check(sp_config_create(cfg.out()));
  } else {
    check(sp_config_load(opts.path.c_str(), cfg.out()));
  }
  for (const auto& [key, value] : opts.flags) apply_set(cfg.get(), key + "=" + value);
  for (const auto& s : opts.sets) apply_set(cfg.get(), s);
}

int run_calibrate(const ConfigOptions& copts, const std::string& quads, const std::string& camera,
                  const std::string& out) {
  Config cfg;
  build_config(copts, cfg);
  CameraTrack track;
  check(sp_camera_track_load(camera.c_str(), track.out()));
  Calibration cal;
  check(sp_calibrate(quads.c_str(), track.get(), cfg.get(), cal.out()));
  check(sp_calibration_save(cal.get(), out.c_str()));
  std::printf("calibration written to %s (condition %.3e)\n", out.c_str(), sp_calibration_condition(cal.get()));
  return 0;
}

int run_track(const ConfigOptions& copts, const std::string& detections, const std::string& camera,
              const std::string& calibration, const std::string& out) {
  Config cfg;
  build_config(copts, cfg);
  Detections dets;
  check(sp_detections_load(detections.c_str(), dets.out()));
  CameraTrack track;
  check(sp_camera_track_load(camera.c_str(), track.out()));
  Calibration cal;
  check(sp_calibration_load(calibration.c_str(), cal.out()));
  Trajectory traj;
  check(sp_track(dets.get(), track.get(), cal.get(), cfg.get(), traj.out()));
  check(sp_trajectory_save(traj.get(), out.c_str()));
  std::printf("%zu trajectory points written to %s\n", sp_trajectory_size(traj.get()), out.c_str());
  return 0;
}

int run_eval(const std::string& trajectory, const std::string& truth_path, bool skip_coasted,
             const std::string& json_out, const std::string& plot_out) {
  Trajectory traj;
  check(sp_trajectory_load(trajectory.c_str(), traj.out()));
  Truth truth;
  check(sp_truth_load(truth_path.c_str(), truth.out()));
  Report report;
  check(sp_evaluate(traj.get(), truth.get(), skip_coasted ? 1 : 0, report.out()));
  OwnedString text;
  check(sp_report_text(report.get(), &text.s));
  std::fputs(text.s, stdout);
  if (!json_out.empty()) check(sp_report_save(report.get(), json_out.c_str()));
  if (!plot_out.empty()) check(sp_plot_data_save(traj.get(), truth.get(), plot_out.c_str()));
  return 0;
}

int run_synth(const ConfigOptions& copts, const std::string& scenario, const std::string& scenario_file,
              const std::string& out_dir, bool list) {
  if (list) {
    for (size_t i = 0; i < sp_synth_scenario_count(); ++i) std::printf("%s\n", sp_synth_scenario_name(i));
    return 0;
  }
  if (out_dir.empty()) {
    std::fprintf(stderr, "seapos: synth requires --out-dir\n");
    return 2;
  }
  Config cfg;
  build_config(copts, cfg);
  check(sp_synth_generate(scenario.empty() ? nullptr : scenario.c_str(),
                          scenario_file.empty() ? nullptr : scenario_file.c_str(), cfg.get(), out_dir.c_str()));
  std::printf("bundle written to %s\n", out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geopositioning of a tracked boat from a camera on a moving platform"};
  app.set_version_flag("--version", sp_version());
  app.require_subcommand(1);

  ConfigOptions cal_cfg, track_cfg, synth_cfg;
  std::string quads, camera, out, detections, calibration, trajectory, truth, json_out, plot_out;
  std::string scenario, scenario_file, out_dir;
  bool skip_coasted = false;
  bool list = false;

  auto* cal = app.add_subcommand("calibrate", "Estimate the pixel to sea-plane homography");
  cal->add_option("--quadruplets", quads, "Calibration quadruplets (JSONL)")->required();
  cal->add_option("--camera", camera, "Camera GPS track (JSONL)")->required();
  cal->add_option("--out", out, "Output calibration file (JSON)")->required();
  add_config_options(cal, cal_cfg);

  auto* track = app.add_subcommand("track", "Track the target and geoposition it");
  track->add_option("--detections", detections, "Detections (JSONL)")->required();
  track->add_option("--camera", camera, "Camera GPS track (JSONL)")->required();
  track->add_option("--calibration", calibration, "Calibration file (JSON)")->required();
  track->add_option("--out", out, "Output trajectory (JSONL)")->required();
  add_config_options(track, track_cfg);

  auto* eval = app.add_subcommand("eval", "Compare a trajectory with ground truth");
  eval->add_option("--trajectory", trajectory, "Trajectory (JSONL)")->required();
  eval->add_option("--truth", truth, "Ground truth (JSONL)")->required();
  eval->add_option("--json-out", json_out, "Write the report as JSON");
  eval->add_option("--plot-out", plot_out, "Write raw, smoothed and truth polylines (JSON)");
  eval->add_flag("--skip-coasted", skip_coasted, "Exclude coasted points from the statistics");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic scenario bundle");
  synth->add_option("--scenario", scenario, "Bundled scenario name");
  synth->add_option("--scenario-file", scenario_file, "Scenario description (JSON)")->check(CLI::ExistingFile);
  synth->add_option("--out-dir", out_dir, "Output directory");
  synth->add_flag("--list", list, "List bundled scenarios");
  add_config_options(synth, synth_cfg);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cal) return run_calibrate(cal_cfg, quads, camera, out);
    if (*track) return run_track(track_cfg, detections, camera, calibration, out);
    if (*eval) return run_eval(trajectory, truth, skip_coasted, json_out, plot_out);
    if (*synth) return run_synth(synth_cfg, scenario, scenario_file, out_dir, list);
  } catch (const CliError& e) {
    const char* detail = sp_last_error();
    std::fprintf(stderr, "seapos: %s: %s\n", sp_status_string(e.status), detail != nullptr ? detail : "");
    return 1;
  }
  return 0;
}
