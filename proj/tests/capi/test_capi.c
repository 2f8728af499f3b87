#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>
#include <sys/stat.h>

#include "seapos.h"

static int failures = 0;

#define EXPECT(cond)                                                   \
  do {                                                                 \
    if (!(cond)) {                                                     \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                      \
    }                                                                  \
  } while (0)

#define EXPECT_OK(call)                                                              \
  do {                                                                               \
    sp_status s_ = (call);                                                           \
    if (s_ != SP_OK) {                                                               \
      fprintf(stderr, "%s:%d: %s -> %s: %s\n", __FILE__, __LINE__, #call,            \
              sp_status_string(s_), sp_last_error());                                \
      ++failures;                                                                    \
    }                                                                                \
  } while (0)

static char* join(const char* dir, const char* name) {
  static char buf[4][1024];
  static int slot = 0;
  char* out = buf[slot++ % 4];
  snprintf(out, sizeof buf[0], "%s/%s", dir, name);
  return out;
}

static void test_errors(void) {
  sp_config* cfg = NULL;
  sp_detections* dets = NULL;
  sp_calibration* cal = NULL;

  EXPECT(sp_config_load("/nonexistent/seapos.ini", &cfg) == SP_ERR_IO);
  EXPECT(cfg == NULL);
  EXPECT(strlen(sp_last_error()) > 0);
  EXPECT(sp_detections_load("/nonexistent/dets.jsonl", &dets) == SP_ERR_IO);
  EXPECT(sp_calibration_load("/nonexistent/cal.json", &cal) == SP_ERR_IO);
  EXPECT(sp_config_create(NULL) == SP_ERR_INVALID_ARGUMENT);

  EXPECT_OK(sp_config_create(&cfg));
  EXPECT(sp_config_set(cfg, "tracker", "alpha", "abc") == SP_ERR_PARSE);
  EXPECT(sp_config_set(cfg, "tracker", "nope", "1") == SP_ERR_PARSE);
  EXPECT(sp_config_set(cfg, "tracker", "p_thr", "2") == SP_ERR_INVALID_ARGUMENT);
  EXPECT_OK(sp_config_set(cfg, "tracker", "sigma", "12.5"));
  {
    char* ini = NULL;
    EXPECT_OK(sp_config_to_ini(cfg, &ini));
    EXPECT(ini != NULL && strstr(ini, "sigma = 12.5") != NULL);
    EXPECT(ini != NULL && strstr(ini, "p_thr = 0.51") != NULL);
    sp_string_free(ini);
  }
  sp_config_destroy(cfg);

  EXPECT(strcmp(sp_status_string(SP_OK), "ok") == 0);
  EXPECT(strlen(sp_status_string(SP_ERR_DEGENERATE)) > 0);
  EXPECT(sp_synth_scenario_name(1000) == NULL);
  EXPECT(sp_trajectory_size(NULL) == 0);
  sp_trajectory_destroy(NULL);
}

static void test_chain(const char* dir) {
  sp_config* cfg = NULL;
  sp_camera_track* track = NULL;
  sp_calibration* cal = NULL;
  sp_calibration* reloaded = NULL;
  sp_detections* dets = NULL;
  sp_trajectory* traj = NULL;
  sp_truth* truth = NULL;
  sp_report* report = NULL;
  sp_error_stats raw, smoothed;
  sp_trajectory_point pt;
  double h[9];
  size_t n, i;

  EXPECT(sp_synth_scenario_count() == 5);
  EXPECT(strcmp(sp_synth_scenario_name(0), "noiseless-straight") == 0);
  EXPECT_OK(sp_synth_generate("noiseless-straight", NULL, NULL, dir));
  EXPECT_OK(sp_config_load(join(dir, "config.ini"), &cfg));
  EXPECT_OK(sp_camera_track_load(join(dir, "camera.jsonl"), &track));
  EXPECT_OK(sp_calibrate(join(dir, "quadruplets.jsonl"), track, cfg, &cal));
  EXPECT(sp_calibration_condition(cal) >= 1.0);
  EXPECT(fabs(sp_calibration_origin(cal).lat_deg - 36.0) < 1e-12);
  sp_calibration_homography(cal, h);
  {
    double norm = 0.0;
    for (i = 0; i < 9; ++i) norm += h[i] * h[i];
    EXPECT(fabs(norm - 1.0) < 1e-12);
    EXPECT(h[8] >= 0.0);
  }
  EXPECT_OK(sp_calibration_save(cal, join(dir, "cal.json")));
  EXPECT_OK(sp_calibration_load(join(dir, "cal.json"), &reloaded));
  {
    sp_local_point a, b;
    EXPECT_OK(sp_calibration_apply(cal, 640.0, 500.0, &a));
    EXPECT_OK(sp_calibration_apply(reloaded, 640.0, 500.0, &b));
    EXPECT(a.east_m == b.east_m && a.north_m == b.north_m);
  }

  EXPECT_OK(sp_detections_load(join(dir, "detections.jsonl"), &dets));
  EXPECT(sp_detections_frame_count(dets) == 601);
  EXPECT_OK(sp_track(dets, track, reloaded, cfg, &traj));
  n = sp_trajectory_size(traj);
  EXPECT(n == 601);
  EXPECT_OK(sp_trajectory_point_at(traj, 0, &pt));
  EXPECT(pt.frame == 0 && pt.coasted == 0);
  EXPECT(sp_trajectory_point_at(traj, n, &pt) == SP_ERR_INVALID_ARGUMENT);
  EXPECT_OK(sp_trajectory_save(traj, join(dir, "traj.jsonl")));

  EXPECT_OK(sp_truth_load(join(dir, "truth.jsonl"), &truth));
  EXPECT_OK(sp_evaluate(traj, truth, 0, &report));
  EXPECT_OK(sp_report_stats(report, 0, &raw));
  EXPECT_OK(sp_report_stats(report, 1, &smoothed));
  EXPECT(smoothed.rmse_m < 0.05);
  EXPECT(raw.n_matched == 21);
  {
    char* json = NULL;
    char* text = NULL;
    EXPECT_OK(sp_report_json(report, &json));
    EXPECT_OK(sp_report_text(report, &text));
    EXPECT(json != NULL && strstr(json, "\"rmse_m\"") != NULL);
    EXPECT(text != NULL && strstr(text, "smoothed") != NULL);
    sp_string_free(json);
    sp_string_free(text);
  }
  EXPECT_OK(sp_report_save(report, join(dir, "report.json")));
  EXPECT_OK(sp_plot_data_save(traj, truth, join(dir, "plot.json")));

  sp_report_destroy(report);
  sp_truth_destroy(truth);
  sp_trajectory_destroy(traj);
  sp_detections_destroy(dets);
  sp_calibration_destroy(reloaded);
  sp_calibration_destroy(cal);
  sp_camera_track_destroy(track);
  sp_config_destroy(cfg);
}

int main(int argc, char** argv) {
  const char* dir = argc > 1 ? argv[1] : "capi_work";
  mkdir(dir, 0755);
  printf("seapos %s\n", sp_version());
  test_errors();
  test_chain(dir);
  if (failures) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  printf("all C API checks passed\n");
  return 0;
}
