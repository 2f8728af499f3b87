/*
 * seapos: geopositioning of a tracked boat seen from a camera on a moving,
 * GPS-tracked platform.
 *
 * C interface over opaque handles. Every fallible call returns an sp_status;
 * on failure sp_last_error() holds a diagnostic for the calling thread until
 * its next failing call. Handles are not internally synchronized: a handle
 * may be read from several threads but mutated from one at a time.
 * Strings returned through char** are owned by the caller and released with
 * sp_string_free().
 */
#ifndef SEAPOS_H
#define SEAPOS_H

#include <stddef.h>
#include <stdint.h>

#if defined(SEAPOS_BUILDING_LIBRARY)
#define SEAPOS_API __attribute__((visibility("default")))
#else
#define SEAPOS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sp_status {
  SP_OK = 0,
  SP_ERR_INVALID_ARGUMENT = 1,
  SP_ERR_DOMAIN = 2,
  SP_ERR_DEGENERATE = 3,
  SP_ERR_ARITY = 4,
  SP_ERR_POINT_AT_INFINITY = 5,
  SP_ERR_TIME_ORDER = 6,
  SP_ERR_FILTER_DEGENERACY = 7,
  SP_ERR_COVERAGE = 8,
  SP_ERR_EMPTY_REPORT = 9,
  SP_ERR_PARSE = 10,
  SP_ERR_IO = 11,
  SP_ERR_GENERATION = 12,
  SP_ERR_INTERNAL = 100
} sp_status;

typedef struct sp_config sp_config;
typedef struct sp_detections sp_detections;
typedef struct sp_camera_track sp_camera_track;
typedef struct sp_truth sp_truth;
typedef struct sp_calibration sp_calibration;
typedef struct sp_trajectory sp_trajectory;
typedef struct sp_report sp_report;

typedef struct sp_geo_point {
  double lat_deg;
  double lon_deg;
} sp_geo_point;

typedef struct sp_local_point {
  double east_m;
  double north_m;
} sp_local_point;

typedef struct sp_trajectory_point {
  double t;
  int64_t frame;
  sp_geo_point raw;
  sp_geo_point smoothed;
  sp_local_point raw_local;      /* relative to the frame's plane anchor */
  sp_local_point smoothed_local; /* relative to the frame's plane anchor */
  int coasted;
} sp_trajectory_point;

typedef struct sp_error_stats {
  double rmse_m;
  double mean_err_m;
  double max_err_m;
  double rmse_east_m;
  double rmse_north_m;
  size_t n_matched;
} sp_error_stats;

SEAPOS_API const char* sp_version(void);
SEAPOS_API const char* sp_status_string(sp_status status);
SEAPOS_API const char* sp_last_error(void);
SEAPOS_API void sp_string_free(char* s);

/* Configuration: INI with [tracker], [ukf], [calibration], [synth]. */
SEAPOS_API sp_status sp_config_create(sp_config** out);
SEAPOS_API sp_status sp_config_load(const char* path, sp_config** out);
SEAPOS_API sp_status sp_config_set(sp_config* cfg, const char* section, const char* key, const char* value);
SEAPOS_API sp_status sp_config_to_ini(const sp_config* cfg, char** out);
SEAPOS_API void sp_config_destroy(sp_config* cfg);

/* Input streams (JSON Lines). */
SEAPOS_API sp_status sp_detections_load(const char* path, sp_detections** out);
SEAPOS_API size_t sp_detections_frame_count(const sp_detections* dets);
SEAPOS_API void sp_detections_destroy(sp_detections* dets);

SEAPOS_API sp_status sp_camera_track_load(const char* path, sp_camera_track** out);
SEAPOS_API void sp_camera_track_destroy(sp_camera_track* track);

SEAPOS_API sp_status sp_truth_load(const char* path, sp_truth** out);
SEAPOS_API void sp_truth_destroy(sp_truth* truth);

/* Calibration: quadruplets + camera track -> pixel/sea-plane homography. */
SEAPOS_API sp_status sp_calibrate(const char* quadruplets_path, const sp_camera_track* track, const sp_config* cfg,
                                  sp_calibration** out);
SEAPOS_API sp_status sp_calibration_load(const char* path, sp_calibration** out);
SEAPOS_API sp_status sp_calibration_save(const sp_calibration* cal, const char* path);
SEAPOS_API double sp_calibration_condition(const sp_calibration* cal);
SEAPOS_API sp_geo_point sp_calibration_origin(const sp_calibration* cal);
/* Row-major, unit Frobenius norm. */
SEAPOS_API void sp_calibration_homography(const sp_calibration* cal, double out[9]);
SEAPOS_API sp_status sp_calibration_apply(const sp_calibration* cal, double u, double v, sp_local_point* out);
SEAPOS_API void sp_calibration_destroy(sp_calibration* cal);

/* Tracking and geopositioning. cfg may be NULL for defaults. */
SEAPOS_API sp_status sp_track(const sp_detections* dets, const sp_camera_track* track, const sp_calibration* cal,
                              const sp_config* cfg, sp_trajectory** out);
SEAPOS_API size_t sp_trajectory_size(const sp_trajectory* traj);
SEAPOS_API sp_status sp_trajectory_point_at(const sp_trajectory* traj, size_t index, sp_trajectory_point* out);
SEAPOS_API sp_status sp_trajectory_save(const sp_trajectory* traj, const char* path);
SEAPOS_API sp_status sp_trajectory_load(const char* path, sp_trajectory** out);
SEAPOS_API void sp_trajectory_destroy(sp_trajectory* traj);

/* Evaluation against ground truth. */
SEAPOS_API sp_status sp_evaluate(const sp_trajectory* traj, const sp_truth* truth, int skip_coasted, sp_report** out);
SEAPOS_API sp_status sp_report_stats(const sp_report* report, int smoothed, sp_error_stats* out);
SEAPOS_API sp_status sp_report_json(const sp_report* report, char** out);
SEAPOS_API sp_status sp_report_text(const sp_report* report, char** out);
SEAPOS_API sp_status sp_report_save(const sp_report* report, const char* path);
SEAPOS_API void sp_report_destroy(sp_report* report);
SEAPOS_API sp_status sp_plot_data_save(const sp_trajectory* traj, const sp_truth* truth, const char* path);

/* Synthetic scenarios. */
SEAPOS_API size_t sp_synth_scenario_count(void);
SEAPOS_API const char* sp_synth_scenario_name(size_t index);
/* Generates a bundle into out_dir. scenario_file (JSON) takes precedence over
 * scenario_name; when both are NULL the config's [synth] scenario is used. */
SEAPOS_API sp_status sp_synth_generate(const char* scenario_name, const char* scenario_file, const sp_config* cfg,
                                       const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* SEAPOS_H */
