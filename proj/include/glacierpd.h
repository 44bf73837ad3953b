/* glacierpd - bond-based peridynamic ice-shelf calving simulator.
 *
 * C API over the C++ core: opaque handles, integer status codes, thread-local
 * error messages. All functions return gpd_status unless noted; on failure
 * call gpd_last_error() for a human-readable message. Handles must be
 * released with their _free function.
 */
#ifndef GLACIERPD_H
#define GLACIERPD_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(GPD_BUILDING_SHARED)
#    define GPD_API __declspec(dllexport)
#  else
#    define GPD_API __declspec(dllimport)
#  endif
#else
#  define GPD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gpd_status {
  GPD_OK = 0,
  GPD_ERR_CONFIG = 2, /* bad config / bad arguments */
  GPD_ERR_SOLVER = 3, /* divergence or non-convergence */
  GPD_ERR_IO = 4      /* filesystem failures */
} gpd_status;

typedef struct gpd_config gpd_config; /* parsed, validated run configuration */
typedef struct gpd_run gpd_run;       /* completed run with its outputs */

GPD_API const char* gpd_version(void);

/* Thread-local message describing the most recent failure in this thread. */
GPD_API const char* gpd_last_error(void);

/* Worker-count cap; 0 = GLACIER_PD_THREADS or hardware concurrency.
 * Results are bit-identical for every setting. */
GPD_API gpd_status gpd_set_threads(int n);

/* ---- configuration ---- */
GPD_API gpd_status gpd_config_parse_file(const char* path, gpd_config** out);
GPD_API gpd_status gpd_config_parse_text(const char* text, gpd_config** out);
/* key is "section.key" or a bare key unique across sections */
GPD_API gpd_status gpd_config_set(gpd_config* cfg, const char* key, const char* value);
/* Current value of one key as text; caller frees with gpd_string_free. */
GPD_API gpd_status gpd_config_get(const gpd_config* cfg, const char* key, char** out);
/* Canonical serialized form; caller frees with gpd_string_free. */
GPD_API gpd_status gpd_config_serialize(const gpd_config* cfg, char** out);
GPD_API uint64_t gpd_config_digest(const gpd_config* cfg);
/* Number of defaults filled at parse; gpd_config_default_entry(i) describes
 * one (audit list). Returned pointers live as long as the config. */
GPD_API int gpd_config_default_count(const gpd_config* cfg);
GPD_API const char* gpd_config_default_entry(const gpd_config* cfg, int i);
GPD_API void gpd_config_free(gpd_config* cfg);

GPD_API void gpd_string_free(char* s);

/* ---- calibration and analytic oracles ---- */
typedef struct gpd_calibration {
  double delta;
  double micromodulus;
  double s0_from_G0;
  double s0_from_KI;
  double s0_used;
  double G0_implied_by_KI;
  int table_inconsistent; /* 1 when G0 and K_I^2/E disagree */
  double stable_dt;
  double beta;
  double x_rm; /* < 0 when the beam is below the semi-infinite regime */
} gpd_calibration;

GPD_API gpd_status gpd_calibrate(const gpd_config* cfg, gpd_calibration* out);

/* Euler-Bernoulli cantilever deflection under uniform load q at position x;
 * B is the flexural rigidity per unit width. */
GPD_API gpd_status gpd_oracle_cantilever(double q, double L, double B, double x,
                                 double* w_out);
/* Hetenyi semi-infinite floating beam: deflection at x from the moment-loaded
 * end, and the moat distance x_rm (independent of M0). */
GPD_API gpd_status gpd_oracle_floating_beam(double E, double h, double k, double M0,
                                    double beam_length, double x,
                                    double* w_out, double* x_rm_out);

/* ---- runs ---- */
/* Runs the configured scenario; snapshots, metrics.csv, growth_rate.csv and
 * summary.csv are written under out_dir (NULL = config [output] dir). */
GPD_API gpd_status gpd_run_scenario(const gpd_config* cfg, const char* out_dir,
                            gpd_run** out);

/* Sweep over one key; each member runs in <out_dir>/run_<key>_<value>. values
 * is a comma-separated list. */
GPD_API gpd_status gpd_run_sweep(const gpd_config* cfg, const char* key,
                         const char* values, const char* out_dir,
                         gpd_run** out);

typedef struct gpd_run_summary {
  double sigma_max;            /* Pa, pre-fracture upper-surface maximum */
  double initiation_time;      /* s; < 0 when no crack nucleated */
  double initiation_x, initiation_y;
  double final_crack_length;   /* m */
  double x_rm;                 /* m; < 0 when not measured */
  int stages;
  int64_t broken_bonds;
} gpd_run_summary;

GPD_API gpd_status gpd_run_get_summary(const gpd_run* run, gpd_run_summary* out);
GPD_API int gpd_run_snapshot_count(const gpd_run* run);
GPD_API const char* gpd_run_snapshot_path(const gpd_run* run, int i);
GPD_API const char* gpd_run_output_dir(const gpd_run* run);

/* Static-sweep members (frontcollapse static_sweep mode). */
GPD_API int gpd_run_member_count(const gpd_run* run);
GPD_API gpd_status gpd_run_member(const gpd_run* run, int i, double* R_over_t,
                          double* sigma_max, double* tip_displacement);

GPD_API void gpd_run_free(gpd_run* run);

/* Recompute the digest of cfg and compare with a snapshot header. Returns
 * GPD_OK on match, GPD_ERR_CONFIG on mismatch, GPD_ERR_IO when unreadable. */
GPD_API gpd_status gpd_verify_snapshot(const char* path, const gpd_config* cfg);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* GLACIERPD_H */
