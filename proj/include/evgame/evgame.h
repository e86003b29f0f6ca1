/*
 * C interface to the evgame solver library.
 *
 * Objects are opaque handles created and destroyed through this API. Every
 * fallible call returns an evg_status; on failure evg_last_error() gives a
 * message for the calling thread. Strings returned through char** are owned
 * by the caller and released with evg_string_free().
 *
 * Station numbers are 1-based throughout.
 */
#ifndef EVGAME_H
#define EVGAME_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define EVG_API __declspec(dllexport)
#else
#  define EVG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as CLI exit codes. */
typedef enum evg_status {
    EVG_OK = 0,
    EVG_ERR_IO = 1,
    EVG_ERR_SCHEMA = 2,
    EVG_ERR_PRECONDITION = 3,
    EVG_ERR_NUMERICAL = 4,
    EVG_ERR_ARGUMENT = 5,
    EVG_ERR_INTERNAL = 6
} evg_status;

typedef enum evg_format { EVG_FORMAT_JSON = 0, EVG_FORMAT_CSV = 1, EVG_FORMAT_TEXT = 2 } evg_format;

typedef enum evg_regime { EVG_NASH = 0, EVG_CNASH = 1 } evg_regime;

typedef struct evg_scenario evg_scenario;
typedef struct evg_record evg_record;

EVG_API const char* evg_version(void);
EVG_API const char* evg_last_error(void);
EVG_API const char* evg_status_name(evg_status status);
EVG_API void evg_string_free(char* s);

/* Scenarios */
EVG_API evg_status evg_scenario_load_file(const char* path, evg_scenario** out);
EVG_API evg_status evg_scenario_load_string(const char* json_text, evg_scenario** out);
EVG_API void evg_scenario_free(evg_scenario* scenario);
EVG_API size_t evg_scenario_n_stations(const evg_scenario* scenario);
EVG_API size_t evg_scenario_horizon(const evg_scenario* scenario);
EVG_API size_t evg_scenario_coalition_count(const evg_scenario* scenario);
EVG_API evg_status evg_scenario_clear_coalitions(evg_scenario* scenario);
EVG_API evg_status evg_scenario_add_coalition(evg_scenario* scenario, const size_t* stations, size_t count);
EVG_API evg_status evg_scenario_to_json(const evg_scenario* scenario, char** out);
EVG_API evg_status evg_scenario_digest(const evg_scenario* scenario, char** out);

/* Equilibria and metrics */
EVG_API evg_status evg_solve(const evg_scenario* scenario, evg_record** out);
EVG_API void evg_record_free(evg_record* record);
/* Copies the N x T profile row-major (station-major) into out[0..n*t). */
EVG_API evg_status evg_record_profile(const evg_record* record, evg_regime regime, double* out, size_t len);
EVG_API evg_status evg_record_station_costs(const evg_record* record, evg_regime regime, double* out, size_t len);
EVG_API evg_status evg_record_residual(const evg_record* record, evg_regime regime, double* out);
/* metrics[0..3) = M_[N], M_C, M_[N]\C; defined[k] = 0 when the ratio is undefined. */
EVG_API evg_status evg_record_metrics(const evg_record* record, double metrics[3], int defined[3], int* negative_cost_flag);
EVG_API evg_status evg_record_render(const evg_record* record, evg_format format, char** out);

/* Condition check for case 'a' or 'b'; group is "all", "coalition", "outside" or "1,2,...". */
EVG_API evg_status evg_check(const evg_scenario* scenario, char which_case, const char* group, char** out_json);

/*
 * Coalition-size sweep. Exactly one of spec_path / preset ("step_alpha",
 * "noisy_price", "mixed") is non-null. sizes/n_sizes and seed override the
 * spec when non-null / nonzero. CSV or JSON output.
 */
EVG_API evg_status evg_sweep(const char* spec_path, const char* preset, const size_t* sizes, size_t n_sizes,
                             const uint64_t* seed, evg_format format, char** out);
/* Resolved sweep spec (after overrides) as JSON, for provenance. */
EVG_API evg_status evg_sweep_spec(const char* spec_path, const char* preset, const size_t* sizes, size_t n_sizes,
                                  const uint64_t* seed, char** out_json);

/* Composition table; preset must be "three_station". TEXT or JSON output. */
EVG_API evg_status evg_table(const char* preset, evg_format format, char** out);

#ifdef __cplusplus
}
#endif

#endif /* EVGAME_H */
