#ifndef RINGSIM_RINGSIM_H
#define RINGSIM_RINGSIM_H

/* C interface to the ring-antenna absorption library.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every call returns an rs_status; on failure rs_last_error() holds a message
 * for the calling thread until its next failing call. Strings returned through
 * char** are owned by the caller (rs_string_free); const char* results are
 * owned by the handle they came from. */

#include <stddef.h>

#if defined(_WIN32)
#  if defined(RINGSIM_BUILDING_LIBRARY)
#    define RINGSIM_API __declspec(dllexport)
#  else
#    define RINGSIM_API __declspec(dllimport)
#  endif
#else
#  define RINGSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rs_status {
  RS_OK = 0,
  RS_ERR_INVALID_ARGUMENT = 1,
  RS_ERR_CONFIG = 2, /* malformed configuration; rs_last_error_key() names the key */
  RS_ERR_SOLVER = 3,
  RS_ERR_IO = 4,
  RS_ERR_INTERNAL = 5
} rs_status;

typedef enum rs_format { RS_FORMAT_CSV = 0, RS_FORMAT_JSON = 1 } rs_format;

typedef struct rs_config rs_config;
typedef struct rs_result rs_result;

RINGSIM_API const char* rs_version(void);
RINGSIM_API const char* rs_status_name(rs_status status);
RINGSIM_API const char* rs_last_error(void);
RINGSIM_API const char* rs_last_error_key(void);
RINGSIM_API void rs_string_free(char* s);

/* Configuration (JSON schema in the README). */
RINGSIM_API rs_status rs_config_default(rs_config** out);
RINGSIM_API rs_status rs_config_parse(const char* json, rs_config** out);
RINGSIM_API rs_status rs_config_load(const char* path, rs_config** out);
RINGSIM_API rs_status rs_config_to_json(const rs_config* config, char** out);
RINGSIM_API void rs_config_free(rs_config* config);

/* Quick scalar queries at the configured operating point. */
RINGSIM_API rs_status rs_dark_mode(const rs_config* config, double* decay_rate, double* frequency,
                                   double* impurity_weight);
RINGSIM_API rs_status rs_sigma_abs(const rs_config* config, double* sigma_abs_over_sigma);

/* Subcommands. threads <= 0 uses RING_SIM_THREADS or the hardware count;
 * oracle != 0 adds the master-equation cross-check on points with N <= 5. */
RINGSIM_API rs_status rs_run_modes(const rs_config* config, rs_result** out);
RINGSIM_API rs_status rs_run_spectrum(const rs_config* config, rs_result** out);
RINGSIM_API rs_status rs_run_sweep(const rs_config* config, int threads, int oracle, rs_result** out);
RINGSIM_API rs_status rs_run_optimize(const rs_config* config, rs_result** out);
RINGSIM_API rs_status rs_run_meanfield(const rs_config* config, rs_result** out);
RINGSIM_API rs_status rs_run_toy(const rs_config* config, rs_result** out);
RINGSIM_API rs_status rs_run_recipe(const char* name, int threads, int oracle, rs_result** out);

RINGSIM_API size_t rs_recipe_count(void);
RINGSIM_API const char* rs_recipe_name(size_t index);

/* Result tables. */
RINGSIM_API size_t rs_result_rows(const rs_result* result);
RINGSIM_API size_t rs_result_columns(const rs_result* result);
RINGSIM_API const char* rs_result_column_name(const rs_result* result, size_t column);
/* -1 when the column does not exist. */
RINGSIM_API long rs_result_column_index(const rs_result* result, const char* name);
/* RS_ERR_INVALID_ARGUMENT for out-of-range indices or a non-numeric cell. */
RINGSIM_API rs_status rs_result_number(const rs_result* result, size_t row, size_t column, double* out);
/* NULL unless the cell holds text. */
RINGSIM_API const char* rs_result_text(const rs_result* result, size_t row, size_t column);
RINGSIM_API const char* rs_result_sidecar(const rs_result* result);
RINGSIM_API rs_status rs_result_format(const rs_result* result, rs_format format, char** out);
/* Writes the table to path and the sidecar to path + ".sidecar.json". */
RINGSIM_API rs_status rs_result_write(const rs_result* result, const char* path, rs_format format);
RINGSIM_API void rs_result_free(rs_result* result);

#ifdef __cplusplus
}
#endif

#endif
