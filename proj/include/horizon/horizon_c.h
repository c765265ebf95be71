#ifndef HORIZON_C_H
#define HORIZON_C_H

/* C interface of the verification toolkit: opaque result handles plus error
 * codes.  Every entry point returns a status; details of the last failure are
 * available from hrz_last_error() (thread-local). */

#ifdef __cplusplus
extern "C" {
#endif

typedef struct hrz_result hrz_result;

enum hrz_status {
  HRZ_OK = 0,
  HRZ_INVALID_INPUT = 1,
  HRZ_UNSUPPORTED_INPUT = 2,
  HRZ_NON_SUMMABLE_SYSTEM = 3,
  HRZ_NO_CONVERGENCE = 4,
  HRZ_STIFFNESS = 5,
  HRZ_GRID_MISMATCH = 6,
  HRZ_RADIUS_EXCEEDED = 7,
  HRZ_INCOMPLETE_VERIFICATION = 8,
  HRZ_NOT_FOUND = 9,
  HRZ_HORIZON_TOO_SHORT = 10,
  HRZ_RESOURCE_TOO_LARGE = 11,
  HRZ_SCHEMA_MISMATCH = 12,
  HRZ_IO_FAILURE = 13,
  HRZ_INTERNAL = 100
};

/* Common run configuration; zero/negative members fall back to defaults. */
typedef struct hrz_config {
  int grid_size;          /* N; 0 keeps the scenario default */
  double tol_abs;         /* <= 0 -> 1e-6 */
  double tol_rel;         /* <= 0 -> 1e-6 */
  unsigned seed;          /* 0 -> 2024 */
  int with_sufficiency;   /* nonzero runs the sufficiency bundle */
} hrz_config;

/* registry */
int hrz_scenario_count(void);
const char* hrz_scenario_name(int index); /* NULL when out of range */
int hrz_scenario_exists(const char* name);

/* Runs a registered scenario.  On success *out owns the verdict and the
 * exportable artifacts. */
int hrz_run_scenario(const char* name, const hrz_config* cfg, hrz_result** out);

/* Verifies an imported trajectory CSV (columns t, x_1.., u_1..) against a
 * registered problem's reference multipliers. */
int hrz_verify_csv(const char* scenario_name, const char* csv_content, const hrz_config* cfg,
                   hrz_result** out);

/* Finite-horizon-approximation failure table for the given horizons. */
int hrz_pathology(double rho, double x0, const double* T_list, int T_count, hrz_result** out);

/* result access */
int hrz_result_passed(const hrz_result* res);       /* 1 pass, 0 fail, -1 bad handle */
const char* hrz_result_json(const hrz_result* res); /* owned by the handle */
int hrz_result_file_count(const hrz_result* res);
const char* hrz_result_file_name(const hrz_result* res, int index);
/* Writes every attached artifact file into out_dir (created if missing). */
int hrz_result_write_outputs(const hrz_result* res, const char* out_dir);
void hrz_result_free(hrz_result* res);

const char* hrz_last_error(void);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* HORIZON_C_H */
