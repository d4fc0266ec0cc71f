/* C interface to the survival-mixture library.
 *
 * All functions returning int yield SVX_OK on success or an SVX_E_* code;
 * svx_last_error() describes the most recent failure on the calling thread.
 * Strings returned through char** are owned by the caller and must be
 * released with svx_string_free().
 */
#ifndef SURVMIX_H
#define SURVMIX_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#define SVX_OK 0
#define SVX_E_INVAL 2   /* invalid argument or configuration */
#define SVX_E_DATA 3    /* unreadable or malformed data */
#define SVX_E_NUMERIC 4 /* numerical failure */
#define SVX_E_INTERNAL 5

#define SVX_FAMILY_LOGNORMAL 1u
#define SVX_FAMILY_GAMMA 2u
#define SVX_FAMILY_WEIBULL 4u

typedef struct svx_dataset svx_dataset;
typedef struct svx_fit svx_fit;
typedef struct svx_study svx_study;

const char* svx_version(void);
const char* svx_last_error(void);
void svx_string_free(char* s);

/* ---- datasets (times with 0/1 event indicators) ---- */

int svx_dataset_from_arrays(const double* times, const int* events, size_t n,
                            svx_dataset** out);
int svx_dataset_read_csv(const char* path, svx_dataset** out);
/* CSV text; pass manifest_ref = NULL for no manifest comment line. */
int svx_dataset_csv(const svx_dataset* ds, const char* manifest_ref, char** out);
size_t svx_dataset_size(const svx_dataset* ds);
size_t svx_dataset_events(const svx_dataset* ds);
int svx_dataset_get(const svx_dataset* ds, size_t i, double* time, int* event);
void svx_dataset_free(svx_dataset* ds);

/* ---- sampler configuration ---- */

typedef struct {
  long iterations;
  long burn_in;
  long thin;
  long adapt_start;
  double initial_scale;
  double regularization;
  unsigned long long seed;
} svx_sampler_opts;

void svx_sampler_opts_default(svx_sampler_opts* opts);

/* ---- calibrated censored simulation ---- */

/* family is a single SVX_FAMILY_* bit. lambda_out may be NULL. */
int svx_calibrate_lambda(unsigned family, double mu, double sigma2, double pc,
                         double* lambda_out);
int svx_simulate(unsigned family, double mu, double sigma2, double pc, size_t n,
                 unsigned long long seed, svx_dataset** out, double* lambda_out);

/* ---- model fitting and evidence ---- */

typedef struct {
  unsigned families; /* OR of SVX_FAMILY_* bits, at least two */
  svx_sampler_opts sampler;
  int grid_points; /* survival-curve grid resolution */
} svx_fit_opts;

void svx_fit_opts_default(svx_fit_opts* opts);

int svx_fit_run(const svx_dataset* ds, const svx_fit_opts* opts, svx_fit** out);
int svx_fit_evidence_json(const svx_fit* fit, char** out);
int svx_fit_summary_csv(const svx_fit* fit, char** out);
int svx_fit_curves_csv(const svx_fit* fit, char** out);
int svx_fit_draws_csv(const svx_fit* fit, char** out);
/* *family_out receives the chosen SVX_FAMILY_* bit, or 0 when undecided. */
int svx_fit_chosen_family(const svx_fit* fit, unsigned* family_out);
double svx_fit_acceptance_rate(const svx_fit* fit);
int svx_fit_has_pexe(const svx_fit* fit);
void svx_fit_free(svx_fit* fit);

/* ---- replicated decision studies ---- */

typedef struct {
  unsigned generator; /* single SVX_FAMILY_* bit */
  double mu;
  double sigma2;
  double pc;
  size_t n;
  int replicates;
  int jobs;
  unsigned long long seed;
  svx_sampler_opts sampler;
} svx_study_opts;

void svx_study_opts_default(svx_study_opts* opts);

int svx_study_run(const svx_study_opts* opts, svx_study** out);
int svx_study_csv(const svx_study* study, char** out);
size_t svx_study_failures(const svx_study* study);
double svx_study_lambda(const svx_study* study);
double svx_study_pct_correct(const svx_study* study);
void svx_study_free(svx_study* study);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SURVMIX_H */
