#ifndef MFVAR_H
#define MFVAR_H

/* C interface to the mixed-frequency steady-state BVAR library. All
 * entry points are driven by an INI configuration file and write their
 * results under an output directory. Functions return MFV_OK on
 * success; on failure a short message is placed in errbuf. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define MFV_OK 0
#define MFV_ERR_IO 1      /* missing files, unwritable output */
#define MFV_ERR_CONFIG 2  /* malformed or inconsistent configuration */
#define MFV_ERR_NUMERIC 3 /* numerical failure during sampling */
#define MFV_ERR_INVALID 4 /* bad arguments (null pointers, etc.) */

const char* mfv_version(void);

/* Opaque aligned data panel. */
typedef struct mfv_panel mfv_panel;

int mfv_panel_load(const char* config_path, mfv_panel** out, char* errbuf, size_t errlen);
void mfv_panel_free(mfv_panel* panel);
int mfv_panel_dims(const mfv_panel* panel, int* T, int* n_monthly, int* n_quarterly);

/* Generate a synthetic dataset from the [simulate] section: one CSV
 * per series, a ready-to-estimate configuration, and the true
 * parameters and latent paths as JSON. seed = 0 uses the config seed. */
int mfv_simulate(const char* config_path, const char* output_dir, uint64_t seed, char* errbuf,
                 size_t errlen);

/* Run the Gibbs sampler for every [model:NAME] section (or the plain
 * [estimate] settings if none), writing draws.csv and manifest.json
 * per model. jobs > 1 runs models in parallel. */
int mfv_estimate(const char* config_path, const char* output_dir, uint64_t seed, int jobs,
                 char* errbuf, size_t errlen);

/* Estimate and then simulate the posterior predictive distribution,
 * writing forecast.csv per model. */
int mfv_forecast(const char* config_path, const char* output_dir, uint64_t seed, int jobs,
                 char* errbuf, size_t errlen);

/* Expanding-window forecast evaluation of all models against the
 * benchmark named in [evaluate]; writes report.csv and report.txt. */
int mfv_evaluate(const char* config_path, const char* output_dir, uint64_t seed, int jobs,
                 char* errbuf, size_t errlen);

#ifdef __cplusplus
}
#endif

#endif /* MFVAR_H */
