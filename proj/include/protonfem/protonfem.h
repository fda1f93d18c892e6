#ifndef PROTONFEM_H
#define PROTONFEM_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define PFEM_API __declspec(dllexport)
#else
#define PFEM_API __attribute__((visibility("default")))
#endif

typedef enum pfem_status {
  PFEM_OK = 0,
  PFEM_ERR_INTERNAL = 1,
  PFEM_ERR_CONFIG = 2,
  PFEM_ERR_SOLVER = 3,
  PFEM_ERR_INVALID_ARGUMENT = 4,
  PFEM_ERR_IO = 5,
  PFEM_ERR_DOMAIN = 6,
  PFEM_ERR_NOT_FOUND = 7,
  PFEM_ERR_UNSUPPORTED = 8
} pfem_status;

typedef struct pfem_scenario pfem_scenario;
typedef struct pfem_summary pfem_summary;

PFEM_API const char* pfem_version(void);

/* Message of the last failing call on this thread; "" if none. */
PFEM_API const char* pfem_last_error(void);

PFEM_API const char* pfem_status_name(pfem_status status);

PFEM_API size_t pfem_preset_count(void);
/* NULL when index is out of range. */
PFEM_API const char* pfem_preset_name(size_t index);

PFEM_API pfem_status pfem_scenario_load_file(const char* path, pfem_scenario** out);
PFEM_API pfem_status pfem_scenario_load_json(const char* json_text, pfem_scenario** out);
PFEM_API pfem_status pfem_scenario_load_preset(const char* name, pfem_scenario** out);
PFEM_API void pfem_scenario_free(pfem_scenario* scenario);

PFEM_API const char* pfem_scenario_name(const pfem_scenario* scenario);
PFEM_API const char* pfem_scenario_hash(const pfem_scenario* scenario);
/* Normalised JSON used for the hash. */
PFEM_API const char* pfem_scenario_canonical_json(const pfem_scenario* scenario);

/* Each writes its artifacts into out_dir (created if missing) and returns a summary. */
PFEM_API pfem_status pfem_run(const pfem_scenario* scenario, const char* out_dir, pfem_summary** out);
PFEM_API pfem_status pfem_converge(const pfem_scenario* scenario, const char* out_dir, pfem_summary** out);
PFEM_API pfem_status pfem_adapt(const pfem_scenario* scenario, const char* out_dir, pfem_summary** out);
PFEM_API pfem_status pfem_dose(const pfem_scenario* scenario, const char* out_dir, pfem_summary** out);

PFEM_API void pfem_summary_free(pfem_summary* summary);
/* Same text as summary.txt. */
PFEM_API const char* pfem_summary_text(const pfem_summary* summary);
PFEM_API int pfem_summary_dofs(const pfem_summary* summary);
PFEM_API int pfem_summary_levels(const pfem_summary* summary);
PFEM_API double pfem_summary_fluence_min(const pfem_summary* summary);
PFEM_API double pfem_summary_fluence_max(const pfem_summary* summary);
PFEM_API double pfem_summary_g_sup(const pfem_summary* summary);
PFEM_API double pfem_summary_dose_min(const pfem_summary* summary);
PFEM_API double pfem_summary_dose_max(const pfem_summary* summary);
PFEM_API double pfem_summary_dose_peak_depth(const pfem_summary* summary);
/* PFEM_ERR_NOT_FOUND when the run had no analytic reference. */
PFEM_API pfem_status pfem_summary_energy_error(const pfem_summary* summary, double* out);
PFEM_API pfem_status pfem_summary_l2_error(const pfem_summary* summary, double* out);
PFEM_API pfem_status pfem_summary_slope(const pfem_summary* summary, double* out);

#ifdef __cplusplus
}
#endif

#endif
