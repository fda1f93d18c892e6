#include "protonfem/protonfem.h"

#include <sstream>
#include <string>

#include "protonfem/error.hpp"
#include "protonfem/pipeline.hpp"

struct pfem_scenario {
  protonfem::Scenario scenario;
  std::string hash;
};

struct pfem_summary {
  protonfem::RunSummary summary;
  std::string text;
};

namespace {

thread_local std::string last_error;

template <class F>
pfem_status guarded(F&& f) {
  last_error.clear();
  try {
    f();
    return PFEM_OK;
  } catch (const protonfem::ConfigError& e) {
    last_error = e.what();
    return PFEM_ERR_CONFIG;
  } catch (const protonfem::SolverError& e) {
    last_error = e.what();
    return PFEM_ERR_SOLVER;
  } catch (const protonfem::DomainError& e) {
    last_error = e.what();
    return PFEM_ERR_DOMAIN;
  } catch (const protonfem::NotFoundError& e) {
    last_error = e.what();
    return PFEM_ERR_NOT_FOUND;
  } catch (const protonfem::UnsupportedError& e) {
    last_error = e.what();
    return PFEM_ERR_UNSUPPORTED;
  } catch (const protonfem::IoError& e) {
    last_error = e.what();
    return PFEM_ERR_IO;
  } catch (const std::exception& e) {
    last_error = e.what();
    return PFEM_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return PFEM_ERR_INTERNAL;
  }
}

pfem_status invalid(const char* what) {
  last_error = what;
  return PFEM_ERR_INVALID_ARGUMENT;
}

pfem_status load(pfem_scenario** out, protonfem::Scenario (*make)(const std::string&), const char* arg) {
  if (!out) return invalid("output handle pointer is NULL");
  *out = nullptr;
  if (!arg) return invalid("argument is NULL");
  return guarded([&] {
    auto* h = new pfem_scenario{make(arg), {}};
    h->hash = protonfem::scenario_hash(h->scenario);
    *out = h;
  });
}

using Command = protonfem::RunSummary (*)(const protonfem::Scenario&, const std::filesystem::path&);

pfem_status execute(Command cmd, const pfem_scenario* s, const char* out_dir, pfem_summary** out) {
  if (!out) return invalid("output handle pointer is NULL");
  *out = nullptr;
  if (!s) return invalid("scenario is NULL");
  if (!out_dir) return invalid("output directory is NULL");
  return guarded([&] {
    auto* h = new pfem_summary{cmd(s->scenario, out_dir), {}};
    std::ostringstream os;
    protonfem::write_summary(os, h->summary);
    h->text = os.str();
    *out = h;
  });
}

pfem_status optional_value(const pfem_summary* s, const std::optional<double>& v, double* out) {
  if (!s || !out) return invalid("argument is NULL");
  if (!v) {
    last_error = "value not available for this run";
    return PFEM_ERR_NOT_FOUND;
  }
  *out = *v;
  return PFEM_OK;
}

}  // namespace

extern "C" {

const char* pfem_version(void) { return "1.0.0"; }

const char* pfem_last_error(void) { return last_error.c_str(); }

const char* pfem_status_name(pfem_status status) {
  switch (status) {
    case PFEM_OK:
      return "ok";
    case PFEM_ERR_INTERNAL:
      return "internal error";
    case PFEM_ERR_CONFIG:
      return "configuration error";
    case PFEM_ERR_SOLVER:
      return "solver failure";
    case PFEM_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case PFEM_ERR_IO:
      return "i/o error";
    case PFEM_ERR_DOMAIN:
      return "domain error";
    case PFEM_ERR_NOT_FOUND:
      return "not found";
    case PFEM_ERR_UNSUPPORTED:
      return "unsupported";
  }
  return "unknown status";
}

size_t pfem_preset_count(void) { return protonfem::preset_names().size(); }

const char* pfem_preset_name(size_t index) {
  static const std::vector<std::string> names = protonfem::preset_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

pfem_status pfem_scenario_load_file(const char* path, pfem_scenario** out) {
  return load(out, protonfem::load_scenario_file, path);
}

pfem_status pfem_scenario_load_json(const char* json_text, pfem_scenario** out) {
  return load(out, protonfem::parse_scenario, json_text);
}

pfem_status pfem_scenario_load_preset(const char* name, pfem_scenario** out) {
  return load(out, protonfem::preset_scenario, name);
}

void pfem_scenario_free(pfem_scenario* scenario) { delete scenario; }

const char* pfem_scenario_name(const pfem_scenario* scenario) {
  return scenario ? scenario->scenario.name.c_str() : "";
}

const char* pfem_scenario_hash(const pfem_scenario* scenario) { return scenario ? scenario->hash.c_str() : ""; }

const char* pfem_scenario_canonical_json(const pfem_scenario* scenario) {
  return scenario ? scenario->scenario.canonical_json.c_str() : "";
}

pfem_status pfem_run(const pfem_scenario* s, const char* out_dir, pfem_summary** out) {
  return execute(protonfem::run_scenario, s, out_dir, out);
}

pfem_status pfem_converge(const pfem_scenario* s, const char* out_dir, pfem_summary** out) {
  return execute(protonfem::converge_scenario, s, out_dir, out);
}

pfem_status pfem_adapt(const pfem_scenario* s, const char* out_dir, pfem_summary** out) {
  return execute(protonfem::adapt_scenario, s, out_dir, out);
}

pfem_status pfem_dose(const pfem_scenario* s, const char* out_dir, pfem_summary** out) {
  return execute(protonfem::dose_scenario, s, out_dir, out);
}

void pfem_summary_free(pfem_summary* summary) { delete summary; }

const char* pfem_summary_text(const pfem_summary* s) { return s ? s->text.c_str() : ""; }
int pfem_summary_dofs(const pfem_summary* s) { return s ? s->summary.dofs : 0; }
int pfem_summary_levels(const pfem_summary* s) { return s ? s->summary.levels : 0; }
double pfem_summary_fluence_min(const pfem_summary* s) { return s ? s->summary.fluence_min : 0.0; }
double pfem_summary_fluence_max(const pfem_summary* s) { return s ? s->summary.fluence_max : 0.0; }
double pfem_summary_g_sup(const pfem_summary* s) { return s ? s->summary.g_sup : 0.0; }
double pfem_summary_dose_min(const pfem_summary* s) { return s ? s->summary.dose_min : 0.0; }
double pfem_summary_dose_max(const pfem_summary* s) { return s ? s->summary.dose_max : 0.0; }
double pfem_summary_dose_peak_depth(const pfem_summary* s) { return s ? s->summary.dose_peak_depth : 0.0; }

pfem_status pfem_summary_energy_error(const pfem_summary* s, double* out) {
  return optional_value(s, s ? s->summary.energy_error : std::nullopt, out);
}

pfem_status pfem_summary_l2_error(const pfem_summary* s, double* out) {
  return optional_value(s, s ? s->summary.l2_error : std::nullopt, out);
}

pfem_status pfem_summary_slope(const pfem_summary* s, double* out) {
  return optional_value(s, s ? s->summary.slope : std::nullopt, out);
}

}  // extern "C"
