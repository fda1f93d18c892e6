// Command-line front end; talks to the engine only through the C API.
#include <cstdio>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "protonfem/protonfem.h"

namespace {

struct Options {
  std::string config;
  std::string preset;
  std::string out = "out";
};

int exit_code(pfem_status status) {
  switch (status) {
    case PFEM_OK:
      return 0;
    case PFEM_ERR_CONFIG:
    case PFEM_ERR_NOT_FOUND:
    case PFEM_ERR_UNSUPPORTED:
    case PFEM_ERR_INVALID_ARGUMENT:
    case PFEM_ERR_DOMAIN:
      return 2;
    case PFEM_ERR_SOLVER:
      return 3;
    default:
      return 1;
  }
}

int report(pfem_status status, const char* what) {
  std::fprintf(stderr, "pfem: %s failed (%s): %s\n", what, pfem_status_name(status), pfem_last_error());
  return exit_code(status);
}

using Command = pfem_status (*)(const pfem_scenario*, const char*, pfem_summary**);

int execute(const Options& opt, Command cmd) {
  pfem_scenario* raw = nullptr;
  const pfem_status st = opt.preset.empty() ? pfem_scenario_load_file(opt.config.c_str(), &raw)
                                            : pfem_scenario_load_preset(opt.preset.c_str(), &raw);
  if (st != PFEM_OK) return report(st, "loading scenario");
  std::unique_ptr<pfem_scenario, decltype(&pfem_scenario_free)> scenario(raw, pfem_scenario_free);

  pfem_summary* sraw = nullptr;
  const pfem_status rs = cmd(scenario.get(), opt.out.c_str(), &sraw);
  if (rs != PFEM_OK) return report(rs, "solve");
  std::unique_ptr<pfem_summary, decltype(&pfem_summary_free)> summary(sraw, pfem_summary_free);
  std::fputs(pfem_summary_text(summary.get()), stdout);
  return 0;
}

void add_scenario_options(CLI::App* sub, Options& opt) {
  auto* config = sub->add_option("--config", opt.config, "Scenario JSON file")->check(CLI::ExistingFile);
  auto* preset = sub->add_option("--preset", opt.preset, "Built-in scenario name");
  config->excludes(preset);
  preset->excludes(config);
  sub->add_option("--out", opt.out, "Output directory")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic proton transport: SUPG and bound-preserving solves, dose, adaptivity"};
  app.require_subcommand(0, 1);
  bool list = false;
  bool version = false;
  app.add_flag("--list-presets", list, "Print the built-in scenario names");
  app.add_flag("--version", version, "Print the library version");

  Options opt;
  struct Sub {
    const char* name;
    const char* help;
    Command cmd;
  };
  const Sub subs[] = {
      {"run", "Solve once and write fluence, dose, mesh and summary", pfem_run},
      {"converge", "Uniform refinement study against the analytic benchmark", pfem_converge},
      {"adapt", "Solve-estimate-mark-refine loop", pfem_adapt},
      {"dose", "Solve and write all three dose projections", pfem_dose},
  };
  for (const Sub& s : subs) add_scenario_options(app.add_subcommand(s.name, s.help), opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (version) {
    std::printf("%s\n", pfem_version());
    return 0;
  }
  if (list) {
    for (size_t i = 0; i < pfem_preset_count(); ++i) std::printf("%s\n", pfem_preset_name(i));
    return 0;
  }
  for (const Sub& s : subs) {
    if (app.got_subcommand(s.name)) {
      if (opt.config.empty() && opt.preset.empty()) {
        std::fprintf(stderr, "pfem: %s needs --config PATH or --preset NAME\n", s.name);
        return 2;
      }
      return execute(opt, s.cmd);
    }
  }
  std::fputs(app.help().c_str(), stdout);
  return 0;
}
