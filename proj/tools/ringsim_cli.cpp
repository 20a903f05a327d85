// Command-line front end; talks to the library only through ringsim.h.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "ringsim/ringsim.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitSolver = 2;

int exit_code(rs_status s) {
  switch (s) {
    case RS_OK: return 0;
    case RS_ERR_SOLVER:
    case RS_ERR_INTERNAL: return kExitSolver;
    default: return kExitUsage;
  }
}

int report(rs_status s) {
  if (s != RS_OK) std::fprintf(stderr, "ringsim: %s: %s\n", rs_status_name(s), rs_last_error());
  return exit_code(s);
}

struct Options {
  std::string config;
  std::string out;
  std::string format = "auto";
  bool oracle = false;
  int threads = 0;
  std::string recipe;
};

int emit(rs_result* result, const Options& opt, rs_format format) {
  rs_status s;
  if (!opt.out.empty()) {
    s = rs_result_write(result, opt.out.c_str(), format);
  } else {
    char* text = nullptr;
    s = rs_result_format(result, format, &text);
    if (s == RS_OK) {
      std::fputs(text, stdout);
      rs_string_free(text);
    }
  }
  rs_result_free(result);
  return report(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Absorption by a ring of emitters around a central impurity"};
  app.set_version_flag("--version", std::string(rs_version()));
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--config", opt.config, "JSON configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", opt.out, "output file (a .sidecar.json is written next to it)");
  app.add_option("--format", opt.format, "csv or json (modes defaults to json, the rest to csv)")
      ->check(CLI::IsMember({"auto", "csv", "json"}));
  app.add_flag("--oracle", opt.oracle, "master-equation cross-check on points with N <= 5 (sweep, reproduce)");
  app.add_option("--threads", opt.threads, "worker threads (default: RING_SIM_THREADS or all cores)")
      ->check(CLI::PositiveNumber);

  auto* modes = app.add_subcommand("modes", "eigenmode report sorted by decay rate");
  auto* spectrum = app.add_subcommand("spectrum", "coherent absorption versus drive detuning");
  auto* sweep = app.add_subcommand("sweep", "parameter grid from the config's grid block");
  auto* optimize = app.add_subcommand("optimize", "optimize delta_I or gamma_I for absorption");
  auto* meanfield = app.add_subcommand("meanfield", "mean-field steady state next to the quantum result");
  auto* toy = app.add_subcommand("toy", "two-dipole toy model spectra");
  auto* reproduce = app.add_subcommand("reproduce", "regenerate a figure from a built-in recipe");
  std::vector<std::string> names;
  for (size_t i = 0; i < rs_recipe_count(); ++i) names.push_back(rs_recipe_name(i));
  reproduce->add_option("recipe", opt.recipe, "recipe name")->required()->check(CLI::IsMember(names));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  const bool grid_command = sweep->parsed() || reproduce->parsed();
  if (opt.oracle && !grid_command) {
    std::fprintf(stderr, "ringsim: --oracle applies to sweep and reproduce only\n");
    return kExitUsage;
  }
  rs_format format = modes->parsed() ? RS_FORMAT_JSON : RS_FORMAT_CSV;
  if (opt.format == "csv") format = RS_FORMAT_CSV;
  if (opt.format == "json") format = RS_FORMAT_JSON;

  rs_result* result = nullptr;
  rs_status s;
  if (reproduce->parsed()) {
    if (!opt.config.empty()) {
      std::fprintf(stderr, "ringsim: recipes embed their configuration; --config is not accepted\n");
      return kExitUsage;
    }
    s = rs_run_recipe(opt.recipe.c_str(), opt.threads, opt.oracle, &result);
    if (s != RS_OK) return report(s);
    return emit(result, opt, format);
  }

  rs_config* config = nullptr;
  s = opt.config.empty() ? rs_config_default(&config) : rs_config_load(opt.config.c_str(), &config);
  if (s != RS_OK) return report(s);
  if (modes->parsed()) {
    s = rs_run_modes(config, &result);
  } else if (spectrum->parsed()) {
    s = rs_run_spectrum(config, &result);
  } else if (sweep->parsed()) {
    s = rs_run_sweep(config, opt.threads, opt.oracle, &result);
  } else if (optimize->parsed()) {
    s = rs_run_optimize(config, &result);
  } else if (meanfield->parsed()) {
    s = rs_run_meanfield(config, &result);
  } else {
    (void)toy;
    s = rs_run_toy(config, &result);
  }
  rs_config_free(config);
  if (s != RS_OK) return report(s);
  return emit(result, opt, format);
}
