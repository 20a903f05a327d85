#include "ringsim/commands.hpp"

#include <chrono>

namespace ringsim {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

RunOutput finish(const std::string& command, const RunConfig& config, Table table, Clock::time_point t0) {
  table.set_meta("command", command);
  table.set_meta("config_hash", config_hash(config));
  RunOutput out;
  out.sidecar = make_sidecar(command, config, seconds_since(t0), table.row_count());
  out.table = std::move(table);
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& w : v) s += (s.empty() ? "" : "; ") + w;
  return s;
}

}  // namespace

RunOutput command_modes(const RunConfig& config) {
  const auto t0 = Clock::now();
  const OperatingPoint op = operating_point(config.point);
  Table t({"index", "frequency", "decay_rate", "impurity_weight", "residual", "dark"});
  for (int k = 0; k < op.modes.size(); ++k) {
    const int r = t.add_row();
    t.set(r, "index", static_cast<long long>(k));
    t.set(r, "frequency", op.modes.frequency(k));
    t.set(r, "decay_rate", op.modes.decay_rate(k));
    t.set(r, "impurity_weight", op.modes.impurity_weight(k));
    t.set(r, "residual", op.modes.residual(k));
    t.set(r, "dark", static_cast<long long>(k == op.mode.mode_index));
  }
  t.set_meta("gamma_T", format_double(op.gamma_T));
  RunOutput out = finish("modes", config, std::move(t), t0);
  out.sidecar["gamma_T"] = op.gamma_T;
  out.sidecar["dark_mode_index"] = op.mode.mode_index;
  return out;
}

RunOutput command_spectrum(const RunConfig& config) {
  const auto t0 = Clock::now();
  if (config.point.drive_kind != DriveKind::coherent) {
    throw ConfigError("drive.kind", "the spectrum command needs a coherent drive");
  }
  const OperatingPoint op = operating_point(config.point);
  Table t({"detuning", "sigma_abs_over_sigma", "sigma_abs_over_quarter_sigma", "impurity_population",
           "ring_population"});
  for (double d : linspace(config.spectrum.min, config.spectrum.max, config.spectrum.points)) {
    const int r = t.add_row();
    t.set(r, "detuning", d);
    try {
      DriveSpec drive = op.drive;
      drive.detuning = d;
      const AbsorptionResult a = sigma_abs_coherent(op.config, drive);
      t.set(r, "sigma_abs_over_sigma", a.sigma_abs_over_sigma);
      t.set(r, "sigma_abs_over_quarter_sigma", a.sigma_abs_over_quarter_sigma);
      t.set(r, "impurity_population", a.impurity_population);
      t.set(r, "ring_population", a.ring_population);
      if (!a.warnings.empty()) t.add_error(r, join(a.warnings));
    } catch (const std::exception& e) {
      t.add_error(r, e.what());
    }
  }
  t.set_meta("gamma_T", format_double(op.gamma_T));
  t.set_meta("dark_frequency", format_double(op.mode.frequency));
  RunOutput out = finish("spectrum", config, std::move(t), t0);
  out.sidecar["gamma_T"] = op.gamma_T;
  out.sidecar["dark_frequency"] = op.mode.frequency;
  out.sidecar["dark_gamma"] = op.mode.decay_rate;
  return out;
}

RunOutput command_sweep(const RunConfig& config, const SweepOptions& options) {
  const auto t0 = Clock::now();
  Table t = run_sweep(config, options);
  RunOutput out = finish("sweep", config, std::move(t), t0);
  out.sidecar["oracle"] = options.oracle;
  return out;
}

RunOutput command_optimize(const RunConfig& config) {
  const auto t0 = Clock::now();
  OptimizeRequest req;
  req.parameter = config.optimize.parameter;
  req.bracket = config.optimize.bracket;
  req.tolerance = config.optimize.tolerance;
  req.coarse_points = config.optimize.coarse_points;
  const OptimizeResult o = optimize_impurity(req, config.point);
  ModelPoint ref = config.point;
  ref.detuning.reset();
  const double reference = point_sigma(operating_point(ref)).sigma_abs_over_sigma;

  Table t({"parameter", "seed", "optimum", "lower", "upper", "sigma_abs_over_sigma",
           "sigma_abs_over_quarter_sigma", "reference_sigma_abs_over_sigma", "gamma_T", "detuning",
           "dark_gamma", "widened", "fallback", "evaluations", "warning"});
  const int r = t.add_row();
  t.set(r, "parameter", std::string(parameter_name(o.parameter)));
  t.set(r, "seed", o.seed);
  t.set(r, "optimum", o.optimum);
  t.set(r, "lower", o.lower);
  t.set(r, "upper", o.upper);
  t.set(r, "sigma_abs_over_sigma", o.sigma_abs_over_sigma);
  t.set(r, "sigma_abs_over_quarter_sigma", 4.0 * o.sigma_abs_over_sigma);
  t.set(r, "reference_sigma_abs_over_sigma", reference);
  t.set(r, "gamma_T", o.point.gamma_T);
  t.set(r, "detuning", o.point.detuning);
  t.set(r, "dark_gamma", o.point.mode.decay_rate);
  t.set(r, "widened", static_cast<long long>(o.widened));
  t.set(r, "fallback", static_cast<long long>(o.fallback));
  t.set(r, "evaluations", static_cast<long long>(o.evaluations));
  t.set(r, "warning", join(o.warnings));
  return finish("optimize", config, std::move(t), t0);
}

RunOutput command_meanfield(const RunConfig& config) {
  const auto t0 = Clock::now();
  ModelPoint point = config.point;
  point.drive_kind = DriveKind::coherent;
  point.amplitude = config.meanfield.rabi;
  const OperatingPoint op = operating_point(point);
  Table t({"model", "sigma_abs_over_sigma", "sigma_abs_over_quarter_sigma", "impurity_population",
           "stable", "integration_converged", "residual", "gamma_T", "detuning", "warning"});

  const AbsorptionResult q = sigma_abs_coherent(op.config, op.drive);
  int r = t.add_row();
  t.set(r, "model", std::string("quantum"));
  t.set(r, "sigma_abs_over_sigma", q.sigma_abs_over_sigma);
  t.set(r, "sigma_abs_over_quarter_sigma", q.sigma_abs_over_quarter_sigma);
  t.set(r, "impurity_population", q.impurity_population);
  t.set(r, "gamma_T", op.gamma_T);
  t.set(r, "detuning", op.detuning);
  t.set(r, "warning", join(q.warnings));

  r = t.add_row();
  t.set(r, "model", std::string(variant_name(config.meanfield.variant)));
  t.set(r, "gamma_T", op.gamma_T);
  t.set(r, "detuning", op.detuning);
  try {
    const MeanFieldParams params =
        MeanFieldParams::from_config(op.config, config.meanfield.rabi, op.detuning, config.meanfield.variant);
    MeanFieldOptions mo;
    mo.t_max = config.meanfield.t_max;
    const MeanFieldResult m = mf_sigma_abs(params, mo);
    t.set(r, "sigma_abs_over_sigma", m.sigma_abs_over_sigma);
    t.set(r, "sigma_abs_over_quarter_sigma", 4.0 * m.sigma_abs_over_sigma);
    t.set(r, "impurity_population", m.state.p_ee);
    t.set(r, "stable", static_cast<long long>(m.stable));
    t.set(r, "integration_converged", static_cast<long long>(m.integration_converged));
    t.set(r, "residual", m.residual);
    t.set(r, "warning", join(m.warnings));
  } catch (const SolverError& e) {
    t.add_error(r, e.what());
  }
  return finish("meanfield", config, std::move(t), t0);
}

RunOutput command_toy(const RunConfig& config) {
  const auto t0 = Clock::now();
  const ToySpec& spec = config.toy;
  ToyConfig tc = spec.config();
  const BrightDark bd = bright_dark_states(tc.gamma_a, tc.gamma_c, tc.gamma_ac);
  nlohmann::json info = {{"omega_R", tc.omega_R},        {"gamma_a", tc.gamma_a},
                         {"gamma_c", tc.gamma_c},        {"gamma_ac", tc.gamma_ac},
                         {"dark_gamma", bd.dark_gamma},  {"bright_gamma", bd.bright_gamma},
                         {"c_plus", bd.c_plus},          {"c_minus", bd.c_minus}};
  Table t;
  const SpectrumRange& range = spec.detunings;
  if (spec.output == ToyOutput::transfer_rate) {
    if (range.points < 2) throw ConfigError("toy.points", "a spectrum needs at least two points");
    tc.drive.bandwidth = 0.0;
    const TransferRateSpectrum s = coherent_transfer_rate_spectrum(tc, range.min, range.max, range.points);
    t = Table({"detuning", "transfer_rate"});
    for (std::size_t i = 0; i < s.detunings.size(); ++i) {
      const int r = t.add_row();
      t.set(r, "detuning", s.detunings[i]);
      t.set(r, "transfer_rate", s.rate[i]);
    }
    nlohmann::json peaks = nlohmann::json::array();
    for (int i : local_maxima(s.rate)) peaks.push_back(s.detunings[i]);
    info["area"] = s.area;
    info["peaks"] = peaks;
  } else if (spec.output == ToyOutput::target_population) {
    if (range.points < 2) throw ConfigError("toy.points", "a spectrum needs at least two points");
    const auto spectra =
        coherent_spectrum_and_area(tc, range.min, range.max, range.points, spec.t_fix, spec.bandwidths);
    t = Table({"bandwidth", "detuning", "target_population"});
    nlohmann::json areas = nlohmann::json::array();
    for (const ToySpectrum& s : spectra) {
      for (std::size_t i = 0; i < s.detunings.size(); ++i) {
        const int r = t.add_row();
        t.set(r, "bandwidth", s.bandwidth);
        t.set(r, "detuning", s.detunings[i]);
        t.set(r, "target_population", s.target_population[i]);
      }
      areas.push_back({{"bandwidth", s.bandwidth}, {"area", s.area}});
    }
    info["areas"] = areas;
  } else {
    tc.drive.detuning = 0.5 * (range.min + range.max);
    const auto curve = target_population_curve(tc, spec.t_fix, range.points);
    t = Table({"time", "target_population"});
    for (const TimePoint& p : curve) {
      const int r = t.add_row();
      t.set(r, "time", p.time);
      t.set(r, "target_population", p.target_population);
    }
    info["detuning"] = tc.drive.detuning;
  }
  t.set_meta("scenario", scenario_name(spec.scenario));
  RunOutput out = finish("toy", config, std::move(t), t0);
  out.sidecar["toy"] = info;
  return out;
}

RunOutput command_reproduce(const std::string& recipe, const SweepOptions& options) {
  return run_recipe(recipe, options);
}

}  // namespace ringsim
