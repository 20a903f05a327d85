#include "ringsim/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <set>
#include <thread>

namespace ringsim {
namespace {

struct PointValues {
  ModelPoint point;
  double n_eff = 0.0;
  double distance = 0.0;
  std::optional<double> gamma_l;
};

PointValues apply_axes(const RunConfig& config, const std::vector<double>& values) {
  PointValues pv;
  pv.point = config.point;
  pv.n_eff = config.toy.n_eff;
  pv.distance = config.toy.distance;
  const auto& axes = config.grid.axes;
  for (std::size_t a = 0; a < axes.size(); ++a) {
    const std::string& name = axes[a].name;
    const double v = values[a];
    if (name == "N") {
      pv.point.n_ring = static_cast<int>(v);
    } else if (name == "lambda_over_d") {
      pv.point.lambda_over_d = v;
    } else if (name == "delta_I") {
      pv.point.delta_I = v;
    } else if (name == "gamma_I") {
      pv.point.gamma_I = v;
    } else if (name == "gamma_T") {
      pv.point.gamma_T = v;
      pv.gamma_l = v;
    } else if (name == "delta_drive") {
      pv.point.detuning = v;
    } else if (name == "n_eff") {
      pv.n_eff = v;
    } else if (name == "distance") {
      pv.distance = v;
    }
  }
  return pv;
}

std::vector<std::string> result_columns(const GridSpec& grid, bool oracle) {
  std::vector<std::string> cols;
  for (const auto& a : grid.axes) cols.push_back(a.name);
  if (grid.model == Model::toymodel) {
    for (const char* c : {"dark_gamma", "omega_R", "gamma_ac", "detuning"}) cols.push_back(c);
    if (grid.metric == Metric::sigma_abs_coherent) {
      for (const char* c : {"transfer_rate", "sigma_abs_over_sigma", "sigma_abs_over_quarter_sigma"}) {
        cols.push_back(c);
      }
    }
    cols.push_back("model");
    return cols;
  }
  for (const char* c : {"dark_gamma", "impurity_weight", "dark_frequency", "gamma_T", "detuning"}) {
    cols.push_back(c);
  }
  if (grid.optimize) {
    cols.push_back(std::string(parameter_name(*grid.optimize)) + "_opt");
    cols.push_back("optimizer_fallback");
  }
  if (grid.metric == Metric::sigma_abs_coherent) {
    cols.push_back("sigma_abs_over_sigma");
    cols.push_back("sigma_abs_over_quarter_sigma");
  } else if (grid.metric == Metric::sigma_abs_incoherent) {
    cols.push_back("sigma_abs_over_sigma");
    cols.push_back("sigma_abs_over_single");
  }
  cols.push_back("model");
  if (oracle) {
    cols.push_back("oracle_sigma_abs_over_sigma");
    cols.push_back("oracle_relative_difference");
  }
  return cols;
}

void evaluate_toy(const RunConfig& config, const PointValues& pv, Table& t, int row) {
  ToySpec spec = config.toy;
  spec.n_eff = pv.n_eff;
  spec.distance = pv.distance;
  if (pv.gamma_l) spec.gamma_l = *pv.gamma_l;
  spec.bandwidths = {0.0};
  const ToyConfig tc = spec.config();
  const BrightDark bd = bright_dark_states(tc.gamma_a, tc.gamma_c, tc.gamma_ac);
  t.set(row, "dark_gamma", bd.dark_gamma);
  t.set(row, "omega_R", tc.omega_R);
  t.set(row, "gamma_ac", tc.gamma_ac);
  double detuning = 0.0;
  if (pv.point.detuning) {
    detuning = *pv.point.detuning;
  } else {
    // Frequency of the longer-lived eigenvalue of the single-excitation block.
    Eigen::Matrix2cd m;
    const cplx i(0.0, 1.0);
    m << tc.omega_a - 0.5 * i * tc.gamma_a, tc.omega_R - 0.5 * i * tc.gamma_ac,
        tc.omega_R - 0.5 * i * tc.gamma_ac, tc.omega_c - 0.5 * i * (tc.gamma_c + tc.gamma_l);
    const Eigen::Vector2cd ev = m.eigenvalues();
    detuning = ev(0).imag() > ev(1).imag() ? ev(0).real() : ev(1).real();
  }
  t.set(row, "detuning", detuning);
  if (config.grid.metric == Metric::sigma_abs_coherent) {
    const double rate = coherent_transfer_rate(tc, detuning);
    t.set(row, "transfer_rate", rate);
    t.set(row, "sigma_abs_over_sigma", rate / 4.0);
    t.set(row, "sigma_abs_over_quarter_sigma", rate);
  }
}

void evaluate_point(const RunConfig& config, const SweepOptions& options, const PointValues& pv,
                    Table& t, int row) {
  const GridSpec& grid = config.grid;
  t.set(row, "model", std::string(grid.model == Model::meanfield ? variant_name(config.meanfield.variant)
                                                                  : model_name(grid.model)));
  if (grid.model == Model::toymodel) {
    evaluate_toy(config, pv, t, row);
    return;
  }
  ModelPoint point = pv.point;
  if (grid.optimize) {
    OptimizeRequest req;
    req.parameter = *grid.optimize;
    req.bracket = config.optimize.bracket;
    req.tolerance = config.optimize.tolerance;
    req.coarse_points = config.optimize.coarse_points;
    const OptimizeResult opt = optimize_impurity(req, point);
    (req.parameter == FreeParameter::delta_I ? point.delta_I : point.gamma_I) = opt.optimum;
    t.set(row, std::string(parameter_name(req.parameter)) + "_opt", opt.optimum);
    t.set(row, "optimizer_fallback", static_cast<long long>(opt.fallback));
    for (const auto& w : opt.warnings) t.add_error(row, "optimizer: " + w);
  }
  const OperatingPoint op = operating_point(point);
  t.set(row, "dark_gamma", op.bare_mode.decay_rate);
  t.set(row, "impurity_weight", op.bare_mode.impurity_weight);
  t.set(row, "dark_frequency", op.bare_mode.frequency);
  t.set(row, "gamma_T", op.gamma_T);
  t.set(row, "detuning", op.detuning);

  double sigma = 0.0;
  if (grid.metric == Metric::sigma_abs_coherent) {
    if (grid.model == Model::meanfield) {
      const MeanFieldParams params = MeanFieldParams::from_config(
          op.config, config.meanfield.rabi, op.detuning, config.meanfield.variant);
      MeanFieldOptions mo;
      mo.t_max = config.meanfield.t_max;
      const MeanFieldResult r = mf_sigma_abs(params, mo);
      sigma = r.sigma_abs_over_sigma;
      if (!r.stable) t.add_error(row, "meanfield: fixed point is not linearly stable");
    } else {
      sigma = sigma_abs_coherent(op.config, op.drive).sigma_abs_over_sigma;
    }
    t.set(row, "sigma_abs_over_sigma", sigma);
    t.set(row, "sigma_abs_over_quarter_sigma", 4.0 * sigma);
  } else if (grid.metric == Metric::sigma_abs_incoherent) {
    sigma = sigma_abs_incoherent(op.modes, op.config, op.drive).sigma_abs_over_sigma;
    t.set(row, "sigma_abs_over_sigma", sigma);
    const double single = single_emitter_sigma_incoherent(op.gamma_T);
    if (single > 0.0) {
      t.set(row, "sigma_abs_over_single", sigma / single);
    } else {
      t.add_error(row, "single-emitter reference is zero (gamma_T = 0)");
    }
  }

  const bool sigma_metric =
      grid.metric == Metric::sigma_abs_coherent || grid.metric == Metric::sigma_abs_incoherent;
  if (options.oracle && sigma_metric && grid.model == Model::quantum && point.n_ring >= 1 &&
      point.n_ring <= 5) {
    try {
      const OracleResult o = oracle_steady_state({op.config, op.drive, 0.0}, options.oracle_options);
      t.set(row, "oracle_sigma_abs_over_sigma", o.sigma_abs_over_sigma);
      if (sigma != 0.0) t.set(row, "oracle_relative_difference", o.sigma_abs_over_sigma / sigma - 1.0);
    } catch (const std::exception& e) {
      t.add_error(row, std::string("oracle: ") + e.what());
    }
  }
}

}  // namespace

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("RING_SIM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 1024) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

long long grid_size(const GridSpec& grid) {
  long long n = 1;
  for (const auto& a : grid.axes) {
    const long long k = static_cast<long long>(a.values.size());
    if (k == 0) return 0;
    if (n > kMaxGridPoints / k + 1) return kMaxGridPoints + 1;
    n *= k;
  }
  return n;
}

void validate_grid(const GridSpec& grid) {
  std::set<std::string> seen;
  const bool toy = grid.model == Model::toymodel;
  for (const auto& a : grid.axes) {
    if (!is_known_axis(a.name)) throw InvalidArgument("unknown sweep axis '" + a.name + "'");
    if (!seen.insert(a.name).second) throw InvalidArgument("duplicate sweep axis '" + a.name + "'");
    if (a.values.empty()) throw InvalidArgument("sweep axis '" + a.name + "' has no values");
    const bool toy_axis = a.name == "n_eff" || a.name == "distance" || a.name == "gamma_T" ||
                          a.name == "delta_drive";
    if (toy && !toy_axis) throw InvalidArgument("axis '" + a.name + "' is not available for the toy model");
    if (!toy && (a.name == "n_eff" || a.name == "distance")) {
      throw InvalidArgument("axis '" + a.name + "' only applies to the toy model");
    }
    for (double v : a.values) {
      if (!std::isfinite(v)) throw InvalidArgument("sweep axis '" + a.name + "' has a non-finite value");
      if (a.name == "N" && (v != std::floor(v) || v < 0.0 || v > 4096.0)) {
        throw InvalidArgument("sweep axis 'N' needs integers in 0..4096");
      }
    }
  }
  if (grid_size(grid) > kMaxGridPoints) throw InvalidArgument("sweep grid exceeds 10^7 points");
  if (toy && grid.metric != Metric::sigma_abs_coherent && grid.metric != Metric::dark_gamma) {
    throw InvalidArgument("the toy model supports the sigma_abs_coherent and dark_gamma metrics");
  }
  if (toy && grid.optimize) throw InvalidArgument("impurity optimization is not defined for the toy model");
  if (grid.model == Model::meanfield) {
    if (grid.metric != Metric::sigma_abs_coherent) {
      throw InvalidArgument("the mean-field model supports only the sigma_abs_coherent metric");
    }
    if (grid.optimize) throw InvalidArgument("impurity optimization uses the quantum model only");
  }
}

Table run_sweep(const RunConfig& config, const SweepOptions& options) {
  const GridSpec& grid = config.grid;
  validate_grid(grid);
  const bool oracle = options.oracle;
  Table table(result_columns(grid, oracle));
  table.set_meta("command", "sweep");
  table.set_meta("metric", metric_name(grid.metric));
  table.set_meta("model", model_name(grid.model));
  table.set_meta("config_hash", config_hash(config));

  const long long n = grid_size(grid);
  for (long long i = 0; i < n; ++i) table.add_row();

  auto work = [&](long long index) {
    std::vector<double> values(grid.axes.size());
    long long rem = index;
    for (int a = static_cast<int>(grid.axes.size()) - 1; a >= 0; --a) {
      const long long k = static_cast<long long>(grid.axes[a].values.size());
      values[a] = grid.axes[a].values[rem % k];
      rem /= k;
    }
    const int row = static_cast<int>(index);
    for (std::size_t a = 0; a < values.size(); ++a) {
      if (grid.axes[a].name == "N") {
        table.set(row, static_cast<int>(a), static_cast<long long>(values[a]));
      } else {
        table.set(row, static_cast<int>(a), values[a]);
      }
    }
    try {
      evaluate_point(config, options, apply_axes(config, values), table, row);
    } catch (const std::exception& e) {
      table.add_error(row, e.what());
    }
  };

  const int threads = static_cast<int>(std::min<long long>(resolve_thread_count(options.threads), n));
  if (threads <= 1) {
    for (long long i = 0; i < n; ++i) work(i);
    return table;
  }
  std::atomic<long long> next{0};
  std::vector<std::thread> pool;
  for (int k = 0; k < threads; ++k) {
    pool.emplace_back([&] {
      for (long long i = next++; i < n; i = next++) work(i);
    });
  }
  for (auto& th : pool) th.join();
  return table;
}

}  // namespace ringsim
