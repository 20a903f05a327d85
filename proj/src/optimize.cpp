#include "ringsim/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ringsim {
namespace {

constexpr double kMinGammaI = 1e-6;

struct Scan {
  std::vector<double> x;
  std::vector<double> f;
  int argmax = 0;
};

// A single dominant peak: no other local maximum reaches half the height of
// the largest one. Fano-shaped resonances (a zero next to the peak, a slow
// rise far away) pass; two comparable peaks do not.
bool unimodal(const Scan& s) {
  const double fmax = s.f[s.argmax];
  for (int i = 1; i + 1 < static_cast<int>(s.f.size()); ++i) {
    if (i == s.argmax) continue;
    if (s.f[i] > s.f[i - 1] && s.f[i] >= s.f[i + 1] && s.f[i] > 0.5 * fmax) return false;
  }
  const int last = static_cast<int>(s.f.size()) - 1;
  if (s.argmax != 0 && s.f[0] > s.f[1] && s.f[0] > 0.5 * fmax) return false;
  if (s.argmax != last && s.f[last] > s.f[last - 1] && s.f[last] > 0.5 * fmax) return false;
  return true;
}

}  // namespace

OperatingPoint operating_point(const ModelPoint& point) {
  OperatingPoint op;
  const SystemConfig bare = point.system(0.0);
  const ModeSet bare_modes = diagonalize_effective(coupling_matrices(bare), 0.0);
  op.bare_mode = darkest_coupled_mode(bare_modes);
  if (op.bare_mode.mode_index < 0) throw SolverError("no impurity-coupled mode found");
  op.gamma_T = point.gamma_T ? *point.gamma_T : op.bare_mode.decay_rate;
  op.config = point.system(op.gamma_T);
  op.modes = op.gamma_T == 0.0 ? bare_modes
                               : diagonalize_effective(coupling_matrices(op.config), op.gamma_T);
  op.mode = darkest_coupled_mode(op.modes);
  if (op.mode.mode_index < 0) throw SolverError("no impurity-coupled mode found");
  op.detuning = point.detuning ? *point.detuning : op.mode.frequency;
  op.drive = point.drive(op.detuning);
  return op;
}

AbsorptionResult point_sigma(const OperatingPoint& op) {
  if (op.drive.kind == DriveKind::coherent) return sigma_abs_coherent(op.config, op.drive);
  return sigma_abs_incoherent(op.modes, op.config, op.drive);
}

double optimizer_seed(FreeParameter parameter, const ModelPoint& point) {
  if (point.n_ring < 2) throw InvalidArgument("the impurity optimizer needs a ring of at least 2 emitters");
  if (parameter == FreeParameter::delta_I) {
    return dark_condition_delta(point.n_ring, point.lambda_over_d, point.gamma_I).predicted_delta_I;
  }
  const double pred0 = dark_condition_delta(point.n_ring, point.lambda_over_d, 0.0).predicted_delta_I;
  const double pred1 = dark_condition_delta(point.n_ring, point.lambda_over_d, 1.0).predicted_delta_I;
  const double j = pred0 - pred1;
  return std::max(kMinGammaI, (pred0 - point.delta_I) / j);
}

OptimizeResult optimize_impurity(const OptimizeRequest& req, const ModelPoint& base) {
  if (!(req.tolerance > 0.0)) throw InvalidArgument("optimizer tolerance must be positive");
  if (req.coarse_points < 5) throw InvalidArgument("optimizer needs at least 5 coarse points");
  if (req.bracket < 0.0) throw InvalidArgument("optimizer bracket must be non-negative");

  OptimizeResult out;
  out.parameter = req.parameter;
  out.seed = optimizer_seed(req.parameter, base);
  const bool is_delta = req.parameter == FreeParameter::delta_I;

  double half = req.bracket;
  if (half == 0.0) {
    if (is_delta) {
      const DarkCondition c0 = dark_condition_delta(base.n_ring, base.lambda_over_d, 0.0);
      const DarkCondition c1 = dark_condition_delta(base.n_ring, base.lambda_over_d, 1.0);
      const double j = c0.predicted_delta_I - c1.predicted_delta_I;
      const double seed_spread = std::abs(c1.predicted_delta_I_full - c1.predicted_delta_I);
      half = 2.0 * std::max({std::abs(j), seed_spread, base.gamma_I});
    } else {
      half = std::max(out.seed, 1.0);
    }
  }

  auto at = [&](double x) {
    ModelPoint p = base;
    (is_delta ? p.delta_I : p.gamma_I) = x;
    p.detuning.reset();
    return p;
  };
  std::string last_error;
  auto objective = [&](double x) {
    ++out.evaluations;
    try {
      const double f = point_sigma(operating_point(at(x))).sigma_abs_over_sigma;
      return std::isfinite(f) ? f : -std::numeric_limits<double>::infinity();
    } catch (const std::exception& e) {
      last_error = e.what();
      return -std::numeric_limits<double>::infinity();
    }
  };
  auto scan = [&](double lo, double hi) {
    if (!is_delta) lo = std::max(lo, kMinGammaI);
    Scan s;
    s.x = linspace(lo, hi, req.coarse_points);
    for (double x : s.x) s.f.push_back(objective(x));
    s.argmax = static_cast<int>(std::max_element(s.f.begin(), s.f.end()) - s.f.begin());
    return s;
  };

  Scan s = scan(out.seed - half, out.seed + half);
  const int last = req.coarse_points - 1;
  auto needs_widening = [&](const Scan& sc) {
    return sc.argmax == 0 || sc.argmax == last || !unimodal(sc);
  };
  if (needs_widening(s)) {
    out.widened = true;
    s = scan(out.seed - 2.0 * half, out.seed + 2.0 * half);
  }
  out.lower = s.x.front();
  out.upper = s.x.back();
  if (!std::isfinite(s.f[s.argmax])) {
    throw SolverError("optimizer: objective failed on the whole bracket: " + last_error);
  }

  double best_x = s.x[s.argmax];
  double best_f = s.f[s.argmax];
  const bool edge = s.argmax == 0 || s.argmax == last;
  if (edge || !unimodal(s)) {
    out.fallback = true;
    out.warnings.push_back(edge ? "maximum on the bracket edge after widening"
                                : "competing peaks after widening; refined around the coarse argmax");
  }
  if (!edge) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = s.x[s.argmax - 1];
    double b = s.x[s.argmax + 1];
    double c = b - phi * (b - a);
    double d = a + phi * (b - a);
    double fc = objective(c);
    double fd = objective(d);
    while (b - a > req.tolerance) {
      if (fc > fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - phi * (b - a);
        fc = objective(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + phi * (b - a);
        fd = objective(d);
      }
    }
    if (fc > best_f) {
      best_f = fc;
      best_x = c;
    }
    if (fd > best_f) {
      best_f = fd;
      best_x = d;
    }
  }
  out.optimum = best_x;
  out.point = operating_point(at(best_x));
  out.sigma_abs_over_sigma = point_sigma(out.point).sigma_abs_over_sigma;
  return out;
}

}  // namespace ringsim
