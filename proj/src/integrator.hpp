#pragma once

// Adaptive Dormand-Prince stepping shared by the time-domain solvers.

#include <functional>
#include <vector>

#include "ringsim/types.hpp"

namespace ringsim::detail {

class AdaptiveIntegrator {
 public:
  using State = std::vector<double>;
  using Rhs = std::function<void(const State&, State&, double)>;

  AdaptiveIntegrator(Rhs rhs, double abs_tol, double rel_tol, double initial_dt = 1e-2,
                     long max_steps = 50'000'000);

  /// Advances x from t to exactly t_end. Throws SolverError when the step size
  /// collapses or the step budget is exhausted.
  void advance(State& x, double& t, double t_end);

  long steps() const { return steps_; }
  double last_dt() const { return dt_; }

 private:
  Rhs rhs_;
  double abs_tol_;
  double rel_tol_;
  double dt_;
  long max_steps_;
  long steps_ = 0;
};

}  // namespace ringsim::detail
