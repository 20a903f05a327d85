#include "integrator.hpp"

#include <cmath>
#include <sstream>

#include <boost/numeric/odeint.hpp>

namespace ringsim::detail {

namespace odeint = boost::numeric::odeint;

AdaptiveIntegrator::AdaptiveIntegrator(Rhs rhs, double abs_tol, double rel_tol,
                                       double initial_dt, long max_steps)
    : rhs_(std::move(rhs)),
      abs_tol_(abs_tol),
      rel_tol_(rel_tol),
      dt_(initial_dt),
      max_steps_(max_steps) {}

void AdaptiveIntegrator::advance(State& x, double& t, double t_end) {
  auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(abs_tol_, rel_tol_);
  auto sys = [this](const State& s, State& ds, double tt) { rhs_(s, ds, tt); };
  while (t < t_end) {
    double dt = std::min(dt_, t_end - t);
    const bool clipped = dt < dt_;
    int failures = 0;
    while (stepper.try_step(sys, x, t, dt) == odeint::fail) {
      if (++failures > 500 || !(dt > 1e-14)) {
        std::ostringstream os;
        os << "adaptive integrator step size collapsed at t = " << t << " (dt = " << dt << ")";
        throw SolverError(os.str());
      }
    }
    // A step shortened to land on t_end should not shrink the next one.
    if (!clipped || failures > 0) dt_ = dt;
    if (!std::isfinite(x.empty() ? 0.0 : x[0])) {
      throw SolverError("integration produced non-finite state");
    }
    if (++steps_ > max_steps_) {
      throw SolverError("adaptive integrator exceeded its step budget");
    }
  }
}

}  // namespace ringsim::detail
