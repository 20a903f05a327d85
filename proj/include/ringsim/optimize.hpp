#pragma once

// Operating-point resolution (dark Γ_T and drive detuning) and the impurity
// optimizer: maximize σ_abs at the dark resonance over δ_I or Γ_I.

#include <string>
#include <vector>

#include "ringsim/config_io.hpp"

namespace ringsim {

struct OperatingPoint {
  SystemConfig config;   // with the resolved Γ_T
  DriveSpec drive;       // with the resolved detuning
  ModeSet modes;         // of config
  DarkModeReport bare_mode;  // darkest impurity-coupled mode at Γ_T = 0
  DarkModeReport mode;       // the same at the resolved Γ_T
  double gamma_T = 0.0;
  double detuning = 0.0;
};

OperatingPoint operating_point(const ModelPoint& point);

/// σ_abs/σ at a resolved point: the coherent linear solve or the incoherent
/// mode sum, following the drive kind.
AbsorptionResult point_sigma(const OperatingPoint& op);

struct OptimizeRequest {
  FreeParameter parameter = FreeParameter::delta_I;
  double bracket = 0.0;  // half width around the seed; 0 picks 2|J| (δ_I) or max(seed, 1) (Γ_I)
  double tolerance = 1e-4;
  int coarse_points = 201;
};

struct OptimizeResult {
  FreeParameter parameter = FreeParameter::delta_I;
  double seed = 0.0;
  double lower = 0.0;  // final coarse bracket
  double upper = 0.0;
  double optimum = 0.0;
  double sigma_abs_over_sigma = 0.0;
  OperatingPoint point;  // at the optimum
  bool widened = false;
  bool fallback = false;  // competing peaks or an edge maximum survived the widening
  int evaluations = 0;
  std::vector<std::string> warnings;
};

/// The seed is the dark-state condition J_R + δ_I = J(N − Γ_I/Γ0) solved for
/// the free parameter; each candidate is evaluated at its own dark resonance
/// (Γ_T from the bare dark width unless `point.gamma_T` is set, drive on the
/// dark-mode frequency). Coarse scan, one widening if the maximum sits on the
/// edge or a second peak reaches half its height, then golden-section
/// refinement between the neighbours of the coarse maximum.
OptimizeResult optimize_impurity(const OptimizeRequest& request, const ModelPoint& point);

/// Seed of the optimizer for the given point.
double optimizer_seed(FreeParameter parameter, const ModelPoint& point);

}  // namespace ringsim
