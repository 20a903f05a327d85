#pragma once

// The CLI subcommands as library calls: each returns a result table and the
// sidecar describing how it was produced.

#include "ringsim/recipes.hpp"

namespace ringsim {

/// Eigenmodes at the configured Γ_T ("dark" resolves to the dark width),
/// sorted by decay rate; the darkest impurity-coupled mode is flagged.
RunOutput command_modes(const RunConfig& config);
/// Coherent absorption versus drive detuning over config.spectrum.
RunOutput command_spectrum(const RunConfig& config);
RunOutput command_sweep(const RunConfig& config, const SweepOptions& options);
RunOutput command_optimize(const RunConfig& config);
/// Quantum linear response and the mean-field steady state at the same
/// operating point.
RunOutput command_meanfield(const RunConfig& config);
RunOutput command_toy(const RunConfig& config);
RunOutput command_reproduce(const std::string& recipe, const SweepOptions& options);

}  // namespace ringsim
