#pragma once

// Grid sweeps over model parameters with deterministic, thread-count
// independent output.

#include "ringsim/lindblad.hpp"
#include "ringsim/optimize.hpp"
#include "ringsim/table.hpp"

namespace ringsim {

inline constexpr long long kMaxGridPoints = 10'000'000;

struct SweepOptions {
  int threads = 0;      // 0: RING_SIM_THREADS, else the hardware concurrency
  bool oracle = false;  // master-equation cross-check on points with 1 ≤ N ≤ 5
  OracleOptions oracle_options;
};

/// Requested count, else RING_SIM_THREADS, else the hardware concurrency.
int resolve_thread_count(int requested);

long long grid_size(const GridSpec& grid);

/// Throws InvalidArgument for grids that cannot be run (unknown or duplicate
/// axes, non-finite or non-integer values, oversized grids, metric/model
/// combinations without an implementation).
void validate_grid(const GridSpec& grid);

/// One row per grid point in lexicographic order (first axis slowest). The
/// base point comes from `config.point`; axes override its fields. Per-point
/// failures land in the error column.
Table run_sweep(const RunConfig& config, const SweepOptions& options = {});

}  // namespace ringsim
