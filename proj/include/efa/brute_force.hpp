// Exhaustive reference optimizer for uniform-flux networks.
//
// Under a uniform channel split only the channel count of each link
// matters, so the search enumerates every composition of K channels over the
// L links and the reserve. For each composition the per-channel flux is
// optimized exactly: the fitness is split at the points where some link
// crosses F = F_min or F = 1/2, and on each piece it is a sum of concave
// terms, maximized by golden-section search.

#pragma once

#include "efa/network.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>

namespace efa {

class InstanceTooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

struct BruteForceOptions {
  std::uint64_t max_compositions = 10'000'000;
  std::optional<double> mu_tot_max;  // defaults to the model bound used by the GA
};

struct BruteForceResult {
  Allocation best;
  FitnessReport report;
  std::vector<std::size_t> counts;  // index 0 is the reserve
  std::uint64_t compositions = 0;
};

/// Best per-channel flux for fixed channel counts, searched on [0, x_max].
/// Returns (per-channel x, fitness). Pieces whose fitness bound cannot
/// exceed `incumbent` are skipped, so a result at or below it is not
/// necessarily the optimum for these counts.
std::pair<double, double> best_flux_for_counts(
    const FitnessModel& model, std::span<const std::size_t> counts, double x_max,
    double incumbent = -std::numeric_limits<double>::infinity());

BruteForceResult brute_force_optimize(const FitnessModel& model,
                                      const BruteForceOptions& options = {});

}  // namespace efa
