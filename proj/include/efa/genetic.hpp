// Mixed-integer genetic algorithm over (channel assignment, total flux).
//
// A gene is the assignment vector alpha (length K, entries 0..L) plus the
// continuous total flux mu_tot. Each generation keeps the elite genes,
// fills a fraction of the rest by recombining two parents and the remainder
// by mutating one parent. Parents are drawn by stochastic universal
// sampling over rank-scaled fitness.

#pragma once

#include "efa/network.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <optional>
#include <vector>

namespace efa {

struct GAConfig {
  std::size_t population_size = 200;
  double crossover_fraction = 0.8;
  std::size_t stall_generations = 100;
  std::size_t elite_count = 5;
  std::optional<double> mutation_rate;  // per alpha entry; defaults to 1/K
  double flux_mutation_sigma = 0.2;     // log-normal spread of mu_tot mutations
  std::optional<double> mu_tot_max;     // biphotons/s; defaults to the model bound
  std::uint64_t seed = 1;
  std::size_t max_generations = 10000;
  std::size_t independent_runs = 5;
  std::size_t threads = 1;              // parallel independent runs

  bool operator==(const GAConfig&) const = default;
};

void validate(const GAConfig& config);

struct GAResult {
  Allocation best;
  FitnessReport report;
  std::vector<double> trace;  // best fitness seen up to each generation
  std::size_t generations = 0;
  bool stalled = false;       // false when max_generations was hit
  std::uint64_t seed = 0;
};

/// Called once per generation with the whole population.
using GenerationObserver =
    std::function<void(std::size_t generation, std::span<const Allocation> population)>;

GAResult ga_optimize(const FitnessModel& model, const GAConfig& config,
                     const GenerationObserver& observer = {});

struct MultiRunResult {
  std::vector<GAResult> runs;
  std::size_t best_index = 0;

  const GAResult& best() const { return runs.at(best_index); }
};

/// Seed of run i derived from the master seed; run 0 uses the master seed.
std::uint64_t run_seed(std::uint64_t master, std::size_t run);

/// independent_runs GA runs with derived seeds, optionally in parallel.
/// The result does not depend on the thread count.
MultiRunResult best_of_runs(const FitnessModel& model, const GAConfig& config);

}  // namespace efa
