#include "efa/genetic.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace efa {

namespace {

using Rng = std::mt19937_64;

class Evaluator {
 public:
  explicit Evaluator(const FitnessModel& model)
      : model_(model), counts_(model.network().link_count() + 1) {}

  double operator()(const Allocation& gene) {
    const auto& net = model_.network();
    if (!net.uniform_flux()) return model_.value(gene);
    std::fill(counts_.begin(), counts_.end(), 0);
    for (int a : gene.alpha) ++counts_[static_cast<std::size_t>(a)];
    return model_.value_from_counts(counts_,
                                    net.tau * gene.mu_tot / static_cast<double>(net.channels));
  }

 private:
  const FitnessModel& model_;
  std::vector<std::size_t> counts_;
};

/// Stochastic universal sampling with weight 1/sqrt(rank).
std::vector<std::size_t> select_parents(std::span<const std::size_t> ranked, std::size_t count,
                                        Rng& rng) {
  std::vector<double> cumulative(ranked.size());
  double total = 0.0;
  for (std::size_t r = 0; r < ranked.size(); ++r) {
    total += 1.0 / std::sqrt(static_cast<double>(r + 1));
    cumulative[r] = total;
  }
  std::vector<std::size_t> out;
  out.reserve(count);
  const double step = total / static_cast<double>(count);
  double pointer = std::uniform_real_distribution<double>(0.0, step)(rng);
  std::size_t r = 0;
  for (std::size_t i = 0; i < count; ++i) {
    while (r + 1 < ranked.size() && cumulative[r] < pointer) ++r;
    out.push_back(ranked[r]);
    pointer += step;
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

Allocation random_gene(std::size_t channels, int links, double mu_max, Rng& rng) {
  std::uniform_int_distribution<int> slot(0, links);
  Allocation g;
  g.alpha.resize(channels);
  for (auto& a : g.alpha) a = slot(rng);
  g.mu_tot = std::uniform_real_distribution<double>(0.0, mu_max)(rng);
  return g;
}

Allocation crossover(const Allocation& p, const Allocation& q, Rng& rng) {
  std::bernoulli_distribution coin(0.5);
  Allocation child;
  child.alpha.resize(p.alpha.size());
  for (std::size_t k = 0; k < p.alpha.size(); ++k) child.alpha[k] = coin(rng) ? p.alpha[k] : q.alpha[k];
  const double w = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  child.mu_tot = w * p.mu_tot + (1.0 - w) * q.mu_tot;
  return child;
}

Allocation mutate(const Allocation& parent, int links, double rate, double sigma, double mu_max,
                  Rng& rng) {
  std::bernoulli_distribution flip(rate);
  std::uniform_int_distribution<int> slot(0, links);
  Allocation child = parent;
  for (auto& a : child.alpha)
    if (flip(rng)) a = slot(rng);
  if (child.mu_tot > 0.0) {
    child.mu_tot *= std::exp(sigma * std::normal_distribution<double>(0.0, 1.0)(rng));
  } else {
    child.mu_tot = std::uniform_real_distribution<double>(0.0, mu_max)(rng);
  }
  child.mu_tot = std::clamp(child.mu_tot, 0.0, mu_max);
  return child;
}

}  // namespace

void validate(const GAConfig& config) {
  if (config.population_size < 2) throw std::invalid_argument("population must hold at least 2 genes");
  if (!(config.crossover_fraction > 0.0 && config.crossover_fraction < 1.0))
    throw std::invalid_argument("crossover fraction must lie in (0, 1)");
  if (config.elite_count >= config.population_size)
    throw std::invalid_argument("elite count must be smaller than the population");
  if (config.stall_generations < 1) throw std::invalid_argument("stall generations must be >= 1");
  if (config.max_generations < 1) throw std::invalid_argument("max generations must be >= 1");
  if (config.mutation_rate && !(*config.mutation_rate > 0.0 && *config.mutation_rate <= 1.0))
    throw std::invalid_argument("mutation rate must lie in (0, 1]");
  if (!(config.flux_mutation_sigma >= 0.0))
    throw std::invalid_argument("flux mutation spread must be non-negative");
  if (config.mu_tot_max && !(*config.mu_tot_max > 0.0) )
    throw std::invalid_argument("flux upper bound must be positive");
  if (config.independent_runs < 1) throw std::invalid_argument("need at least one run");
}

GAResult ga_optimize(const FitnessModel& model, const GAConfig& config,
                     const GenerationObserver& observer) {
  validate(config);
  const auto& net = model.network();
  const std::size_t channels = net.channels;
  const int links = static_cast<int>(net.link_count());
  const double mu_max = config.mu_tot_max.value_or(model.default_mu_tot_max());
  const double rate = config.mutation_rate.value_or(1.0 / static_cast<double>(channels));
  const std::size_t pop_size = config.population_size;

  Rng rng(config.seed);
  Evaluator evaluate(model);

  std::vector<Allocation> population;
  std::vector<double> score;
  population.reserve(pop_size);
  for (std::size_t i = 0; i < pop_size; ++i) {
    population.push_back(random_gene(channels, links, mu_max, rng));
    score.push_back(evaluate(population.back()));
  }

  const std::size_t rest = pop_size - config.elite_count;
  const auto n_cross = static_cast<std::size_t>(std::lround(config.crossover_fraction * rest));
  const std::size_t n_mut = rest - n_cross;

  GAResult result;
  result.seed = config.seed;
  double stall_reference = -std::numeric_limits<double>::infinity();
  std::size_t stall = 0;
  std::vector<std::size_t> ranked(pop_size);
  Allocation best_gene;
  double best_score = -std::numeric_limits<double>::infinity();

  for (std::size_t gen = 0; gen < config.max_generations; ++gen) {
    std::iota(ranked.begin(), ranked.end(), 0);
    std::stable_sort(ranked.begin(), ranked.end(),
                     [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
    if (observer) observer(gen, population);
    const double best = score[ranked[0]];
    if (gen == 0 || best > best_score) {
      best_score = best;
      best_gene = population[ranked[0]];
    }
    result.trace.push_back(best_score);
    result.generations = gen + 1;

    if (best_score > stall_reference + 1e-12) {
      stall_reference = best_score;
      stall = 0;
    } else if (++stall >= config.stall_generations) {
      result.stalled = true;
      break;
    }
    if (gen + 1 == config.max_generations) break;

    std::vector<Allocation> next;
    std::vector<double> next_score;
    next.reserve(pop_size);
    next_score.reserve(pop_size);
    for (std::size_t e = 0; e < config.elite_count; ++e) {
      next.push_back(population[ranked[e]]);
      next_score.push_back(score[ranked[e]]);
    }
    const auto parents = select_parents(ranked, 2 * n_cross + n_mut, rng);
    std::size_t p = 0;
    for (std::size_t i = 0; i < n_cross; ++i, p += 2) {
      next.push_back(crossover(population[parents[p]], population[parents[p + 1]], rng));
      next_score.push_back(evaluate(next.back()));
    }
    for (std::size_t i = 0; i < n_mut; ++i, ++p) {
      next.push_back(mutate(population[parents[p]], links, rate, config.flux_mutation_sigma,
                            mu_max, rng));
      next_score.push_back(evaluate(next.back()));
    }
    population = std::move(next);
    score = std::move(next_score);
  }

  result.best = std::move(best_gene);
  result.report = model.evaluate(result.best);
  return result;
}

std::uint64_t run_seed(std::uint64_t master, std::size_t run) {
  if (run == 0) return master;
  // splitmix64 step
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(run);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

MultiRunResult best_of_runs(const FitnessModel& model, const GAConfig& config) {
  validate(config);
  MultiRunResult out;
  out.runs.resize(config.independent_runs);
  auto run_one = [&](std::size_t i) {
    GAConfig c = config;
    c.seed = run_seed(config.seed, i);
    out.runs[i] = ga_optimize(model, c);
  };

  const std::size_t threads = std::max<std::size_t>(1, config.threads);
  if (threads == 1) {
    for (std::size_t i = 0; i < out.runs.size(); ++i) run_one(i);
  } else {
    for (std::size_t start = 0; start < out.runs.size(); start += threads) {
      std::vector<std::future<void>> batch;
      for (std::size_t i = start; i < std::min(out.runs.size(), start + threads); ++i)
        batch.push_back(std::async(std::launch::async, run_one, i));
      for (auto& f : batch) f.get();
    }
  }

  for (std::size_t i = 1; i < out.runs.size(); ++i)
    if (out.runs[i].report.fitness > out.runs[out.best_index].report.fitness) out.best_index = i;
  return out;
}

}  // namespace efa
