#include "efa/brute_force.hpp"

#include "efa/golden_section.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace efa {

namespace {

/// Visits every (c_0, ..., c_L) with sum K.
template <typename Fn>
void for_each_composition(std::vector<std::size_t>& counts, std::size_t slot,
                          std::size_t remaining, Fn&& fn) {
  if (slot + 1 == counts.size()) {
    counts[slot] = remaining;
    fn(counts);
    return;
  }
  for (std::size_t c = 0; c <= remaining; ++c) {
    counts[slot] = c;
    for_each_composition(counts, slot + 1, remaining - c, fn);
  }
}

}  // namespace

std::pair<double, double> best_flux_for_counts(const FitnessModel& model,
                                               std::span<const std::size_t> counts,
                                               double x_max, double incumbent) {
  const auto profiles = model.profiles();
  const double f_min = model.network().f_min;

  double cap = 0.0;
  bool any_allocated = false;
  for (std::size_t l = 0; l < profiles.size(); ++l) {
    if (counts[l + 1] == 0) continue;
    any_allocated = true;
    cap += model.beta_cap(l);
  }
  if (!any_allocated || std::max(cap, 0.0) <= incumbent) return {0.0, 0.0};

  std::vector<double> cuts{0.0, x_max};
  auto add_cut = [&](double x, std::size_t c) {
    const double t = x / static_cast<double>(c);
    if (t > 0.0 && t < x_max) cuts.push_back(t);
  };
  for (std::size_t l = 0; l < profiles.size(); ++l) {
    const std::size_t c = counts[l + 1];
    if (c == 0) continue;
    const auto& p = profiles[l];
    for (double z : ebr_roots(p.y1, p.y2)) add_cut(z, c);
    if (f_min > 0.25) {
      try {
        const auto window = fidelity_interval(p.y1, p.y2, f_min);
        add_cut(window.lo, c);
        add_cut(window.hi, c);
      } catch (const InfeasibleLink&) {
        // always penalized once allocated; no cut needed
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto objective = [&](double t) { return model.value_from_counts(counts, t); };
  // upper bound on [a, b]: feasibility is fixed inside a piece and each
  // EBR curve is unimodal, peaking at x_ebr_max
  auto piece_bound = [&](double a, double b) {
    const double mid = 0.5 * (a + b);
    double bound = 0.0;
    for (std::size_t l = 0; l < profiles.size(); ++l) {
      const double c = static_cast<double>(counts[l + 1]);
      if (c == 0.0) continue;
      const auto& p = profiles[l];
      if (fidelity_dimensionless(c * mid, p.y1, p.y2) < f_min - kFidelitySlack) {
        bound -= 1.0;
        continue;
      }
      const double x = std::clamp(p.x_ebr_max, c * a, c * b);
      bound += std::min(model.beta_cap(l), ebr_dimensionless(x, p.y1, p.y2) / p.ebr_max);
    }
    return bound;
  };

  double best_t = 0.0;
  double best_f = objective(0.0);
  auto consider = [&](double t, double f) {
    if (f > best_f) {
      best_f = f;
      best_t = t;
    }
  };
  for (double t : cuts) consider(t, objective(t));
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (piece_bound(a, b) <= std::max(best_f, incumbent)) continue;
    const auto [t, f] = golden_section_maximize(objective, a, b, (b - a) * 1e-10);
    consider(t, f);
  }
  return {best_t, best_f};
}

BruteForceResult brute_force_optimize(const FitnessModel& model, const BruteForceOptions& options) {
  const auto& net = model.network();
  if (!net.uniform_flux())
    throw std::invalid_argument("brute-force search requires a uniform channel flux split");
  const std::size_t links = net.link_count();

  std::uint64_t total = 0;
  try {
    total = count_allocations(net.channels, links, true);
  } catch (const std::overflow_error&) {
    throw InstanceTooLarge("allocation space exceeds 64 bits");
  }
  if (total > options.max_compositions)
    throw InstanceTooLarge("instance has " + std::to_string(total) +
                           " compositions, above the enumeration cap of " +
                           std::to_string(options.max_compositions));

  const double k = static_cast<double>(net.channels);
  const double mu_max = options.mu_tot_max.value_or(model.default_mu_tot_max());
  const double x_max = net.tau * mu_max / k;

  BruteForceResult result;
  double best_f = -std::numeric_limits<double>::infinity();
  double best_t = 0.0;
  std::vector<std::size_t> counts(links + 1, 0);
  for_each_composition(counts, 0, net.channels, [&](const std::vector<std::size_t>& c) {
    ++result.compositions;
    const auto [t, f] = best_flux_for_counts(model, c, x_max, best_f);
    if (f > best_f) {
      best_f = f;
      best_t = t;
      result.counts = c;
    }
  });

  result.best.alpha.clear();
  for (std::size_t l = 1; l <= links; ++l)
    result.best.alpha.insert(result.best.alpha.end(), result.counts[l], static_cast<int>(l));
  result.best.alpha.insert(result.best.alpha.end(), result.counts[0], 0);
  result.best.mu_tot = best_t * k / net.tau;
  result.report = model.evaluate(result.best);
  return result;
}

}  // namespace efa
