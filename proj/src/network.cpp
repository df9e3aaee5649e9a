#include "efa/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

namespace efa {

void validate(const NetworkSpec& net) {
  if (net.links.empty()) throw std::invalid_argument("network has no links");
  if (net.channels < 1) throw std::invalid_argument("network needs at least one channel");
  if (!(net.tau > 0.0) || !std::isfinite(net.tau))
    throw std::invalid_argument("coincidence window must be positive");
  if (!(net.f_min >= 0.0 && net.f_min <= 1.0))
    throw std::invalid_argument("fidelity threshold must lie in [0, 1]");
  if (!net.uniform_flux()) {
    if (net.channel_weights.size() != net.channels)
      throw std::invalid_argument("channel weight list must have one entry per channel");
    double sum = 0.0;
    for (double w : net.channel_weights) {
      if (!(w >= 0.0)) throw std::invalid_argument("channel weights must be non-negative");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("channel weights must sum to 1");
  }

  std::set<std::string> users;
  for (const auto& link : net.links) {
    validate(link.user_a);
    validate(link.user_b);
    if (link.user_a.label == link.user_b.label)
      throw std::invalid_argument("link '" + link.name + "' connects a user to itself");
    for (const auto* u : {&link.user_a, &link.user_b}) {
      if (!users.insert(u->label).second)
        throw std::invalid_argument("user '" + u->label +
                                    "' appears in more than one link; links must be one-to-one");
    }
    if (!is_pure_state(link.target))
      throw std::invalid_argument("link '" + link.name + "' target state is not normalized");
    const double y1 = noise_param(link.user_a, net.tau).y;
    const double y2 = noise_param(link.user_b, net.tau).y;
    if (!entanglement_possible(y1, y2))
      throw std::invalid_argument("link '" + link.name + "' can never be entangled (y1=" +
                                  std::to_string(y1) + ", y2=" + std::to_string(y2) + ")");
  }
}

void validate(const Allocation& alloc, const NetworkSpec& net) {
  if (alloc.alpha.size() != net.channels)
    throw std::invalid_argument("allocation length differs from the channel count");
  const int links = static_cast<int>(net.link_count());
  for (int a : alloc.alpha) {
    if (a < 0 || a > links)
      throw std::out_of_range("allocation entry " + std::to_string(a) + " outside [0, " +
                              std::to_string(links) + "]");
  }
  if (!(alloc.mu_tot >= 0.0) || !std::isfinite(alloc.mu_tot))
    throw std::invalid_argument("total flux must be finite and non-negative");
}

std::vector<std::size_t> channel_counts(const Allocation& alloc, std::size_t links) {
  std::vector<std::size_t> counts(links + 1, 0);
  for (int a : alloc.alpha) {
    if (a < 0 || static_cast<std::size_t>(a) > links)
      throw std::out_of_range("allocation entry out of range");
    ++counts[static_cast<std::size_t>(a)];
  }
  return counts;
}

std::vector<double> link_fluxes(const Allocation& alloc, const NetworkSpec& net) {
  validate(alloc, net);
  std::vector<double> x(net.link_count(), 0.0);
  if (net.uniform_flux()) {
    const auto counts = channel_counts(alloc, net.link_count());
    const double per_channel = net.tau * alloc.mu_tot / static_cast<double>(net.channels);
    for (std::size_t l = 0; l < x.size(); ++l)
      x[l] = static_cast<double>(counts[l + 1]) * per_channel;
  } else {
    for (std::size_t k = 0; k < net.channels; ++k) {
      if (alloc.alpha[k] == 0) continue;
      x[static_cast<std::size_t>(alloc.alpha[k] - 1)] +=
          net.tau * alloc.mu_tot * net.channel_weights[k];
    }
  }
  return x;
}

std::vector<LinkProfile> link_profiles(const NetworkSpec& net) {
  std::vector<LinkProfile> out;
  out.reserve(net.link_count());
  for (const auto& link : net.links) {
    LinkProfile p;
    p.y1 = noise_param(link.user_a, net.tau).y;
    p.y2 = noise_param(link.user_b, net.tau).y;
    const auto best = ebr_max(p.y1, p.y2);
    if (!best.x || !(best.ebr > 0.0))
      throw std::invalid_argument("link '" + link.name + "' has no positive EBR maximum");
    p.x_ebr_max = *best.x;
    p.ebr_max = best.ebr;
    out.push_back(p);
  }
  return out;
}

double link_beta(const LinkProfile& link, double x, double f_min) {
  if (x == 0.0) return 0.0;
  if (fidelity_dimensionless(x, link.y1, link.y2) < f_min - kFidelitySlack) return -1.0;
  return ebr_dimensionless(x, link.y1, link.y2) / link.ebr_max;
}

FitnessModel::FitnessModel(NetworkSpec net) : net_(std::move(net)) {
  validate(net_);
  profiles_ = link_profiles(net_);
  phi_.reserve(profiles_.size());
  for (const auto& p : profiles_) {
    try {
      const auto c = constrained_optimal_flux(p.y1, p.y2, net_.f_min);
      phi_.push_back(c.x);
      caps_.push_back(c.ebr / p.ebr_max);
    } catch (const InfeasibleLink&) {
      phi_.push_back(p.x_ebr_max);
      caps_.push_back(-1.0);
    }
  }
}

double FitnessModel::value(const Allocation& alloc) const {
  const auto x = link_fluxes(alloc, net_);
  double f = 0.0;
  for (std::size_t l = 0; l < x.size(); ++l) f += link_beta(profiles_[l], x[l], net_.f_min);
  return f;
}

double FitnessModel::value_from_counts(std::span<const std::size_t> counts,
                                       double per_channel_x) const {
  double f = 0.0;
  for (std::size_t l = 0; l < profiles_.size(); ++l)
    f += link_beta(profiles_[l], static_cast<double>(counts[l + 1]) * per_channel_x, net_.f_min);
  return f;
}

FitnessReport FitnessModel::evaluate(const Allocation& alloc) const {
  const auto x = link_fluxes(alloc, net_);
  const auto counts = channel_counts(alloc, net_.link_count());
  FitnessReport report;
  report.links.reserve(x.size());
  for (std::size_t l = 0; l < x.size(); ++l) {
    const auto& p = profiles_[l];
    const auto& spec = net_.links[l];
    LinkOutcome o;
    o.channels = counts[l + 1];
    o.x = x[l];
    o.allocated = x[l] > 0.0;
    o.metrics = link_metrics(x[l] / net_.tau, spec.user_a, spec.user_b, net_.tau);
    if (o.allocated) {
      o.fidelity = fidelity_dimensionless(x[l], p.y1, p.y2);
      o.feasible = o.fidelity >= net_.f_min - kFidelitySlack;
      o.ebr_dimensionless = ebr_dimensionless(x[l], p.y1, p.y2);
      o.ebr_normalized = o.ebr_dimensionless / p.ebr_max;
    } else {
      o.fidelity = std::numeric_limits<double>::quiet_NaN();
    }
    o.beta = link_beta(p, x[l], net_.f_min);
    report.fitness += o.beta;
    report.links.push_back(o);
  }
  return report;
}

double FitnessModel::default_mu_tot_max() const {
  const double phi = *std::max_element(phi_.begin(), phi_.end());
  return 4.0 * static_cast<double>(net_.channels) * phi / net_.tau;
}

IdealFitness ideal_fitness(const NetworkSpec& net) {
  const auto profiles = link_profiles(net);
  IdealFitness out;
  for (std::size_t l = 0; l < profiles.size(); ++l) {
    const auto& p = profiles[l];
    ConstrainedFlux c;
    try {
      c = constrained_optimal_flux(p.y1, p.y2, net.f_min);
    } catch (const InfeasibleLink& e) {
      throw InfeasibleLink("link '" + net.links[l].name + "': " + e.what());
    }
    out.value += c.ebr / p.ebr_max;
    out.per_link.push_back(c);
  }
  return out;
}

}  // namespace efa
