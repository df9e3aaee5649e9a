// One-to-one entanglement network over K shared channel pairs, channel
// allocations, and the normalized-EBR fitness with a fidelity penalty.

#pragma once

#include "efa/link_analysis.hpp"
#include "efa/link_model.hpp"
#include "efa/quantum_state.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace efa {

/// Fidelity comparisons against F_min accept this much rounding slack.
inline constexpr double kFidelitySlack = 1e-12;

struct LinkSpec {
  std::string name;
  UserEndpoint user_a;
  UserEndpoint user_b;
  PureState4<double> target = bell_psi_minus<double>();
};

struct NetworkSpec {
  std::vector<LinkSpec> links;
  std::size_t channels = 0;  // K
  double tau = 1e-9;         // coincidence window, s
  double f_min = 0.0;
  /// Fraction of the total flux carried by each channel; empty means the
  /// uniform split mu_k = mu_tot / K.
  std::vector<double> channel_weights;

  std::size_t link_count() const { return links.size(); }
  bool uniform_flux() const { return channel_weights.empty(); }
};

/// Checks one-to-one topology, parameter ranges and that every link can be
/// entangled at all. Throws std::invalid_argument naming the offending link.
void validate(const NetworkSpec& net);

/// alpha[k] = l assigns channel k to link l (1-based); 0 is the reserve.
struct Allocation {
  std::vector<int> alpha;
  double mu_tot = 0.0;  // biphotons/s

  bool operator==(const Allocation&) const = default;
};

void validate(const Allocation& alloc, const NetworkSpec& net);

/// Channels per link, index 0 holding the reserve count.
std::vector<std::size_t> channel_counts(const Allocation& alloc, std::size_t links);

/// Dimensionless flux tau * mu_bar_l of every link (reserve excluded).
std::vector<double> link_fluxes(const Allocation& alloc, const NetworkSpec& net);

/// Per-link constants the fitness needs: noise pair and unconstrained EBR
/// optimum used for normalization.
struct LinkProfile {
  double y1 = 0.0;
  double y2 = 0.0;
  double x_ebr_max = 0.0;
  double ebr_max = 0.0;
};

std::vector<LinkProfile> link_profiles(const NetworkSpec& net);

struct LinkOutcome {
  std::size_t channels = 0;
  double x = 0.0;
  bool allocated = false;
  bool feasible = true;     // fidelity >= F_min (vacuously true if unallocated)
  double fidelity = 0.0;    // NaN when unallocated
  double ebr_dimensionless = 0.0;
  double ebr_normalized = 0.0;
  double beta = 0.0;
  LinkMetrics metrics;      // dimensioned rates at this flux
};

struct FitnessReport {
  double fitness = 0.0;
  std::vector<LinkOutcome> links;
};

/// Contribution of one link at dimensionless flux x: normalized EBR when the
/// fidelity threshold holds, -1 otherwise, 0 for an unallocated link.
double link_beta(const LinkProfile& link, double x, double f_min);

/// Network plus its cached link profiles.
class FitnessModel {
 public:
  explicit FitnessModel(NetworkSpec net);

  const NetworkSpec& network() const { return net_; }
  std::span<const LinkProfile> profiles() const { return profiles_; }

  /// Fitness only; the hot path for the optimizers.
  double value(const Allocation& alloc) const;
  /// Uniform-flux fitness from channel counts and per-channel flux t.
  double value_from_counts(std::span<const std::size_t> counts, double per_channel_x) const;

  FitnessReport evaluate(const Allocation& alloc) const;

  /// Default upper bound on mu_tot: 4 K max_l phi_l in dimensionless units.
  double default_mu_tot_max() const;

  /// Largest contribution link l can make at any flux meeting F_min:
  /// R(phi_l) / R_max, or -1 when the threshold is out of reach.
  double beta_cap(std::size_t link) const { return caps_[link]; }

 private:
  NetworkSpec net_;
  std::vector<LinkProfile> profiles_;
  std::vector<double> phi_;
  std::vector<double> caps_;
};

struct IdealFitness {
  double value = 0.0;
  std::vector<ConstrainedFlux> per_link;
};

/// Best fitness with unlimited channels and flux: every link sits at its
/// constrained optimum. Throws InfeasibleLink naming the first link whose
/// maximum fidelity is below F_min.
IdealFitness ideal_fitness(const NetworkSpec& net);

}  // namespace efa
