// Analytic and numeric extrema of the dimensionless link curves.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace efa {

/// Thrown when a link cannot reach a requested fidelity threshold.
class InfeasibleLink : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NoEntanglement : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct FidelityOptimum {
  double x = 0.0;
  double fidelity = 0.0;
};

struct EbrOptimum {
  std::optional<double> x;  // empty when the link can never be entangled
  double ebr = 0.0;
};

struct LinkOptima {
  FidelityOptimum fidelity;
  EbrOptimum ebr;
  std::vector<double> roots;  // where F = 1/2; empty if not entangleable
};

struct ConstrainedFlux {
  double x = 0.0;
  double ebr = 0.0;
  bool at_fidelity_limit = false;  // true when F(x) == F_min binds
};

/// Closed interval of x with F(x) >= f_min; hi may be +inf.
struct FluxInterval {
  double lo = 0.0;
  double hi = 0.0;
};

FidelityOptimum fidelity_max(double y1, double y2);

/// (y1 - y2)^2 - 2 (y1 + y2) + 1.
double boundary_discriminant(double y1, double y2);

/// Strict boundary inequality together with non-negative roots. For
/// y1, y2 >= 0 this is equivalent to sqrt(y1) + sqrt(y2) < 1.
bool entanglement_possible(double y1, double y2);

/// Largest y2 that still admits entanglement for a given y1 <= 1:
/// the lower root (1 - sqrt(y1))^2 of the boundary quadratic.
double critical_noise(double y1);

/// The two x where F = 1/2, ascending. Throws NoEntanglement otherwise.
std::vector<double> ebr_roots(double y1, double y2);

/// Golden-section maximization of the EBR between its roots.
EbrOptimum ebr_max(double y1, double y2, double xtol = 1e-9);

LinkOptima link_optima(double y1, double y2);

/// Feasible fidelity region; throws InfeasibleLink when F_max < f_min.
FluxInterval fidelity_interval(double y1, double y2, double f_min);

/// Flux that maximizes the EBR subject to F >= f_min.
ConstrainedFlux constrained_optimal_flux(double y1, double y2, double f_min);

/// (L+1)^K distinct allocations, or C(K+L, L) when only channel counts
/// matter. Throws std::overflow_error past 64 bits.
std::uint64_t count_allocations(std::uint64_t channels, std::uint64_t links, bool uniform_flux);

}  // namespace efa
