#include "efa/link_analysis.hpp"

#include "efa/golden_section.hpp"
#include "efa/link_model.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace efa {

namespace {

void require_noise(double y1, double y2) {
  if (!(y1 >= 0.0) || !(y2 >= 0.0) || !std::isfinite(y1) || !std::isfinite(y2))
    throw std::invalid_argument("noise parameters must be finite and non-negative");
}

}  // namespace

FidelityOptimum fidelity_max(double y1, double y2) {
  require_noise(y1, y2);
  const double g = std::sqrt(y1 * y2);
  return {2.0 * g, 0.25 * (1.0 + 3.0 / (4.0 * g + 2.0 * (y1 + y2) + 1.0))};
}

double boundary_discriminant(double y1, double y2) {
  const double diff = y1 - y2;
  return diff * diff - 2.0 * (y1 + y2) + 1.0;
}

bool entanglement_possible(double y1, double y2) {
  require_noise(y1, y2);
  return boundary_discriminant(y1, y2) > 0.0 && y1 + y2 < 1.0;
}

double critical_noise(double y1) {
  if (!(y1 >= 0.0 && y1 <= 1.0))
    throw std::invalid_argument("critical_noise: y1 must lie in [0, 1]");
  const double s = 1.0 - std::sqrt(y1);
  return s * s;
}

std::vector<double> ebr_roots(double y1, double y2) {
  require_noise(y1, y2);
  const double disc = boundary_discriminant(y1, y2);
  const double mid = 1.0 - y1 - y2;
  if (disc < 0.0 || mid < 0.0)
    throw NoEntanglement("no entanglement possible for y1=" + std::to_string(y1) +
                         ", y2=" + std::to_string(y2));
  const double hi = mid + std::sqrt(disc);
  // product of the roots is 4 y1 y2
  const double lo = hi > 0.0 ? 4.0 * (y1 * y2) / hi : 0.0;
  return {lo, hi};
}

EbrOptimum ebr_max(double y1, double y2, double xtol) {
  if (!entanglement_possible(y1, y2)) return {};
  const auto roots = ebr_roots(y1, y2);
  const auto [x, r] = golden_section_maximize(
      [&](double v) { return ebr_dimensionless(v, y1, y2); }, roots[0], roots[1], xtol);
  return {x, r};
}

LinkOptima link_optima(double y1, double y2) {
  LinkOptima out;
  out.fidelity = fidelity_max(y1, y2);
  out.ebr = ebr_max(y1, y2);
  if (out.ebr.x) out.roots = ebr_roots(y1, y2);
  return out;
}

FluxInterval fidelity_interval(double y1, double y2, double f_min) {
  require_noise(y1, y2);
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (f_min <= 0.25) return {0.0, inf};
  const auto best = fidelity_max(y1, y2);
  if (best.fidelity < f_min)
    throw InfeasibleLink("maximum fidelity " + std::to_string(best.fidelity) +
                         " is below the threshold " + std::to_string(f_min));
  // F(x) >= f_min  <=>  c x^2 + (c b - 3) x + 4 c y1 y2 <= 0,  c = 4 f_min - 1
  const double c = 4.0 * f_min - 1.0;
  const double b = 2.0 * y1 + 2.0 * y2 + 1.0;
  const double lin = c * b - 3.0;
  const double con = 4.0 * c * (y1 * y2);
  const double disc = std::max(0.0, lin * lin - 4.0 * c * con);
  const double hi = (-lin + std::sqrt(disc)) / (2.0 * c);
  const double lo = hi > 0.0 ? con / (c * hi) : 0.0;
  return {lo, std::max(hi, lo)};
}

ConstrainedFlux constrained_optimal_flux(double y1, double y2, double f_min) {
  if (!(f_min >= 0.0 && f_min <= 1.0))
    throw std::invalid_argument("fidelity threshold must lie in [0, 1]");
  const auto window = fidelity_interval(y1, y2, f_min);
  const auto unconstrained = ebr_max(y1, y2);
  if (!unconstrained.x) {
    const auto best = fidelity_max(y1, y2);
    return {best.x, 0.0, false};
  }
  if (*unconstrained.x <= window.hi) return {*unconstrained.x, unconstrained.ebr, false};
  // the EBR rises up to x_R, so the binding constraint sits at the upper edge
  return {window.hi, ebr_dimensionless(window.hi, y1, y2), true};
}

std::uint64_t count_allocations(std::uint64_t channels, std::uint64_t links, bool uniform_flux) {
  if (channels < 1 || links < 1)
    throw std::invalid_argument("count_allocations: K and L must be at least 1");
  constexpr auto max = std::numeric_limits<std::uint64_t>::max();
  if (!uniform_flux) {
    std::uint64_t result = 1;
    for (std::uint64_t k = 0; k < channels; ++k) {
      if (__builtin_mul_overflow(result, links + 1, &result))
        throw std::overflow_error("allocation count exceeds 64 bits");
    }
    return result;
  }
  // C(K + L, min(K, L)), each partial product is itself a binomial
  const std::uint64_t n = channels + links;
  const std::uint64_t k = std::min(channels, links);
  unsigned __int128 result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
    if (result > max) throw std::overflow_error("allocation count exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(result);
}

}  // namespace efa
