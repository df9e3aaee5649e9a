#include "efa/link_model.hpp"

#include <numeric>

namespace efa {

namespace {

void require_tau(double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw std::invalid_argument("coincidence window tau must be positive");
}

void require_flux(double flux) {
  if (!(flux >= 0.0) || !std::isfinite(flux))
    throw std::invalid_argument("flux must be finite and non-negative");
}

double singles_sum(std::span<const double> fluxes) {
  for (double f : fluxes) require_flux(f);
  return std::accumulate(fluxes.begin(), fluxes.end(), 0.0);
}

}  // namespace

void validate(const UserEndpoint& user) {
  if (!(user.eta > 0.0 && user.eta <= 1.0))
    throw std::invalid_argument("user '" + user.label + "': efficiency must lie in (0, 1]");
  if (!(user.dark_rate >= 0.0) || !std::isfinite(user.dark_rate))
    throw std::invalid_argument("user '" + user.label + "': dark rate must be finite and >= 0");
}

double accidental_rate_general(const UserEndpoint& a, const UserEndpoint& b,
                               std::span<const double> fluxes_a,
                               std::span<const double> fluxes_b, double tau) {
  require_tau(tau);
  const double singles_a = a.eta / 2.0 * singles_sum(fluxes_a) + a.dark_rate;
  const double singles_b = b.eta / 2.0 * singles_sum(fluxes_b) + b.dark_rate;
  return 4.0 * tau * singles_a * singles_b;
}

double accidental_rate_single(const UserEndpoint& a, const UserEndpoint& b, double link_flux,
                              double tau) {
  require_tau(tau);
  require_flux(link_flux);
  const double mu = link_flux;
  return 4.0 * tau *
         (a.eta * b.eta / 4.0 * mu * mu + (a.eta / 2.0 * b.dark_rate + b.eta / 2.0 * a.dark_rate) * mu +
          a.dark_rate * b.dark_rate);
}

double correlated_rate(const UserEndpoint& a, const UserEndpoint& b, double link_flux) {
  require_flux(link_flux);
  return a.eta * b.eta * link_flux;
}

double visibility(double accidental, double correlated) {
  if (!(accidental >= 0.0) || !(correlated >= 0.0))
    throw std::invalid_argument("visibility: rates must be non-negative");
  const double total = accidental + correlated;
  if (total == 0.0) throw std::domain_error("visibility: undefined with no coincidences");
  return correlated / total;
}

NoiseParam noise_param(const UserEndpoint& user, double tau) {
  require_tau(tau);
  validate(user);
  return {tau * user.dark_rate / user.eta};
}

double fidelity_dimensioned(double link_flux, const UserEndpoint& a, const UserEndpoint& b,
                            double tau) {
  return link_metrics(link_flux, a, b, tau).fidelity;
}

double ebr_dimensioned(double link_flux, const UserEndpoint& a, const UserEndpoint& b,
                       double tau) {
  return link_metrics(link_flux, a, b, tau).ebr;
}

LinkMetrics link_metrics(double link_flux, const UserEndpoint& a, const UserEndpoint& b,
                         double tau) {
  validate(a);
  validate(b);
  LinkMetrics m;
  m.accidental_rate = accidental_rate_single(a, b, link_flux, tau);
  m.correlated_rate = correlated_rate(a, b, link_flux);
  m.x = tau * link_flux;
  const double total = m.accidental_rate + m.correlated_rate;
  if (total > 0.0) {
    m.visibility = visibility(m.accidental_rate, m.correlated_rate);
    m.fidelity = (1.0 + 3.0 * m.visibility) / 4.0;
  } else {
    // No light and at least one noiseless detector: use the x -> 0+ limit.
    m.fidelity = fidelity_dimensionless(0.0, noise_param(a, tau).y, noise_param(b, tau).y);
    m.visibility = (4.0 * m.fidelity - 1.0) / 3.0;
  }
  m.ebr = m.fidelity > 0.5 ? total * std::log2(2.0 * m.fidelity) : 0.0;
  return m;
}

ValidityCheck check_validity(const UserEndpoint& user, double total_flux_at_user, double tau,
                             double threshold) {
  require_tau(tau);
  require_flux(total_flux_at_user);
  ValidityCheck v;
  v.threshold = threshold;
  v.click_probability = tau * (user.eta / 2.0 * total_flux_at_user + user.dark_rate);
  v.ok = v.click_probability < threshold;
  return v;
}

}  // namespace efa
