// Coincidence-rate model of a single entanglement link and the fidelity/EBR
// curves it implies, in dimensioned (rates in 1/s) and dimensionless form.
//
// Dimensionless flux x = tau * mu (mean pairs per coincidence window);
// noise parameter y = tau * d / eta.

#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>

namespace efa {

/// One network user: system detection efficiency and dark-count rate (1/s).
struct UserEndpoint {
  std::string label;
  double eta = 1.0;
  double dark_rate = 0.0;

  bool operator==(const UserEndpoint&) const = default;
};

void validate(const UserEndpoint& user);

struct NoiseParam {
  double y = 0.0;
};

/// Rates and state-quality figures of one link at a given flux.
struct LinkMetrics {
  double accidental_rate = 0.0;  // A, 1/s
  double correlated_rate = 0.0;  // C, 1/s
  double visibility = 0.0;       // lambda
  double x = 0.0;                // dimensionless flux
  double fidelity = 0.0;
  double ebr = 0.0;              // ebits/s
};

// ---------------------------------------------------------------------------
// Dimensionless curves.

/// x^2 + (2 y1 + 2 y2 + 1) x + 4 y1 y2, i.e. tau (A + C) / (eta1 eta2).
template <typename Scalar>
Scalar coincidence_polynomial(Scalar x, Scalar y1, Scalar y2) {
  return x * x + (Scalar(2) * y1 + Scalar(2) * y2 + Scalar(1)) * x +
         Scalar(4) * (y1 * y2);
}

/// Fidelity with respect to the target Bell state. The x = 0 point with
/// y1 y2 = 0 is the x -> 0+ limit.
template <typename Scalar>
Scalar fidelity_dimensionless(Scalar x, Scalar y1, Scalar y2) {
  if (y1 * y2 == Scalar(0)) {
    // 3x / Q reduces to 3 / (x + 2 y1 + 2 y2 + 1)
    return Scalar(0.25) *
           (Scalar(1) + Scalar(3) / (x + Scalar(2) * y1 + Scalar(2) * y2 + Scalar(1)));
  }
  return Scalar(0.25) * (Scalar(1) + Scalar(3) * x / coincidence_polynomial(x, y1, y2));
}

/// Unclamped Q(x) log2(2 F(x)); negative wherever F < 1/2.
template <typename Scalar>
Scalar ebr_dimensionless_signed(Scalar x, Scalar y1, Scalar y2) {
  const Scalar q = coincidence_polynomial(x, y1, y2);
  if (q == Scalar(0)) return Scalar(0);
  return q * std::log2(Scalar(2) * fidelity_dimensionless(x, y1, y2));
}

/// Dimensionless entangled bit rate tau R / (eta1 eta2), zero when F <= 1/2.
template <typename Scalar>
Scalar ebr_dimensionless(Scalar x, Scalar y1, Scalar y2) {
  if (fidelity_dimensionless(x, y1, y2) <= Scalar(0.5)) return Scalar(0);
  return ebr_dimensionless_signed(x, y1, y2);
}

// ---------------------------------------------------------------------------
// Dimensioned rates.

/// Accidental coincidences summed over the four detector pairings. The flux
/// lists hold the link fluxes of every link touching each user.
double accidental_rate_general(const UserEndpoint& a, const UserEndpoint& b,
                               std::span<const double> fluxes_a,
                               std::span<const double> fluxes_b, double tau);

/// Single-link polynomial form of the accidental rate.
double accidental_rate_single(const UserEndpoint& a, const UserEndpoint& b, double link_flux,
                              double tau);

double correlated_rate(const UserEndpoint& a, const UserEndpoint& b, double link_flux);

/// C / (A + C). Throws std::domain_error when A + C == 0.
double visibility(double accidental, double correlated);

NoiseParam noise_param(const UserEndpoint& user, double tau);

double fidelity_dimensioned(double link_flux, const UserEndpoint& a, const UserEndpoint& b,
                            double tau);
double ebr_dimensioned(double link_flux, const UserEndpoint& a, const UserEndpoint& b,
                       double tau);

LinkMetrics link_metrics(double link_flux, const UserEndpoint& a, const UserEndpoint& b,
                         double tau);

struct ValidityCheck {
  double click_probability = 0.0;
  double threshold = 0.1;
  bool ok = true;
};

/// Single-detector click probability per coincidence window; the
/// product-of-singles accidental formula needs it well below one.
ValidityCheck check_validity(const UserEndpoint& user, double total_flux_at_user, double tau,
                             double threshold = 0.1);

}  // namespace efa
