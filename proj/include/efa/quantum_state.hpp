// Two-qubit polarization states: Werner mixtures, the multi-channel link
// state, fidelity and logarithmic negativity.
//
// Basis ordering is |HH>, |HV>, |VH>, |VV>. The partial transpose acts on
// the first tensor factor.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>

namespace efa {

template <typename Scalar>
using Matrix4c = Eigen::Matrix<std::complex<Scalar>, 4, 4>;
template <typename Scalar>
using Vector4c = Eigen::Matrix<std::complex<Scalar>, 4, 1>;

/// Density matrix of a two-qubit state (Hermitian, unit trace, PSD).
template <typename Scalar = double>
using DensityMatrix4 = Matrix4c<Scalar>;
/// Normalized two-qubit state vector.
template <typename Scalar = double>
using PureState4 = Vector4c<Scalar>;
template <typename Scalar = double>
using Unitary4 = Matrix4c<Scalar>;

/// One frequency-channel pair feeding a link: the emitted two-photon state,
/// the propagation unitary it experiences, and its biphoton flux (1/s).
template <typename Scalar = double>
struct ChannelState {
  PureState4<Scalar> state;
  Unitary4<Scalar> unitary = Unitary4<Scalar>::Identity();
  Scalar flux = 0;
};

template <typename Scalar = double>
PureState4<Scalar> bell_psi_minus() {
  const Scalar h = Scalar(1) / std::sqrt(Scalar(2));
  PureState4<Scalar> psi;
  psi << Scalar(0), h, -h, Scalar(0);
  return psi;
}

template <typename Derived>
auto projector(const Eigen::MatrixBase<Derived>& psi) {
  using Scalar = typename Derived::RealScalar;
  DensityMatrix4<Scalar> out = psi * psi.adjoint();
  return out;
}

template <typename Scalar = double>
DensityMatrix4<Scalar> maximally_mixed() {
  return DensityMatrix4<Scalar>::Identity() / Scalar(4);
}

template <typename Derived>
bool is_pure_state(const Eigen::MatrixBase<Derived>& psi, double tol = 1e-12) {
  return std::abs(psi.squaredNorm() - 1.0) <= tol;
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& u, double tol = 1e-12) {
  using Scalar = typename Derived::RealScalar;
  const Matrix4c<Scalar> diff = u * u.adjoint() - Matrix4c<Scalar>::Identity();
  return diff.cwiseAbs().maxCoeff() <= tol;
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double tol = 1e-12) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

/// Hermitian, unit trace and no eigenvalue below -psd_tol.
template <typename Derived>
bool is_density_matrix(const Eigen::MatrixBase<Derived>& m, double tol = 1e-12,
                       double psd_tol = 1e-10) {
  using Scalar = typename Derived::RealScalar;
  if (!is_hermitian(m, tol)) return false;
  if (std::abs(m.trace() - std::complex<Scalar>(1)) > tol) return false;
  const Matrix4c<Scalar> herm = (m + m.adjoint()) / Scalar(2);
  Eigen::SelfAdjointEigenSolver<Matrix4c<Scalar>> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -psd_tol;
}

/// lambda |psi><psi| + (1 - lambda) I/4.
template <typename Scalar, typename Derived>
DensityMatrix4<Scalar> werner_state(Scalar lambda, const Eigen::MatrixBase<Derived>& target) {
  if (!(lambda >= Scalar(0) && lambda <= Scalar(1)))
    throw std::invalid_argument("werner_state: visibility must lie in [0, 1]");
  return lambda * projector(target) + (Scalar(1) - lambda) * maximally_mixed<Scalar>();
}

/// General link state: the flux-weighted mixture of the rotated channel
/// states, diluted by uniform background with visibility lambda.
template <typename Scalar>
DensityMatrix4<Scalar> link_state_general(std::span<const ChannelState<Scalar>> channels,
                                          Scalar lambda) {
  if (channels.empty())
    throw std::invalid_argument("link_state_general: no channels");
  if (!(lambda >= Scalar(0) && lambda <= Scalar(1)))
    throw std::invalid_argument("link_state_general: visibility must lie in [0, 1]");

  Scalar total = 0;
  for (const auto& ch : channels) {
    if (!(ch.flux >= Scalar(0)) || !std::isfinite(ch.flux))
      throw std::invalid_argument("link_state_general: channel flux must be finite and >= 0");
    total += ch.flux;
  }
  if (total <= Scalar(0))
    throw std::invalid_argument("link_state_general: total channel flux is zero");

  DensityMatrix4<Scalar> signal = DensityMatrix4<Scalar>::Zero();
  for (const auto& ch : channels) {
    if (ch.flux == Scalar(0)) continue;
    signal += (ch.flux / total) * (ch.unitary * projector(ch.state) * ch.unitary.adjoint());
  }
  return lambda * signal + (Scalar(1) - lambda) * maximally_mixed<Scalar>();
}

/// <psi| sigma |psi>, clamped to [0, 1].
template <typename DerivedM, typename DerivedV>
typename DerivedM::RealScalar fidelity(const Eigen::MatrixBase<DerivedM>& state,
                                       const Eigen::MatrixBase<DerivedV>& target) {
  using Scalar = typename DerivedM::RealScalar;
  const Scalar f = (target.adjoint() * state * target)(0, 0).real();
  return std::clamp(f, Scalar(0), Scalar(1));
}

/// Transpose of the first-qubit indices: element (a b, a' b') moves to
/// (a' b, a b') with row/column index 2a + b.
template <typename Derived>
auto partial_transpose(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::RealScalar;
  Matrix4c<Scalar> out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int ap = 0; ap < 2; ++ap)
        for (int bp = 0; bp < 2; ++bp)
          out(2 * ap + b, 2 * a + bp) = m(2 * a + b, 2 * ap + bp);
  return out;
}

/// log2 of the trace norm of the partial transpose, never negative.
template <typename Derived>
typename Derived::RealScalar log_negativity(const Eigen::MatrixBase<Derived>& state) {
  using Scalar = typename Derived::RealScalar;
  const Matrix4c<Scalar> pt = partial_transpose(state);
  const Matrix4c<Scalar> herm = (pt + pt.adjoint()) / Scalar(2);
  Eigen::SelfAdjointEigenSolver<Matrix4c<Scalar>> es(herm, Eigen::EigenvaluesOnly);
  Scalar norm = 0;
  for (int i = 0; i < 4; ++i) {
    const Scalar ev = es.eigenvalues()(i);
    if (ev > Scalar(-1e-10) && ev < Scalar(0)) continue;
    norm += std::abs(ev);
  }
  return std::max(Scalar(0), std::log2(norm));
}

}  // namespace efa
