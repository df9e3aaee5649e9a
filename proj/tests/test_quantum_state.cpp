#include "efa/quantum_state.hpp"

#include <doctest.h>

#include <random>
#include <vector>

using namespace efa;
using C = std::complex<double>;

namespace {

// independent trace norm via singular values
double trace_norm_svd(const Matrix4c<double>& m) {
  Eigen::JacobiSVD<Matrix4c<double>> svd(m);
  return svd.singularValues().sum();
}

PureState4<double> basis(int i) {
  PureState4<double> v = PureState4<double>::Zero();
  v(i) = 1.0;
  return v;
}

Unitary4<double> random_unitary(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Matrix4c<double> g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = C(n(rng), n(rng));
  Eigen::HouseholderQR<Matrix4c<double>> qr(g);
  return qr.householderQ();
}

}  // namespace

TEST_CASE("singlet amplitudes") {
  const auto psi = bell_psi_minus();
  const double h = 1.0 / std::sqrt(2.0);
  CHECK(psi(0) == C(0));
  CHECK(psi(1).real() == doctest::Approx(h).epsilon(1e-15));
  CHECK(psi(2).real() == doctest::Approx(-h).epsilon(1e-15));
  CHECK(psi(3) == C(0));
  CHECK(is_pure_state(psi));
}

TEST_CASE("fidelity of reference states") {
  const auto psi = bell_psi_minus();
  CHECK(fidelity(projector(psi), psi) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(fidelity(maximally_mixed(), psi) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(fidelity(werner_state(0.6, psi), psi) == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(fidelity(werner_state(1.0 / 3.0, psi), psi) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("werner state endpoints and errors") {
  const auto psi = bell_psi_minus();
  CHECK((werner_state(0.0, psi) - maximally_mixed()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((werner_state(1.0, psi) - projector(psi)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(werner_state(-0.01, psi), std::invalid_argument);
  CHECK_THROWS_AS(werner_state(1.01, psi), std::invalid_argument);
  CHECK_THROWS_AS(werner_state(std::nan(""), psi), std::invalid_argument);
  for (double lam : {0.0, 0.2, 0.5, 0.9, 1.0}) CHECK(is_density_matrix(werner_state(lam, psi)));
}

TEST_CASE("general link state") {
  const auto psi = bell_psi_minus();

  SUBCASE("single channel reduces to werner") {
    std::vector<ChannelState<double>> ch{{psi, Unitary4<double>::Identity(), 3e6}};
    const auto rho = link_state_general<double>(ch, 0.8);
    CHECK((rho - werner_state(0.8, psi)).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("identical channels are a no-op") {
    std::vector<ChannelState<double>> ch{{psi, Unitary4<double>::Identity(), 1.0},
                                         {psi, Unitary4<double>::Identity(), 1.0}};
    const auto rho = link_state_general<double>(ch, 0.4);
    CHECK((rho - werner_state(0.4, psi)).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("flux weights") {
    const auto a = basis(1), b = basis(2);
    std::vector<ChannelState<double>> ch{{a, Unitary4<double>::Identity(), 1.0},
                                         {b, Unitary4<double>::Identity(), 3.0}};
    const auto rho = link_state_general<double>(ch, 1.0);
    const Matrix4c<double> expect = 0.25 * projector(a) + 0.75 * projector(b);
    CHECK((rho - expect).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("rotated channels stay valid states") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<ChannelState<double>> ch;
      for (int k = 0; k < 3; ++k) ch.push_back({psi, random_unitary(rng), u(rng) + 0.01});
      CHECK(is_unitary(ch[0].unitary, 1e-12));
      CHECK(is_density_matrix(link_state_general<double>(ch, u(rng))));
    }
  }
  SUBCASE("errors") {
    std::vector<ChannelState<double>> none;
    CHECK_THROWS_AS(link_state_general<double>(none, 0.5), std::invalid_argument);
    std::vector<ChannelState<double>> dark{{psi, Unitary4<double>::Identity(), 0.0}};
    CHECK_THROWS_AS(link_state_general<double>(dark, 0.5), std::invalid_argument);
    std::vector<ChannelState<double>> neg{{psi, Unitary4<double>::Identity(), -1.0}};
    CHECK_THROWS_AS(link_state_general<double>(neg, 0.5), std::invalid_argument);
    std::vector<ChannelState<double>> ok{{psi, Unitary4<double>::Identity(), 1.0}};
    CHECK_THROWS_AS(link_state_general<double>(ok, 1.5), std::invalid_argument);
  }
}

TEST_CASE("partial transpose") {
  const auto psi = bell_psi_minus();
  const auto pt = partial_transpose(projector(psi));
  CHECK(is_hermitian(pt));
  Eigen::SelfAdjointEigenSolver<Matrix4c<double>> es(pt);
  const auto ev = es.eigenvalues();
  CHECK(ev(0) == doctest::Approx(-0.5).epsilon(1e-14));
  for (int i = 1; i < 4; ++i) CHECK(ev(i) == doctest::Approx(0.5).epsilon(1e-14));

  CHECK((partial_transpose(maximally_mixed()) - maximally_mixed()).cwiseAbs().maxCoeff() == 0.0);

  // explicit element moves: |HH><VV| goes to |VH><HV|
  Matrix4c<double> m = Matrix4c<double>::Zero();
  m(0, 3) = 1.0;
  const auto t = partial_transpose(m);
  CHECK(t(2, 1) == C(1.0));
  CHECK(t.cwiseAbs().sum() == 1.0);

  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 50; ++trial) {
    Matrix4c<double> r;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) r(i, j) = C(n(rng), n(rng));
    CHECK((partial_transpose(partial_transpose(r)) - r).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("log negativity") {
  const auto psi = bell_psi_minus();
  CHECK(log_negativity(projector(psi)) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(log_negativity(maximally_mixed()) == 0.0);
  CHECK(log_negativity(projector(basis(0))) == 0.0);
  // separable below F = 1/2
  for (double lam : {0.0, 0.1, 0.2, 0.3, 1.0 / 3.0}) CHECK(log_negativity(werner_state(lam, psi)) == 0.0);
  // trace norm via singular values as an independent path
  for (double lam : {0.4, 0.6, 0.85, 1.0}) {
    const auto rho = werner_state(lam, psi);
    CHECK(log_negativity(rho) ==
          doctest::Approx(std::log2(trace_norm_svd(partial_transpose(rho)))).epsilon(1e-12));
  }
}

TEST_CASE("fidelity is linear in the state") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto psi = bell_psi_minus();
  for (int trial = 0; trial < 500; ++trial) {
    const auto s1 = werner_state(u(rng), psi);
    const auto s2 = projector(basis(static_cast<int>(rng() % 4)));
    const double a = u(rng);
    const Matrix4c<double> mix = a * s1 + (1.0 - a) * s2;
    CHECK(std::abs(fidelity(mix, psi) - (a * fidelity(s1, psi) + (1 - a) * fidelity(s2, psi))) <
          1e-12);
  }
}

TEST_CASE("single precision instantiation") {
  const auto psi = bell_psi_minus<float>();
  const auto rho = werner_state(0.6f, psi);
  CHECK(fidelity(rho, psi) == doctest::Approx(0.7f).epsilon(1e-6));
  CHECK(log_negativity(rho) == doctest::Approx(std::log2(1.4f)).epsilon(1e-5));
}
