#include "property_checks.hpp"

#include "efa/network.hpp"

#include <doctest.h>

using namespace efa;

namespace {

void require(const props::Outcome& o) {
  INFO("first failure: " << o.first_failure << "  (worst " << o.worst << ")");
  CHECK(o.cases > 0);
  CHECK(o.failures == 0);
}

// two-stage grid maximum of F on [0, hi]
double fidelity_grid_max(double y1, double y2, double hi) {
  constexpr int n = 2000;
  double best_x = 0.0, best = fidelity_dimensionless(0.0, y1, y2);
  for (int i = 1; i <= n; ++i) {
    const double x = hi * i / n;
    const double f = fidelity_dimensionless(x, y1, y2);
    if (f > best) best = f, best_x = x;
  }
  const double lo = std::max(0.0, best_x - hi / n), step = 2.0 * hi / n / n;
  for (int i = 0; i <= n; ++i) best = std::max(best, fidelity_dimensionless(lo + step * i, y1, y2));
  return best;
}

}  // namespace

TEST_CASE("dimensioned and dimensionless agree") { require(props::dimensional_consistency(10000, 1)); }
TEST_CASE("user swap symmetry") { require(props::swap_symmetry(10000, 2)); }
TEST_CASE("single-link accidental polynomial") { require(props::singleton_accidentals(10000, 3)); }
TEST_CASE("Werner log negativity") { require(props::werner_log_negativity(10000, 4)); }
TEST_CASE("brute-force optimum grows with channels") { require(props::resource_monotonicity(2000, 5)); }
TEST_CASE("elitist trace never decreases") { require(props::elitism_trace(1000, 6)); }

TEST_CASE("closed-form fidelity maximum against a grid") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 0.5);
  int entangled = 0;
  for (int i = 0; i < 10000; ++i) {
    const double y1 = u(rng), y2 = u(rng);
    const auto best = fidelity_max(y1, y2);
    const double grid = fidelity_grid_max(y1, y2, std::max(4.0 * best.x, 0.5));
    REQUIRE(std::abs(best.fidelity - grid) < 1e-6);
    REQUIRE(best.fidelity >= grid - 1e-15);
    if (!entanglement_possible(y1, y2)) continue;
    ++entangled;
    const auto e = ebr_max(y1, y2);
    const auto roots = ebr_roots(y1, y2);
    REQUIRE(e.x);
    CHECK(fidelity_dimensionless(*e.x, y1, y2) > 0.5);
    CHECK(*e.x > roots[0]);
    CHECK(*e.x < roots[1]);
  }
  CHECK(entangled > 1000);
}

TEST_CASE("EBR optimum shrinks as noise grows") {
  for (double y1 : {0.0, 0.01, 0.05, 0.1, 0.2}) {
    double prev_r = 1e300, prev_x = 1e300;
    for (int j = 0; j < 60; ++j) {
      const double y2 = 0.002 * j;
      if (!entanglement_possible(y1, y2)) break;
      const auto e = ebr_max(y1, y2);
      CAPTURE(y1);
      CAPTURE(y2);
      CHECK(e.ebr < prev_r);
      CHECK(*e.x < prev_x);
      prev_r = e.ebr;
      prev_x = *e.x;
    }
  }
  // along the diagonal ray
  double prev = 1e300;
  for (double y = 0.0; y < 0.25; y += 0.005) {
    const auto e = ebr_max(y, y);
    CHECK(e.ebr < prev);
    prev = e.ebr;
  }
}

TEST_CASE("fidelity tails and noise floor") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(1e-4, 0.4);
  for (int i = 0; i < 500; ++i) {
    const double y1 = u(rng), y2 = u(rng);
    const double xf = fidelity_max(y1, y2).x;
    double prev = fidelity_dimensionless(0.0, y1, y2);
    for (int s = 1; s <= 50; ++s) {
      const double f = fidelity_dimensionless(xf * s / 50, y1, y2);
      CHECK(f >= prev - 1e-15);
      prev = f;
    }
    for (int s = 1; s <= 50; ++s) {
      const double f = fidelity_dimensionless(xf + 0.2 * s, y1, y2);
      CHECK(f <= prev + 1e-15);
      prev = f;
    }
    CHECK(std::abs(fidelity_dimensionless(1e6, y1, y2) - 0.25) < 1e-4);
  }
}

TEST_CASE("constrained flux is the best feasible flux") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int tried = 0;
  while (tried < 300) {
    const auto [y1, y2] = props::entangleable_pair(rng);
    const double fmax = fidelity_max(y1, y2).fidelity;
    const double f_min = u(rng) * fmax;
    const auto c = constrained_optimal_flux(y1, y2, f_min);
    ++tried;
    CHECK(fidelity_dimensionless(c.x, y1, y2) >= f_min - 1e-12);
    const double hi = ebr_roots(y1, y2)[1] * 1.2;
    for (int s = 0; s < 1000; ++s) {
      const double x = u(rng) * hi;
      if (fidelity_dimensionless(x, y1, y2) < f_min) continue;
      CHECK(c.ebr >= ebr_dimensionless(x, y1, y2) - 1e-12);
    }
  }
}

TEST_CASE("fitness bounds over random allocations") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int net_i = 0; net_i < 40; ++net_i) {
    std::vector<std::pair<double, double>> ys;
    double min_fmax = 1.0;
    const int links = 1 + static_cast<int>(rng() % 5);
    for (int l = 0; l < links; ++l) {
      ys.push_back(props::entangleable_pair(rng));
      min_fmax = std::min(min_fmax, fidelity_max(ys.back().first, ys.back().second).fidelity);
    }
    const double f_min = u(rng) * min_fmax;
    const auto net = props::noise_network(ys, 1 + rng() % 12, f_min);
    const FitnessModel model(net);
    const double f_inf = ideal_fitness(net).value;
    std::uniform_int_distribution<int> slot(0, links);
    for (int i = 0; i < 250; ++i) {
      Allocation a{std::vector<int>(net.channels), u(rng) * model.default_mu_tot_max()};
      for (auto& v : a.alpha) v = slot(rng);
      const auto rep = model.evaluate(a);
      CHECK(rep.fitness <= f_inf + 1e-9);
      for (const auto& o : rep.links) {
        CHECK(o.beta <= 1.0);
        if (!o.allocated) CHECK(o.beta == 0.0);
      }
    }
  }
}
