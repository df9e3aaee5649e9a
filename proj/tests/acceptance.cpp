// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include "property_checks.hpp"

#include "efa/brute_force.hpp"
#include "efa/genetic.hpp"
#include "efa/link_analysis.hpp"
#include "efa/scenario.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace efa;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double budget_s;
  std::function<Verdict()> run;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

struct Row {
  const char* scenario;
  const char* link;
  double y1, y2, f_max;
};

// Scenario 3 CD uses y2 = 0.0006; with 0.006 the closed form gives 0.973.
const Row kRows[] = {
    {"1", "AB", 0, 0, 1},          {"1", "CD", 0.04, 0.007, 0.90},  {"1", "EF", 0, 0.125, 0.85},
    {"1", "GH", 0.11, 0.019, 0.77}, {"1", "IJ", 0.15, 0.025, 0.72},
    {"2", "AB", 0, 0, 1},          {"2", "CD", 0.04, 0.007, 0.90},  {"2", "EF", 0, 0.125, 0.85},
    {"2", "GH", 0.11, 0.019, 0.77}, {"2", "IJ", 0.15, 0.025, 0.72},
    {"3", "AB", 0, 0, 1},          {"3", "CD", 0.0034, 0.0006, 0.99},
    {"3", "EF", 0.0104, 0.0018, 0.97}, {"3", "GH", 0.0179, 0.0031, 0.95},
    {"3", "IJ", 0, 0.0515, 0.93},
    {"4", "AB", 0, 0, 1},          {"4", "CD", 0.0034, 0.0006, 0.99}, {"4", "EF", 0, 0.0357, 0.95},
    {"4", "GH", 0.0299, 0.0051, 0.92}, {"4", "IJ", 0.0385, 0.0066, 0.90},
    {"4", "KL", 0.0625, 0.0107, 0.85}, {"4", "MN", 0.0733, 0.0126, 0.83},
    {"4", "OP", 0, 0.1818, 0.80},   {"4", "QR", 0.1106, 0.019, 0.77},
    {"4", "ST", 0.125, 0.0214, 0.75}, {"4", "UV", 0.1489, 0.0256, 0.72},
    {"4", "WX", 0, 0.2979, 0.72},
};

Verdict fidelity_rows() {
  std::size_t bad = 0;
  double worst = 0.0;
  std::string first;
  for (const auto& r : kRows) {
    const double err = std::abs(fidelity_max(r.y1, r.y2).fidelity - r.f_max);
    worst = std::max(worst, err);
    if (err > 0.005 && bad++ == 0) first = std::string(" first miss S") + r.scenario + " " + r.link;
  }
  const std::size_t n = sizeof(kRows) / sizeof(kRows[0]);
  return {bad == 0 && n == 27, std::to_string(n) + " rows, max |err| " + fmt("%.4f", worst) + first};
}

Verdict noiseless_ceiling() {
  const auto e = ebr_max(0.0, 0.0);
  return {e.x && std::abs(e.ebr - 0.6475) <= 0.0005,
          "R_max " + fmt("%.6f", e.ebr) + " at x_R " + fmt("%.4f", e.x.value_or(0.0))};
}

Verdict boundary_threshold() {
  const double y2 = critical_noise(0.8);
  const bool consistent = entanglement_possible(0.8, y2 * 0.999) && !entanglement_possible(0.8, y2 * 1.001);
  return {std::abs(y2 - 0.0111) <= 0.0005 && consistent, "critical y2 " + fmt("%.6f", y2)};
}

Verdict werner_equivalence() {
  const auto o = props::werner_log_negativity(1000, 2024);
  return {o.ok(), std::to_string(o.cases) + " visibilities, max |err| " + fmt("%.2e", o.worst)};
}

Verdict ideal_fitness_table() {
  auto ideal = [](const char* name) {
    const auto s = preset(name);
    return ideal_fitness(build_network(s, s.k_list.front())).value;
  };
  const double f1 = ideal("scenario1"), f2 = ideal("scenario2"), f3 = ideal("scenario3"),
               f4 = ideal("scenario4");
  const bool ok = std::abs(f1 - 5.0) <= 1e-12 && std::abs(f2 - 3.39) <= 0.02 &&
                  std::abs(f3 - 0.91) <= 0.01 && std::abs(f4 - 7.9) <= 0.05;
  return {ok, "f_inf = " + fmt("%.6f", f1) + ", " + fmt("%.4f", f2) + ", " + fmt("%.4f", f3) +
                  ", " + fmt("%.4f", f4)};
}

Verdict ga_vs_oracle() {
  const FitnessModel model(props::noise_network({{0, 0}, {0.04, 0.007}, {0.15, 0.025}}, 6, 0.7));
  const auto bf = brute_force_optimize(model);
  const auto ga = best_of_runs(model, GAConfig{});
  const double f_ga = ga.best().report.fitness, f_bf = bf.report.fitness;
  return {f_ga >= 0.99 * f_bf, "GA " + fmt("%.6f", f_ga) + " vs exhaustive " + fmt("%.6f", f_bf) +
                                   " (" + std::to_string(bf.compositions) + " compositions)"};
}

Verdict scenario1_k5() {
  const auto spec = preset("scenario1");
  const FitnessModel model(build_network(spec, 5));
  const auto runs = best_of_runs(model, spec.ga);
  const auto counts = channel_counts(runs.best().best, 5);
  const bool even = counts == std::vector<std::size_t>{0, 1, 1, 1, 1, 1};
  const double f = runs.best().report.fitness;
  std::string c;
  for (std::size_t l = 1; l < counts.size(); ++l) c += std::to_string(counts[l]) + (l + 1 < counts.size() ? " " : "");
  return {f >= 4.9 && even, "f " + fmt("%.4f", f) + ", channels " + c + ", reserve " + std::to_string(counts[0])};
}

Verdict scenario2_k20() {
  const auto spec = preset("scenario2");
  const auto net = build_network(spec, 20);
  const double f_inf = ideal_fitness(net).value;
  const FitnessModel model(net);
  auto cfg = spec.ga;
  cfg.threads = 5;
  const auto runs = best_of_runs(model, cfg);
  const double f = runs.best().report.fitness;
  const double dev = (f_inf - f) / f_inf;
  return {dev <= 0.10, "f " + fmt("%.4f", f) + " vs f_inf " + fmt("%.4f", f_inf) + ", deviation " +
                           fmt("%.2f", 100 * dev) + "%"};
}

Verdict property_suite() {
  const std::pair<const char*, props::Outcome> parts[] = {
      {"dimensional", props::dimensional_consistency(10000, 11)},
      {"symmetry", props::swap_symmetry(10000, 12)},
      {"monotone-K", props::resource_monotonicity(10000, 13)},
      {"elitism", props::elitism_trace(10000, 14)},
      {"accidentals", props::singleton_accidentals(10000, 15)},
  };
  bool ok = true;
  std::ostringstream s;
  for (const auto& [name, o] : parts) {
    ok = ok && o.ok();
    s << name << " " << o.cases - o.failures << "/" << o.cases;
    if (!o.ok()) s << " [" << o.first_failure << "]";
    s << "; ";
  }
  return {ok, s.str()};
}

Verdict experimental_prediction() {
  const double tau = 1e-9;
  const UserEndpoint a{"A", 1.2e-2, 8.33e-6 * 1.2e-2 / tau};
  const UserEndpoint b{"B", 2.1e-4, 1.67e-2 * 2.1e-4 / tau};
  const auto e = ebr_max(noise_param(a, tau).y, noise_param(b, tau).y);
  if (!e.x) return {false, "link cannot be entangled"};
  const double r = ebr_dimensioned(*e.x / tau, a, b, tau);
  const double scaled = a.eta * b.eta / tau * e.ebr;
  const bool ok = std::abs(r - 1.58e3) <= 0.02 * 1.58e3 && std::abs(r - scaled) <= 1e-9 * scaled;
  return {ok, "R_max " + fmt("%.1f", r) + " ebits/s at mu " + fmt("%.4g", *e.x / tau) + " /s, F " +
                  fmt("%.4f", fidelity_dimensioned(*e.x / tau, a, b, tau))};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "closed-form fidelity bound on reference links", 1, fidelity_rows},
      {2, "noiseless EBR ceiling", 1, noiseless_ceiling},
      {3, "boundary threshold at y1 = 0.8", 1, boundary_threshold},
      {4, "Werner log-negativity equivalence", 5, werner_equivalence},
      {5, "ideal fitness of the four scenarios", 5, ideal_fitness_table},
      {6, "GA best-of-5 vs exhaustive search (L=3, K=6)", 120, ga_vs_oracle},
      {7, "scenario 1, K=5", 300, scenario1_k5},
      {8, "scenario 2, K=20 within 10% of f_inf", 900, scenario2_k20},
      {9, "randomized property suite", 120, property_suite},
      {10, "dimensioned EBR prediction for the lab link", 1, experimental_prediction},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = v.pass && in_time;
    if (!pass) ++failed;
    std::printf("%s  AC%-2d %s: %s [%.2fs of %.0fs%s]\n", pass ? "PASS" : "FAIL", c.id, c.title.c_str(),
                v.detail.c_str(), secs, c.budget_s, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
