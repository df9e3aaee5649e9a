// Scenario definitions, the built-in presets and the multi-K driver.
//
// Scenario files are line oriented:
//
//   # comment
//   name = scenario2
//   tau = 1e-09
//   f_min = 0.7
//   k_list = 5, 10, 20, 40
//
//   [ga]
//   population_size = 200
//   seed = 1
//
//   [link AB]          # noise parameters given directly
//   y1 = 0
//   y2 = 0
//
//   [link AliceBob]    # or per-user efficiency and dark-count rate
//   user_a = Alice
//   eta_a = 0.012
//   dark_a = 100
//   user_b = Bob
//   eta_b = 2.1e-4
//   dark_b = 3500

#pragma once

#include "efa/genetic.hpp"
#include "efa/network.hpp"

#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace efa {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NoisePair {
  double y1 = 0.0;
  double y2 = 0.0;
  bool operator==(const NoisePair&) const = default;
};

struct EndpointPair {
  UserEndpoint a;
  UserEndpoint b;
  bool operator==(const EndpointPair&) const = default;
};

struct ScenarioLink {
  std::string name;
  std::variant<NoisePair, EndpointPair> source;
  bool operator==(const ScenarioLink&) const = default;
};

struct ScenarioSpec {
  std::string name;
  double tau = 1e-9;
  double f_min = 0.0;
  std::vector<std::size_t> k_list;
  std::vector<ScenarioLink> links;
  GAConfig ga;

  bool operator==(const ScenarioSpec&) const = default;
};

/// Throws ScenarioError; infeasible links are reported by name.
void validate(const ScenarioSpec& spec);

/// Noise pair of a scenario link at the scenario's coincidence window.
NoisePair noise_pair(const ScenarioLink& link, double tau);

/// Network with K channels. Links given as noise pairs get unit-efficiency
/// users whose dark rate reproduces y at the scenario's tau.
NetworkSpec build_network(const ScenarioSpec& spec, std::size_t channels);

std::vector<std::string> preset_names();
ScenarioSpec preset(std::string_view name);

ScenarioSpec parse_scenario(std::istream& in, const std::string& source = "<input>");
/// A preset name or a path to a scenario file.
ScenarioSpec load_scenario(const std::string& path_or_preset);
std::string format_scenario(const ScenarioSpec& spec);

struct KResult {
  std::size_t channels = 0;
  MultiRunResult runs;
  std::vector<std::size_t> counts;  // champion channels per link, [0] = reserve
  double deviation_pct = 0.0;       // 100 (f_inf - f) / f_inf

  const GAResult& champion() const { return runs.best(); }
  double fitness() const { return champion().report.fitness; }
};

struct ScenarioResult {
  ScenarioSpec spec;
  IdealFitness ideal;
  std::vector<KResult> per_k;
};

using ProgressFn = std::function<void(std::size_t channels, const KResult&)>;

ScenarioResult run_scenario(const ScenarioSpec& spec, const ProgressFn& progress = {});

}  // namespace efa
