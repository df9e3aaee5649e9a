#include "efa/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace efa {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::pair<std::string, std::string> user_labels(const std::string& link) {
  if (link.size() == 2) return {link.substr(0, 1), link.substr(1, 1)};
  return {link + ".a", link + ".b"};
}

struct LinkFields {
  std::string name;
  std::size_t line = 0;
  std::map<std::string, std::string> values;
};

class Parser {
 public:
  explicit Parser(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(std::size_t line, const std::string& what) const {
    throw ScenarioError(source_ + ":" + std::to_string(line) + ": " + what);
  }

  double number(std::size_t line, const std::string& key, const std::string& text) const {
    double v = 0.0;
    const char* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v))
      fail(line, "field '" + key + "': expected a number, got '" + text + "'");
    return v;
  }

  std::uint64_t integer(std::size_t line, const std::string& key, const std::string& text) const {
    std::uint64_t v = 0;
    const char* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end)
      fail(line, "field '" + key + "': expected a non-negative integer, got '" + text + "'");
    return v;
  }

  ScenarioSpec parse(std::istream& in) {
    ScenarioSpec spec;
    enum class Section { top, ga, link } section = Section::top;
    std::vector<LinkFields> links;
    std::map<std::string, std::size_t> seen_top, seen_ga;

    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
      ++line_no;
      const auto hash = raw.find('#');
      const std::string line = trim(std::string_view(raw).substr(0, hash));
      if (line.empty()) continue;

      if (line.front() == '[') {
        if (line.back() != ']') fail(line_no, "unterminated section header");
        const std::string header = trim(std::string_view(line).substr(1, line.size() - 2));
        if (header == "ga") {
          section = Section::ga;
        } else if (header.rfind("link", 0) == 0 && header.size() > 4 &&
                   (header[4] == ' ' || header[4] == '\t')) {
          const std::string name = trim(std::string_view(header).substr(4));
          for (const auto& l : links)
            if (l.name == name) fail(line_no, "duplicate link '" + name + "'");
          links.push_back({name, line_no, {}});
          section = Section::link;
        } else {
          fail(line_no, "unknown section '" + header + "'");
        }
        continue;
      }

      const auto eq = line.find('=');
      if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
      const std::string key = trim(std::string_view(line).substr(0, eq));
      const std::string value = trim(std::string_view(line).substr(eq + 1));
      if (key.empty()) fail(line_no, "missing key");
      if (value.empty()) fail(line_no, "field '" + key + "' has no value");

      switch (section) {
        case Section::top:
          if (!seen_top.emplace(key, line_no).second) fail(line_no, "duplicate field '" + key + "'");
          top_field(spec, line_no, key, value);
          break;
        case Section::ga:
          if (!seen_ga.emplace(key, line_no).second) fail(line_no, "duplicate field '" + key + "'");
          ga_field(spec.ga, line_no, key, value);
          break;
        case Section::link:
          if (!links.back().values.emplace(key, value).second)
            fail(line_no, "duplicate field '" + key + "'");
          break;
      }
    }

    if (!seen_top.count("name")) fail(line_no, "missing field 'name'");
    if (!seen_top.count("k_list")) fail(line_no, "missing field 'k_list'");
    for (const auto& l : links) spec.links.push_back(build_link(l));
    return spec;
  }

 private:
  void top_field(ScenarioSpec& spec, std::size_t line, const std::string& key,
                 const std::string& value) {
    if (key == "name") {
      spec.name = value;
    } else if (key == "tau") {
      spec.tau = number(line, key, value);
    } else if (key == "f_min") {
      spec.f_min = number(line, key, value);
    } else if (key == "k_list") {
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ','))
        spec.k_list.push_back(static_cast<std::size_t>(integer(line, key, trim(item))));
    } else {
      fail(line, "unknown field '" + key + "'");
    }
  }

  void ga_field(GAConfig& ga, std::size_t line, const std::string& key, const std::string& value) {
    auto count = [&] { return static_cast<std::size_t>(integer(line, key, value)); };
    if (key == "population_size") ga.population_size = count();
    else if (key == "crossover_fraction") ga.crossover_fraction = number(line, key, value);
    else if (key == "stall_generations") ga.stall_generations = count();
    else if (key == "elite_count") ga.elite_count = count();
    else if (key == "mutation_rate") ga.mutation_rate = number(line, key, value);
    else if (key == "flux_mutation_sigma") ga.flux_mutation_sigma = number(line, key, value);
    else if (key == "mu_tot_max") ga.mu_tot_max = number(line, key, value);
    else if (key == "seed") ga.seed = integer(line, key, value);
    else if (key == "max_generations") ga.max_generations = count();
    else if (key == "independent_runs") ga.independent_runs = count();
    else fail(line, "unknown GA field '" + key + "'");
  }

  ScenarioLink build_link(const LinkFields& f) const {
    const auto& v = f.values;
    auto get = [&](const char* key) -> std::optional<std::string> {
      const auto it = v.find(key);
      if (it == v.end()) return std::nullopt;
      return it->second;
    };
    for (const auto& [key, _] : v) {
      static const char* known[] = {"y1", "y2", "user_a", "eta_a", "dark_a",
                                    "user_b", "eta_b", "dark_b"};
      if (std::find_if(std::begin(known), std::end(known),
                       [&](const char* k) { return key == k; }) == std::end(known))
        fail(f.line, "link '" + f.name + "': unknown field '" + key + "'");
    }
    const bool noise = v.count("y1") || v.count("y2");
    const bool endpoints = v.count("eta_a") || v.count("eta_b") || v.count("dark_a") ||
                           v.count("dark_b");
    if (noise && endpoints)
      fail(f.line, "link '" + f.name + "': give either y1/y2 or eta/dark pairs, not both");

    ScenarioLink link;
    link.name = f.name;
    if (noise) {
      if (!get("y1") || !get("y2")) fail(f.line, "link '" + f.name + "': needs both y1 and y2");
      if (get("user_a") || get("user_b"))
        fail(f.line, "link '" + f.name + "': user labels only apply to eta/dark links");
      link.source = NoisePair{number(f.line, "y1", *get("y1")), number(f.line, "y2", *get("y2"))};
      return link;
    }
    for (const char* key : {"eta_a", "dark_a", "eta_b", "dark_b"})
      if (!get(key)) fail(f.line, "link '" + f.name + "': missing field '" + key + "'");
    const auto [default_a, default_b] = user_labels(f.name);
    EndpointPair ends;
    ends.a = {get("user_a").value_or(default_a), number(f.line, "eta_a", *get("eta_a")),
              number(f.line, "dark_a", *get("dark_a"))};
    ends.b = {get("user_b").value_or(default_b), number(f.line, "eta_b", *get("eta_b")),
              number(f.line, "dark_b", *get("dark_b"))};
    link.source = ends;
    return link;
  }

  std::string source_;
};

ScenarioSpec make_preset(std::string name, double f_min, std::vector<std::size_t> k_list,
                         std::vector<std::pair<std::string, NoisePair>> rows) {
  ScenarioSpec spec;
  spec.name = std::move(name);
  spec.tau = 1e-9;
  spec.f_min = f_min;
  spec.k_list = std::move(k_list);
  for (auto& [link, pair] : rows) spec.links.push_back({link, pair});
  return spec;
}

}  // namespace

NoisePair noise_pair(const ScenarioLink& link, double tau) {
  if (const auto* p = std::get_if<NoisePair>(&link.source)) return *p;
  const auto& e = std::get<EndpointPair>(link.source);
  return {noise_param(e.a, tau).y, noise_param(e.b, tau).y};
}

void validate(const ScenarioSpec& spec) {
  auto fail = [&](const std::string& what) {
    throw ScenarioError("scenario '" + spec.name + "': " + what);
  };
  if (spec.name.empty()) fail("name must not be empty");
  if (!(spec.tau > 0.0)) fail("tau must be positive");
  if (!(spec.f_min >= 0.0 && spec.f_min <= 1.0)) fail("f_min must lie in [0, 1]");
  if (spec.k_list.empty()) fail("k_list must not be empty");
  for (std::size_t i = 0; i < spec.k_list.size(); ++i) {
    if (spec.k_list[i] < 1) fail("channel counts must be at least 1");
    if (i > 0 && spec.k_list[i] <= spec.k_list[i - 1]) fail("k_list must be strictly ascending");
  }
  if (spec.links.empty()) fail("at least one link is required");
  for (const auto& link : spec.links) {
    if (link.name.empty()) fail("link names must not be empty");
    if (const auto* p = std::get_if<NoisePair>(&link.source)) {
      if (!(p->y1 >= 0.0) || !(p->y2 >= 0.0))
        fail("link '" + link.name + "': noise parameters must be non-negative");
    } else {
      const auto& e = std::get<EndpointPair>(link.source);
      try {
        validate(e.a);
        validate(e.b);
      } catch (const std::invalid_argument& err) {
        fail("link '" + link.name + "': " + err.what());
      }
    }
    const auto y = noise_pair(link, spec.tau);
    if (!entanglement_possible(y.y1, y.y2))
      fail("link '" + link.name + "' cannot be entangled (y1=" + shortest(y.y1) +
           ", y2=" + shortest(y.y2) + ")");
  }
  try {
    validate(spec.ga);
  } catch (const std::invalid_argument& err) {
    fail(std::string("GA settings: ") + err.what());
  }
}

NetworkSpec build_network(const ScenarioSpec& spec, std::size_t channels) {
  NetworkSpec net;
  net.channels = channels;
  net.tau = spec.tau;
  net.f_min = spec.f_min;
  for (const auto& link : spec.links) {
    LinkSpec ls;
    ls.name = link.name;
    if (const auto* p = std::get_if<NoisePair>(&link.source)) {
      const auto [la, lb] = user_labels(link.name);
      ls.user_a = {la, 1.0, p->y1 / spec.tau};
      ls.user_b = {lb, 1.0, p->y2 / spec.tau};
    } else {
      const auto& e = std::get<EndpointPair>(link.source);
      ls.user_a = e.a;
      ls.user_b = e.b;
    }
    net.links.push_back(std::move(ls));
  }
  return net;
}

std::vector<std::string> preset_names() {
  return {"scenario1", "scenario2", "scenario3", "scenario4"};
}

ScenarioSpec preset(std::string_view name) {
  const std::vector<std::pair<std::string, NoisePair>> five_link = {
      {"AB", {0.0, 0.0}},
      {"CD", {0.04, 0.007}},
      {"EF", {0.0, 0.125}},
      {"GH", {0.11, 0.019}},
      {"IJ", {0.15, 0.025}},
  };
  if (name == "scenario1") return make_preset("scenario1", 0.0, {5, 10, 20, 40}, five_link);
  if (name == "scenario2") return make_preset("scenario2", 0.7, {5, 10, 20, 40}, five_link);
  if (name == "scenario3")
    return make_preset("scenario3", 0.9, {5, 10, 20, 40},
                       {
                           {"AB", {0.0, 0.0}},
                           {"CD", {0.0034, 0.0006}},
                           {"EF", {0.0104, 0.0018}},
                           {"GH", {0.0179, 0.0031}},
                           {"IJ", {0.0, 0.0515}},
                       });
  if (name == "scenario4")
    return make_preset("scenario4", 0.7, {12, 24, 48, 96},
                       {
                           {"AB", {0.0, 0.0}},
                           {"CD", {0.0034, 0.0006}},
                           {"EF", {0.0, 0.0357}},
                           {"GH", {0.0299, 0.0051}},
                           {"IJ", {0.0385, 0.0066}},
                           {"KL", {0.0625, 0.0107}},
                           {"MN", {0.0733, 0.0126}},
                           {"OP", {0.0, 0.1818}},
                           {"QR", {0.1106, 0.019}},
                           {"ST", {0.125, 0.0214}},
                           {"UV", {0.1489, 0.0256}},
                           {"WX", {0.0, 0.2979}},
                       });
  throw ScenarioError("unknown preset '" + std::string(name) + "'");
}

ScenarioSpec parse_scenario(std::istream& in, const std::string& source) {
  auto spec = Parser(source).parse(in);
  validate(spec);
  return spec;
}

ScenarioSpec load_scenario(const std::string& path_or_preset) {
  const auto names = preset_names();
  if (std::find(names.begin(), names.end(), path_or_preset) != names.end())
    return preset(path_or_preset);
  std::ifstream in(path_or_preset);
  if (!in) throw ScenarioError("cannot open scenario file '" + path_or_preset + "'");
  return parse_scenario(in, path_or_preset);
}

std::string format_scenario(const ScenarioSpec& spec) {
  std::ostringstream out;
  out << "name = " << spec.name << "\n";
  out << "tau = " << shortest(spec.tau) << "\n";
  out << "f_min = " << shortest(spec.f_min) << "\n";
  out << "k_list = ";
  for (std::size_t i = 0; i < spec.k_list.size(); ++i) out << (i ? ", " : "") << spec.k_list[i];
  out << "\n\n[ga]\n";
  const auto& ga = spec.ga;
  out << "population_size = " << ga.population_size << "\n";
  out << "crossover_fraction = " << shortest(ga.crossover_fraction) << "\n";
  out << "stall_generations = " << ga.stall_generations << "\n";
  out << "elite_count = " << ga.elite_count << "\n";
  if (ga.mutation_rate) out << "mutation_rate = " << shortest(*ga.mutation_rate) << "\n";
  out << "flux_mutation_sigma = " << shortest(ga.flux_mutation_sigma) << "\n";
  if (ga.mu_tot_max) out << "mu_tot_max = " << shortest(*ga.mu_tot_max) << "\n";
  out << "seed = " << ga.seed << "\n";
  out << "max_generations = " << ga.max_generations << "\n";
  out << "independent_runs = " << ga.independent_runs << "\n";
  for (const auto& link : spec.links) {
    out << "\n[link " << link.name << "]\n";
    if (const auto* p = std::get_if<NoisePair>(&link.source)) {
      out << "y1 = " << shortest(p->y1) << "\n";
      out << "y2 = " << shortest(p->y2) << "\n";
    } else {
      const auto& e = std::get<EndpointPair>(link.source);
      out << "user_a = " << e.a.label << "\n";
      out << "eta_a = " << shortest(e.a.eta) << "\n";
      out << "dark_a = " << shortest(e.a.dark_rate) << "\n";
      out << "user_b = " << e.b.label << "\n";
      out << "eta_b = " << shortest(e.b.eta) << "\n";
      out << "dark_b = " << shortest(e.b.dark_rate) << "\n";
    }
  }
  return out.str();
}

ScenarioResult run_scenario(const ScenarioSpec& spec, const ProgressFn& progress) {
  validate(spec);
  ScenarioResult result;
  result.spec = spec;
  result.ideal = ideal_fitness(build_network(spec, spec.k_list.front()));
  for (std::size_t k : spec.k_list) {
    const FitnessModel model(build_network(spec, k));
    KResult kr;
    kr.channels = k;
    kr.runs = best_of_runs(model, spec.ga);
    kr.counts = channel_counts(kr.champion().best, spec.links.size());
    if (result.ideal.value > 0.0)
      kr.deviation_pct = 100.0 * (result.ideal.value - kr.fitness()) / result.ideal.value;
    if (progress) progress(k, kr);
    result.per_k.push_back(std::move(kr));
  }
  return result;
}

}  // namespace efa
