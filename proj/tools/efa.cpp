// Command-line front end: link analysis, curve emission, scenario
// optimization, brute-force comparison and allocation counting.

#include "efa/brute_force.hpp"
#include "efa/genetic.hpp"
#include "efa/link_analysis.hpp"
#include "efa/report.hpp"
#include "efa/scenario.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

struct CommonOptions {
  std::string scenario = "scenario1";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> runs;
  std::string out = ".";
  std::size_t threads = 1;
  std::string format = "both";
  std::vector<std::size_t> k_list;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--scenario", o.scenario, "Scenario file or preset (scenario1..scenario4)");
  cmd->add_option("--seed", o.seed, "Master random seed");
  cmd->add_option("--runs", o.runs, "Independent GA runs per channel count");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--threads", o.threads, "Worker threads for independent runs");
  cmd->add_option("--format", o.format, "Output format: csv, text or both")
      ->check(CLI::IsMember({"csv", "text", "both"}));
  cmd->add_option("--k", o.k_list, "Override the list of channel counts");
}

efa::ScenarioSpec resolve(const CommonOptions& o) {
  auto spec = efa::load_scenario(o.scenario);
  if (o.seed) spec.ga.seed = *o.seed;
  if (o.runs) spec.ga.independent_runs = *o.runs;
  spec.ga.threads = o.threads;
  if (!o.k_list.empty()) spec.k_list = o.k_list;
  efa::validate(spec);
  return spec;
}

std::string g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

int cmd_analyze(const CommonOptions& o) {
  const auto spec = resolve(o);
  const auto fmt = efa::parse_report_format(o.format);
  std::ostringstream csv;
  csv << "link,y1,y2,entangleable,x_F,F_max,root_lo,root_hi,x_R,R_max,phi,R_phi_normalized,"
         "feasible\n";
  std::ostringstream text;
  text << "Scenario " << spec.name << " (F_min = " << spec.f_min << ")\n";
  for (const auto& link : spec.links) {
    const auto y = efa::noise_pair(link, spec.tau);
    const auto opt = efa::link_optima(y.y1, y.y2);
    std::optional<efa::ConstrainedFlux> phi;
    try {
      phi = efa::constrained_optimal_flux(y.y1, y.y2, spec.f_min);
    } catch (const efa::InfeasibleLink&) {
    }
    const bool ent = opt.ebr.x.has_value();
    const double norm = phi && opt.ebr.ebr > 0 ? phi->ebr / opt.ebr.ebr : 0.0;
    char buf[512];
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%d,%.17g,%.17g,", y.y1, y.y2, ent ? 1 : 0,
                  opt.fidelity.x, opt.fidelity.fidelity);
    csv << link.name << ',' << buf;
    if (ent) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,", opt.roots[0], opt.roots[1],
                    *opt.ebr.x, opt.ebr.ebr);
      csv << buf;
    } else {
      csv << ",,,0,";
    }
    if (phi) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,1\n", phi->x, norm);
      csv << buf;
    } else {
      csv << ",,0\n";
    }

    text << "  " << link.name << ": y=(" << g(y.y1) << ", " << g(y.y2) << ")  F_max="
         << g(opt.fidelity.fidelity) << " at x_F=" << g(opt.fidelity.x);
    if (ent) {
      text << "  R_max=" << g(opt.ebr.ebr) << " at x_R=" << g(*opt.ebr.x) << "  roots=["
           << g(opt.roots[0]) << ", " << g(opt.roots[1]) << "]";
    } else {
      text << "  no entanglement possible";
    }
    if (phi)
      text << "  phi=" << g(phi->x) << " (R/R_max=" << g(norm) << ")";
    else
      text << "  infeasible for F_min";
    text << "\n";
  }
  try {
    text << "Ideal fitness f_inf = " << g(efa::ideal_fitness(efa::build_network(spec, spec.k_list.front())).value)
         << "\n";
  } catch (const efa::InfeasibleLink& e) {
    text << "Ideal fitness undefined: " << e.what() << "\n";
  }
  if (fmt != efa::ReportFormat::csv) std::cout << text.str();
  if (fmt != efa::ReportFormat::text) {
    std::filesystem::create_directories(o.out);
    const auto path = std::filesystem::path(o.out) / (spec.name + "_analysis.csv");
    std::ofstream(path) << csv.str();
    std::cout << "wrote " << path.string() << "\n";
  }
  return 0;
}

int cmd_optimize(const CommonOptions& o) {
  const auto spec = resolve(o);
  const auto fmt = efa::parse_report_format(o.format);
  std::cout << "Optimizing " << spec.name << " (" << spec.links.size() << " links, "
            << spec.ga.independent_runs << " runs per K)\n";
  const auto result = efa::run_scenario(spec, [](std::size_t k, const efa::KResult& kr) {
    std::cout << "  K=" << k << "  f=" << g(kr.fitness()) << "  deviation "
              << g(kr.deviation_pct) << "%\n"
              << std::flush;
  });
  for (const auto& path : efa::emit_report(result, o.out, fmt))
    std::cout << "wrote " << path.string() << "\n";
  if (fmt != efa::ReportFormat::csv) std::cout << "\n" << efa::report_text(result);
  return 0;
}

int cmd_oracle(const CommonOptions& o) {
  const auto spec = resolve(o);
  const auto fmt = efa::parse_report_format(o.format);
  std::ostringstream csv;
  csv << "K,compositions,brute_force_f,ga_f,ratio,brute_force_counts,ga_counts\n";
  for (std::size_t k : spec.k_list) {
    const efa::FitnessModel model(efa::build_network(spec, k));
    const auto bf = efa::brute_force_optimize(model);
    const auto ga = efa::best_of_runs(model, spec.ga);
    const double f_ga = ga.best().report.fitness;
    auto join = [](const std::vector<std::size_t>& c) {
      std::string s;
      for (std::size_t i = 1; i < c.size(); ++i) s += (i > 1 ? " " : "") + std::to_string(c[i]);
      return s + " | " + std::to_string(c[0]);
    };
    csv << k << ',' << bf.compositions << ',' << g(bf.report.fitness) << ',' << g(f_ga) << ','
        << g(f_ga / bf.report.fitness) << ',' << join(bf.counts) << ','
        << join(efa::channel_counts(ga.best().best, spec.links.size())) << "\n";
  }
  if (fmt != efa::ReportFormat::csv) std::cout << csv.str();
  if (fmt != efa::ReportFormat::text) {
    std::filesystem::create_directories(o.out);
    const auto path = std::filesystem::path(o.out) / (spec.name + "_oracle.csv");
    std::ofstream(path) << csv.str();
    std::cout << "wrote " << path.string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flex-grid entangled flux allocation"};
  app.require_subcommand(1);

  CommonOptions analyze_opts, optimize_opts, oracle_opts;
  auto* analyze = app.add_subcommand("analyze", "Per-link optima and entanglement boundary");
  add_common(analyze, analyze_opts);
  analyze_opts.format = "text";

  auto* curves = app.add_subcommand("curves", "Emit fidelity and EBR curves as CSV");
  double y1 = 0.0, y2 = 0.0, x_lo = 0.0;
  std::optional<double> x_hi;
  std::size_t samples = 201;
  std::string curves_out;
  curves->add_option("--y1", y1, "Noise parameter of user 1")->required();
  curves->add_option("--y2", y2, "Noise parameter of user 2")->required();
  curves->add_option("--x-min", x_lo, "Lower dimensionless flux");
  curves->add_option("--x-max", x_hi, "Upper dimensionless flux (default: upper EBR root)");
  curves->add_option("--samples", samples, "Number of samples (>= 2)");
  curves->add_option("--out", curves_out, "Output CSV path (default: stdout)");

  auto* optimize = app.add_subcommand("optimize", "Run the GA over a scenario");
  add_common(optimize, optimize_opts);

  auto* oracle = app.add_subcommand("oracle", "Compare the GA with exhaustive search");
  add_common(oracle, oracle_opts);
  oracle_opts.format = "text";

  auto* count = app.add_subcommand("count", "Size of the allocation space");
  std::uint64_t count_k = 1, count_l = 1;
  count->add_option("-K,--channels", count_k, "Channel pairs K")->required();
  count->add_option("-L,--links", count_l, "Links L")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) return cmd_analyze(analyze_opts);
    if (optimize->parsed()) return cmd_optimize(optimize_opts);
    if (oracle->parsed()) return cmd_oracle(oracle_opts);
    if (curves->parsed()) {
      double hi = 2.0;
      if (x_hi) {
        hi = *x_hi;
      } else if (efa::entanglement_possible(y1, y2)) {
        hi = efa::ebr_roots(y1, y2)[1];
      }
      const auto points = efa::curve_points(y1, y2, x_lo, hi, samples);
      if (curves_out.empty()) {
        efa::write_curves_csv(std::cout, points);
      } else {
        std::ofstream out(curves_out, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write '" + curves_out + "'");
        efa::write_curves_csv(out, points);
      }
      return 0;
    }
    if (count->parsed()) {
      std::cout << "K=" << count_k << " L=" << count_l << "\n";
      for (const bool uniform : {false, true}) {
        std::cout << (uniform ? "uniform flux:      " : "distinct channels: ");
        try {
          std::cout << efa::count_allocations(count_k, count_l, uniform) << "\n";
        } catch (const std::overflow_error&) {
          std::cout << "overflow (> 2^64)\n";
        }
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
