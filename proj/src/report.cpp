#include "efa/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace efa {

namespace {

std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17e", v);
  return buf;
}

std::string full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string file_stem(const ScenarioResult& r) {
  return r.spec.name + "_seed" + std::to_string(r.spec.ga.seed);
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << body;
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace

std::vector<CurvePoint> curve_points(double y1, double y2, double x_lo, double x_hi,
                                     std::size_t samples) {
  if (samples < 2) throw std::invalid_argument("curves need at least 2 samples");
  if (!(x_lo >= 0.0) || !(x_hi >= x_lo)) throw std::invalid_argument("invalid flux range");
  const auto best = ebr_max(y1, y2);
  std::vector<CurvePoint> out;
  out.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const double x =
        i + 1 == samples ? x_hi : x_lo + (x_hi - x_lo) * static_cast<double>(i) /
                                              static_cast<double>(samples - 1);
    CurvePoint p;
    p.x = x;
    p.fidelity = fidelity_dimensionless(x, y1, y2);
    p.ebr = ebr_dimensionless(x, y1, y2);
    p.ebr_normalized = best.ebr > 0.0 ? p.ebr / best.ebr : 0.0;
    out.push_back(p);
  }
  return out;
}

void write_curves_csv(std::ostream& out, const std::vector<CurvePoint>& points) {
  out << "x,fidelity,ebr,ebr_normalized\n";
  for (const auto& p : points)
    out << sci(p.x) << ',' << sci(p.fidelity) << ',' << sci(p.ebr) << ','
        << sci(p.ebr_normalized) << '\n';
}

std::string report_text(const ScenarioResult& result) {
  const auto& spec = result.spec;
  std::ostringstream out;
  out << "Scenario " << spec.name << ": " << spec.links.size() << " links, F_min = "
      << spec.f_min << ", tau = " << spec.tau << " s\n";
  out << "Ideal fitness f_inf = " << fixed(result.ideal.value, 4) << "\n";
  for (std::size_t l = 0; l < spec.links.size(); ++l) {
    const auto y = noise_pair(spec.links[l], spec.tau);
    const auto& c = result.ideal.per_link[l];
    out << "  " << spec.links[l].name << ": y1=" << y.y1 << " y2=" << y.y2
        << "  phi=" << fixed(c.x, 6) << (c.at_fidelity_limit ? " (fidelity bound)" : "")
        << "\n";
  }

  for (const auto& kr : result.per_k) {
    const auto& champ = kr.champion();
    out << "\nK = " << kr.channels << "\n";
    out << "  fitness f = " << fixed(kr.fitness(), 4) << " of f_inf = "
        << fixed(result.ideal.value, 4) << "  (deviation " << fixed(kr.deviation_pct, 2)
        << "%)\n";
    out << "  mu_tot = " << champ.best.mu_tot << " /s, best of " << kr.runs.runs.size()
        << " runs (run " << kr.runs.best_index << ", seed " << champ.seed << ", "
        << champ.generations << " generations)\n";
    out << "  channels:";
    for (std::size_t l = 0; l < spec.links.size(); ++l)
      out << ' ' << spec.links[l].name << '=' << kr.counts[l + 1];
    out << " reserve=" << kr.counts[0] << "\n";

    const auto net = build_network(spec, kr.channels);
    for (std::size_t l = 0; l < spec.links.size(); ++l) {
      const auto& o = champ.report.links[l];
      out << "    " << spec.links[l].name << ": x=" << fixed(o.x, 6);
      if (o.allocated) {
        out << " F=" << fixed(o.fidelity, 4) << " R/Rmax=" << fixed(o.ebr_normalized, 4);
        if (!o.feasible) out << " [below F_min]";
      } else {
        out << " F=undefined R/Rmax=0 [no channels]";
      }
      out << " beta=" << fixed(o.beta, 4) << "\n";
      const double flux = o.x / spec.tau;
      for (const auto* user : {&net.links[l].user_a, &net.links[l].user_b}) {
        const auto v = check_validity(*user, flux, spec.tau);
        if (!v.ok)
          out << "      warning: user " << user->label << " click probability "
              << v.click_probability << " per window exceeds " << v.threshold << "\n";
      }
    }
  }
  return out.str();
}

void write_report_csv(std::ostream& out, const ScenarioResult& result) {
  const auto& spec = result.spec;
  out << "scenario,K,seed,fitness,f_inf,deviation_pct,mu_tot,link,channels,x,fidelity,"
         "ebr_normalized,beta,feasible\n";
  for (const auto& kr : result.per_k) {
    const auto& champ = kr.champion();
    const std::string prefix = spec.name + ',' + std::to_string(kr.channels) + ',' +
                               std::to_string(champ.seed) + ',' + full(kr.fitness()) + ',' +
                               full(result.ideal.value) + ',' + full(kr.deviation_pct) + ',' +
                               full(champ.best.mu_tot) + ',';
    for (std::size_t l = 0; l < spec.links.size(); ++l) {
      const auto& o = champ.report.links[l];
      out << prefix << spec.links[l].name << ',' << o.channels << ',' << full(o.x) << ','
          << (o.allocated ? full(o.fidelity) : std::string()) << ',' << full(o.ebr_normalized)
          << ',' << full(o.beta) << ',' << (o.feasible ? 1 : 0) << '\n';
    }
    out << prefix << "reserve," << kr.counts[0] << ",0,,0,0,1\n";
  }
}

void write_trace_csv(std::ostream& out, const KResult& kr) {
  out << "K,run,seed,generation,best_fitness\n";
  for (std::size_t r = 0; r < kr.runs.runs.size(); ++r) {
    const auto& run = kr.runs.runs[r];
    for (std::size_t g = 0; g < run.trace.size(); ++g)
      out << kr.channels << ',' << r << ',' << run.seed << ',' << g << ',' << full(run.trace[g])
          << '\n';
  }
}

ReportFormat parse_report_format(const std::string& name) {
  if (name == "text") return ReportFormat::text;
  if (name == "csv") return ReportFormat::csv;
  if (name == "both") return ReportFormat::both;
  throw std::invalid_argument("unknown format '" + name + "' (expected csv, text or both)");
}

std::vector<std::filesystem::path> emit_report(const ScenarioResult& result,
                                               const std::filesystem::path& dir,
                                               ReportFormat format) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  const std::string stem = file_stem(result);
  if (format != ReportFormat::csv) {
    const auto path = dir / (stem + "_report.txt");
    write_file(path, report_text(result));
    written.push_back(path);
  }
  if (format != ReportFormat::text) {
    std::ostringstream csv;
    write_report_csv(csv, result);
    const auto path = dir / (stem + ".csv");
    write_file(path, csv.str());
    written.push_back(path);
    for (const auto& kr : result.per_k) {
      std::ostringstream trace;
      write_trace_csv(trace, kr);
      const auto tpath = dir / (result.spec.name + "_K" + std::to_string(kr.channels) + "_seed" +
                                std::to_string(result.spec.ga.seed) + "_trace.csv");
      write_file(tpath, trace.str());
      written.push_back(tpath);
    }
  }
  return written;
}

}  // namespace efa
