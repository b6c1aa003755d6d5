// geonum: command-line front end.
//
//   geonum minima   --basis "1,0;0,1" --body ball:p=2 [--budget R]
//   geonum sample   --count N
//   geonum count    --basis ... --region disk:r=2.5
//   geonum rogers   [--region disk:area=10 ...] [--samples N]
//   geonum witness  [--body plane] [--shells N] [--samples M] [--basis ...] [--lattices K]
//   geonum probe    --config probe.json
//   geonum theorem2 [--body hyperbola] [--budgets 10,100,1000] [--samples N]
//   geonum noncontinuity [--epsilon E] [--budget R] [--trials T]
//
// Global flags: --seed S, --json, --csv, --out PATH, --threads T.
// Exit status: 0 ok, 1 usage, 2 precondition violation, 3 budget exhausted.

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "geonum/geonum.hpp"
#include "geonum/report.hpp"

namespace {

using geonum::Json;

enum class Format { Text, Json, Csv };

struct Globals {
  std::uint64_t seed = 1;
  bool json = false;
  bool csv = false;
  std::string out;
  unsigned threads = 1;

  Format format() const { return json ? Format::Json : csv ? Format::Csv : Format::Text; }
};

std::string shortest(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, end) : std::to_string(v);
}

std::string join(const std::vector<double>& xs, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += sep;
    s += shortest(xs[i]);
  }
  return s;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> xs;
  for (auto tok : geonum::detail::split(text, ',')) xs.push_back(geonum::detail::parse_real(tok, "list"));
  return xs;
}

// ---------------------------------------------------------------- minima

struct MinimaArgs {
  std::string basis;
  std::string body;
  double budget = 0.0;
};

int run_minima(const Globals& g, const MinimaArgs& a, std::string& out) {
  const geonum::Lattice lattice = geonum::parse_lattice(a.basis);
  const geonum::DistanceFunction f = geonum::parse_body(a.body, lattice.dim());
  const bool budgeted = a.budget > 0.0;
  const geonum::MinimaResult m =
      budgeted ? geonum::minima_upper_bound(f, lattice, a.budget) : geonum::successive_minima_exact(f, lattice);
  Json config{{"basis", a.basis}, {"body", f.label()}};
  if (budgeted) config["budget"] = a.budget;
  switch (g.format()) {
    case Format::Json: out = dump(geonum::envelope("minima", config, g.seed, geonum::to_json(m))); break;
    case Format::Csv: {
      std::ostringstream s;
      s << "i,value,exact,coeffs\n";
      for (std::size_t i = 0; i < m.values.size(); ++i) {
        s << i + 1 << ',' << shortest(m.values[i]) << ',' << (m.exact ? 1 : 0) << ',';
        if (static_cast<int>(i) < m.attained()) {
          for (std::size_t k = 0; k < m.witnesses[i].coeffs.size(); ++k) {
            s << (k ? " " : "") << m.witnesses[i].coeffs[k];
          }
        }
        s << '\n';
      }
      out = s.str();
      break;
    }
    case Format::Text: out = join(m.values, " ") + "\n"; break;
  }
  return m.rank_deficit ? 3 : 0;
}

// ---------------------------------------------------------------- sample

int run_sample(const Globals& g, std::uint64_t count, std::string& out) {
  const Json config{{"count", count}};
  const std::string hash = geonum::config_hash(config);
  std::vector<geonum::HaarSample2D> samples;
  samples.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) samples.push_back(geonum::sample_unimodular_2d(g.seed, i));
  std::ostringstream s;
  if (g.format() == Format::Csv) s << "index,x,y,rotation,b11,b21,b12,b22\n";
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto& smp = samples[i];
    const auto& b = smp.lattice.basis();
    switch (g.format()) {
      case Format::Json: {
        Json line = geonum::to_json(smp);
        line["index"] = i;
        line["seed"] = g.seed;
        line["version"] = geonum::kVersion;
        line["config_hash"] = hash;
        s << line.dump() << '\n';
        break;
      }
      case Format::Csv:
        s << i << ',' << shortest(smp.x) << ',' << shortest(smp.y) << ',' << shortest(smp.rotation) << ','
          << shortest(b(0, 0)) << ',' << shortest(b(1, 0)) << ',' << shortest(b(0, 1)) << ',' << shortest(b(1, 1))
          << '\n';
        break;
      case Format::Text:
        s << shortest(smp.x) << ' ' << shortest(smp.y) << ' ' << shortest(smp.rotation) << ' '
          << geonum::format_basis(b) << '\n';
        break;
    }
  }
  out = s.str();
  return 0;
}

// ---------------------------------------------------------------- count

int run_count(const Globals& g, const std::string& basis, const std::string& region_spec, std::string& out) {
  const geonum::Lattice lattice = geonum::parse_lattice(basis);
  const geonum::Region region = geonum::parse_region(region_spec, lattice.dim());
  const std::uint64_t n = geonum::count_primitive(lattice, region);
  const Json config{{"basis", basis}, {"region", region.label()}};
  switch (g.format()) {
    case Format::Json:
      out = dump(geonum::envelope("count", config, g.seed,
                                  Json{{"count", n}, {"region_volume", geonum::real(region.area().value)}}));
      break;
    case Format::Csv: out = "region,count\n" + region.label() + "," + std::to_string(n) + "\n"; break;
    case Format::Text: out = std::to_string(n) + "\n"; break;
  }
  return 0;
}

// ---------------------------------------------------------------- rogers

int run_rogers(const Globals& g, std::vector<std::string> specs, std::uint64_t samples, std::string& out) {
  if (specs.empty()) specs = {"disk:area=5", "disk:area=10", "disk:area=20", "disk:area=40"};
  std::vector<geonum::Region> regions;
  Json labels = Json::array();
  for (const auto& s : specs) {
    regions.push_back(geonum::parse_region(s, 2));
    labels.push_back(regions.back().label());
  }
  const auto report = geonum::rogers_moment_report(regions, samples, g.seed, g.threads);
  const Json config{{"regions", labels}, {"samples", samples}};
  std::ostringstream s;
  switch (g.format()) {
    case Format::Json: s << dump(geonum::envelope("rogers", config, g.seed, geonum::to_json(report))); break;
    case Format::Csv:
    case Format::Text: {
      const char* sep = g.format() == Format::Csv ? "," : " ";
      s << "region" << sep << "volume" << sep << "centre" << sep << "mean" << sep << "mean_stderr" << sep << "mean_z"
        << sep << "m2" << sep << "m2_over_V" << sep << "m2_over_VlogV\n";
      for (const auto& r : report.regions) {
        s << r.region << sep << shortest(r.volume) << sep << shortest(r.centre) << sep << shortest(r.counts.mean)
          << sep << shortest(r.counts.stderr_mean) << sep << shortest(r.mean_z) << sep << shortest(r.second_moment)
          << sep << shortest(r.ratio_volume) << sep << shortest(r.ratio_volume_log) << '\n';
      }
      break;
    }
  }
  out = s.str();
  return 0;
}

// ---------------------------------------------------------------- witness

struct WitnessArgs {
  std::string body = "plane";
  int shells = 5;
  std::uint64_t mc_points = 100'000;
  std::string basis;
  std::uint64_t lattices = 0;
  double budget = 0.0;
};

int run_witness(const Globals& g, const WitnessArgs& a, std::string& out) {
  geonum::WitnessConfig wc;
  wc.body = geonum::parse_region(a.body, 2);
  wc.shell_options.mc_points = a.mc_points;
  wc.shell_seed = geonum::derive_seed(g.seed, 0);
  wc.threads = g.threads;
  if (a.budget > 0.0) wc.budget = a.budget;
  const geonum::WitnessPipeline pipeline = geonum::build_pipeline(wc, a.shells);
  const geonum::Lattice lattice =
      a.basis.empty() ? geonum::sample_unimodular_2d(g.seed, 1).lattice : geonum::parse_lattice(a.basis);
  const double budget = wc.budget.value_or(pipeline.shells.back().outer_radius);
  const auto witnesses = geonum::extract_witnesses(lattice, pipeline.shells, pipeline.partitions, budget);
  std::vector<geonum::MissRateReport> rates;
  if (a.lattices > 0) {
    for (int n = 1; n <= a.shells; ++n) {
      rates.push_back(geonum::part_miss_rate(pipeline, n, a.lattices, wc, geonum::derive_seed(g.seed, 2)));
    }
  }
  Json config{{"body", wc.body.label()}, {"shells", a.shells}, {"mc_points", a.mc_points}, {"lattices", a.lattices}};
  if (!a.basis.empty()) config["basis"] = a.basis;
  if (a.budget > 0.0) config["budget"] = a.budget;

  std::ostringstream s;
  int found = 0;
  for (const auto& w : witnesses) found += w.tuple ? 1 : 0;
  switch (g.format()) {
    case Format::Json: {
      Json records = Json::array();
      for (std::size_t i = 0; i < witnesses.size(); ++i) {
        records.push_back(geonum::to_json(pipeline.shells[i], pipeline.partitions[i], witnesses[i]));
      }
      Json rate_json = Json::array();
      for (const auto& r : rates) rate_json.push_back(geonum::to_json(r));
      Json result{{"lattice", geonum::basis_json(lattice)},
                  {"det", lattice.det()},
                  {"shells", records},
                  {"witness_pairs", found},
                  {"miss_rates", rate_json}};
      s << dump(geonum::envelope("witness", config, g.seed, result));
      break;
    }
    case Format::Csv:
    case Format::Text: {
      const char* sep = g.format() == Format::Csv ? "," : " ";
      s << "n" << sep << "rho_in" << sep << "rho_out" << sep << "est_volume" << sep << "stderr" << sep << "status"
        << sep << "p1" << sep << "p2\n";
      for (std::size_t i = 0; i < witnesses.size(); ++i) {
        const auto& sh = pipeline.shells[i];
        s << sh.index << sep << shortest(sh.inner_radius) << sep << shortest(sh.outer_radius) << sep
          << shortest(sh.est_volume) << sep << shortest(sh.stderr_volume) << sep;
        if (witnesses[i].tuple) {
          s << "pair";
          for (const auto& p : witnesses[i].tuple->points) s << sep << p.coeffs[0] << ' ' << p.coeffs[1];
        } else {
          s << "empty:";
          for (int q : witnesses[i].empty_quadrants) s << q;
          s << sep << sep;
        }
        s << '\n';
      }
      if (!rates.empty()) {
        s << "n" << sep << "miss_rate" << sep << "lo" << sep << "hi\n";
        for (const auto& r : rates) {
          s << r.shell << sep << shortest(r.rate) << sep << shortest(r.interval.lo) << sep << shortest(r.interval.hi)
            << '\n';
        }
      }
      break;
    }
  }
  out = s.str();
  return 0;
}

// ---------------------------------------------------------------- probe

geonum::ProbeConfig probe_config_from(const Json& j) {
  geonum::ProbeConfig c;
  if (j.contains("schedule")) {
    c.schedule = j.at("schedule").get<std::vector<int>>();
  } else {
    const int n_max = j.value("n_max", 64);
    for (int n = 1; n <= n_max; ++n) c.schedule.push_back(n);
  }
  c.slack = j.value("slack", 10.0);
  c.budget = j.value("budget", 50.0);
  if (j.contains("body_schedule")) {
    const Json& b = j.at("body_schedule");
    const std::string kind = b.value("kind", "fixed");
    if (kind == "fixed") c.body_schedule.kind = geonum::BodySchedule::Kind::Fixed;
    else if (kind == "scale") c.body_schedule.kind = geonum::BodySchedule::Kind::Scale;
    else if (kind == "multiply") c.body_schedule.kind = geonum::BodySchedule::Kind::Multiply;
    else geonum::fail(geonum::ErrorKind::ParseError, "unknown body_schedule kind '" + kind + "'");
    c.body_schedule.c = b.value("c", 1.0);
  }
  if (j.contains("lattice_schedule")) {
    const Json& l = j.at("lattice_schedule");
    const std::string kind = l.value("kind", "fixed");
    if (kind == "fixed") c.lattice_schedule.kind = geonum::LatticeSchedule::Kind::Fixed;
    else if (kind == "perturb") c.lattice_schedule.kind = geonum::LatticeSchedule::Kind::Perturb;
    else if (kind == "dilate") c.lattice_schedule.kind = geonum::LatticeSchedule::Kind::Dilate;
    else geonum::fail(geonum::ErrorKind::ParseError, "unknown lattice_schedule kind '" + kind + "'");
    c.lattice_schedule.magnitude = l.value("magnitude", 1.0);
    c.lattice_schedule.seed = l.value("seed", std::uint64_t{0});
  }
  return c;
}

int run_probe(const Globals& g, const std::string& path, std::string& out) {
  std::ifstream in(path);
  if (!in) geonum::fail(geonum::ErrorKind::InvalidArgument, "cannot open probe config '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    geonum::fail(geonum::ErrorKind::ParseError, std::string("probe config: ") + e.what());
  }
  const geonum::Lattice lattice = geonum::parse_lattice(j.at("basis").get<std::string>());
  const geonum::DistanceFunction f = geonum::parse_body(j.at("body").get<std::string>(), lattice.dim());
  geonum::ProbeConfig config = probe_config_from(j);
  if (!j.contains("lattice_schedule") || !j.at("lattice_schedule").contains("seed")) {
    config.lattice_schedule.seed = g.seed;
  }
  const auto report = geonum::semicontinuity_probe(f, lattice, config);
  std::ostringstream s;
  switch (g.format()) {
    case Format::Json: s << dump(geonum::envelope("probe", j, g.seed, geonum::to_json(report))); break;
    case Format::Csv:
    case Format::Text: {
      const char* sep = g.format() == Format::Csv ? "," : " ";
      s << "n" << sep << "i" << sep << "value" << sep << "reference" << sep << "upper_ok" << sep << "converge_ok\n";
      for (const auto& r : report.rows) {
        s << r.n << sep << r.i << sep << shortest(r.value) << sep << shortest(r.reference) << sep << r.upper_ok << sep
          << r.converge_ok << '\n';
      }
      for (const auto& f : report.failures) s << "# n=" << f.n << " failed: " << f.error << '\n';
      break;
    }
  }
  out = s.str();
  return 0;
}

// ---------------------------------------------------------------- theorem2

int run_theorem2(const Globals& g, const std::string& body, const std::string& budgets, std::uint64_t samples,
                 std::string& out) {
  const geonum::DistanceFunction f = geonum::parse_body(body, 2);
  const auto report = geonum::theorem2_experiment(f, parse_list(budgets), samples, g.seed, g.threads);
  const Json config{{"body", f.label()}, {"budgets", report.budgets}, {"samples", samples}};
  std::ostringstream s;
  switch (g.format()) {
    case Format::Json: s << dump(geonum::envelope("theorem2", config, g.seed, geonum::to_json(report))); break;
    case Format::Csv:
    case Format::Text: {
      const char* sep = g.format() == Format::Csv ? "," : " ";
      s << "budget" << sep << "median";
      for (double t : report.thresholds) s << sep << "frac_below_" << shortest(t);
      s << '\n';
      for (std::size_t k = 0; k < report.budgets.size(); ++k) {
        s << shortest(report.budgets[k]) << sep << shortest(report.median[k]);
        for (std::size_t t = 0; t < report.thresholds.size(); ++t) s << sep << shortest(report.fraction_below[t][k]);
        s << '\n';
      }
      break;
    }
  }
  out = s.str();
  return report.monotone_violations == 0 ? 0 : 2;
}

// ---------------------------------------------------------------- noncontinuity

int run_noncontinuity(const Globals& g, double epsilon, double budget, std::uint64_t trials, std::string& out) {
  const auto r = geonum::noncontinuity_demo(epsilon, budget, g.seed, trials);
  const Json config{{"epsilon", epsilon}, {"budget", budget}, {"trials", trials}};
  std::ostringstream s;
  switch (g.format()) {
    case Format::Json: {
      Json history = Json::array();
      for (const auto& h : r.history) {
        history.push_back(Json{{"trial", h.trial}, {"magnitude", h.magnitude}, {"values", geonum::real_array(h.values)}});
      }
      Json result{{"found", r.found},
                  {"trials", r.trials},
                  {"best_lambda_d", geonum::real(r.best_lambda_d)},
                  {"target", r.target},
                  {"minima", geonum::to_json(r.minima)},
                  {"history", history}};
      if (r.lattice) result["lattice"] = geonum::basis_json(*r.lattice);
      s << dump(geonum::envelope("noncontinuity", config, g.seed, result));
      break;
    }
    case Format::Csv:
      s << "trial,magnitude,lambda_1,lambda_2\n";
      for (const auto& h : r.history) {
        s << h.trial << ',' << shortest(h.magnitude) << ',' << join(h.values, ",") << '\n';
      }
      break;
    case Format::Text:
      s << (r.found ? "found" : "not-found") << ' ' << r.trials << ' ' << join(r.minima.values, " ") << '\n';
      break;
  }
  out = s.str();
  return 0;
}

int exit_code_for(const geonum::Error& e) {
  switch (e.kind()) {
    case geonum::ErrorKind::BudgetExceeded:
    case geonum::ErrorKind::RankDeficit: return 3;
    default: return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geonum: successive minima, primitive lattice points and Haar-random planar lattices"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "random seed")->capture_default_str();
  app.add_flag("--json", g.json, "emit a JSON report");
  app.add_flag("--csv", g.csv, "emit CSV tables");
  app.add_option("--out", g.out, "write output to this file instead of stdout");
  app.add_option("--threads", g.threads, "worker threads (results do not depend on it)")->capture_default_str();

  MinimaArgs minima;
  auto* c_minima = app.add_subcommand("minima", "successive minima of a star body w.r.t. a lattice");
  c_minima->add_option("--basis", minima.basis, "basis columns, e.g. \"1,0;0,1\"")->required();
  c_minima->add_option("--body", minima.body, "body spec, e.g. ball:p=2, box, hyperbola")->required();
  c_minima->add_option("--budget", minima.budget, "radius budget (upper bounds; needed for unbounded bodies)");

  std::uint64_t sample_count = 1;
  auto* c_sample = app.add_subcommand("sample", "Haar-random unimodular planar lattices");
  c_sample->add_option("--count", sample_count, "number of samples")->capture_default_str();

  std::string count_basis;
  std::string count_region;
  auto* c_count = app.add_subcommand("count", "count primitive lattice points in a region");
  c_count->add_option("--basis", count_basis, "basis columns")->required();
  c_count->add_option("--region", count_region, "region spec, e.g. disk:r=2.5")->required();

  std::vector<std::string> rogers_regions;
  std::uint64_t rogers_samples = 10'000;
  auto* c_rogers = app.add_subcommand("rogers", "primitive-count moments over Haar lattices");
  c_rogers->add_option("--region", rogers_regions, "region specs (repeatable)");
  c_rogers->add_option("--samples", rogers_samples, "lattices per region")->capture_default_str();

  WitnessArgs witness;
  auto* c_witness = app.add_subcommand("witness", "shell / equipartition / witness-pair pipeline");
  c_witness->add_option("--body", witness.body, "ambient set: plane or a region spec")->capture_default_str();
  c_witness->add_option("--shells", witness.shells, "number of shells")->capture_default_str();
  c_witness->add_option("--samples", witness.mc_points, "Monte Carlo points per shell")->capture_default_str();
  c_witness->add_option("--basis", witness.basis, "lattice basis (default: a Haar sample)");
  c_witness->add_option("--lattices", witness.lattices, "also report per-shell miss rates over this many Haar lattices");
  c_witness->add_option("--budget", witness.budget, "enumeration radius budget");

  std::string probe_path;
  auto* c_probe = app.add_subcommand("probe", "semicontinuity probe from a JSON config");
  c_probe->add_option("--config", probe_path, "probe config file")->required()->check(CLI::ExistingFile);

  std::string t2_body = "hyperbola";
  std::string t2_budgets = "10,100,1000";
  std::uint64_t t2_samples = 200;
  auto* c_t2 = app.add_subcommand("theorem2", "budgeted lambda_d of an unbounded body over Haar lattices");
  c_t2->add_option("--body", t2_body, "unbounded body spec")->capture_default_str();
  c_t2->add_option("--budgets", t2_budgets, "comma-separated increasing radius budgets")->capture_default_str();
  c_t2->add_option("--samples", t2_samples, "number of lattices")->capture_default_str();

  double nc_epsilon = 0.05;
  double nc_budget = 100.0;
  std::uint64_t nc_trials = 32;
  auto* c_nc = app.add_subcommand("noncontinuity", "search near the golden lattice for small hyperbolic minima");
  c_nc->add_option("--epsilon", nc_epsilon, "perturbation size")->capture_default_str();
  c_nc->add_option("--budget", nc_budget, "radius budget")->capture_default_str();
  c_nc->add_option("--trials", nc_trials, "maximum number of perturbations")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  if (g.json && g.csv) {
    std::cerr << "error: --json and --csv are mutually exclusive\n";
    return 1;
  }

  std::string out;
  int code = 0;
  try {
    if (*c_minima) code = run_minima(g, minima, out);
    else if (*c_sample) code = run_sample(g, sample_count, out);
    else if (*c_count) code = run_count(g, count_basis, count_region, out);
    else if (*c_rogers) code = run_rogers(g, rogers_regions, rogers_samples, out);
    else if (*c_witness) code = run_witness(g, witness, out);
    else if (*c_probe) code = run_probe(g, probe_path, out);
    else if (*c_t2) code = run_theorem2(g, t2_body, t2_budgets, t2_samples, out);
    else if (*c_nc) code = run_noncontinuity(g, nc_epsilon, nc_budget, nc_trials, out);
  } catch (const geonum::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  if (g.out.empty()) {
    std::cout << out;
  } else {
    std::ofstream file(g.out, std::ios::binary);
    if (!file) {
      std::cerr << "error: cannot write '" << g.out << "'\n";
      return 2;
    }
    file << out;
  }
  return code;
}
