// posim: generate longitudinal survival data under controllable
// near-positivity violations, fit IPTW-weighted hazard models, and measure
// estimator performance across scenario grids.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "posim/config.hpp"
#include "posim/dataset.hpp"
#include "posim/estimators.hpp"
#include "posim/genmodel_one.hpp"
#include "posim/genmodel_two.hpp"
#include "posim/harness.hpp"
#include "posim/truth.hpp"

namespace fs = std::filesystem;
using namespace posim;

namespace {

constexpr const char* kVersion = "posim 0.1.0";

std::uint64_t resolve_seed(std::uint64_t flag_seed, bool seed_given) {
  if (seed_given) return flag_seed;
  if (const char* env = std::getenv("POSIM_SEED")) return std::stoull(env);
  return 0;
}

struct GenOptions {
  int study = 1;
  std::int32_t n = 1000;
  double pi = 1.0;
  double tau = 0.0;
  std::uint64_t rep = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool benchmark = false;
  std::string out;
};

int cmd_gen(const GenOptions& opt) {
  ScenarioConfig sc;
  sc.study = opt.study == 1 ? Study::One : Study::Two;
  sc.n = opt.n;
  sc.pi = opt.pi;
  sc.tau = opt.tau;
  sc.master_seed = resolve_seed(opt.seed, opt.seed_given);

  LongDataset data;
  if (sc.study == Study::One) {
    data = opt.benchmark ? simulate_benchmark_one(sc.resolved_one(), opt.rep, sc.generator_seed())
                         : simulate_dataset_one(sc.resolved_one(), opt.rep, sc.generator_seed());
  } else {
    data = opt.benchmark ? simulate_benchmark_two(sc.resolved_two(), opt.rep, sc.generator_seed())
                         : simulate_dataset_two(sc.resolved_two(), opt.rep, sc.generator_seed());
  }
  if (opt.out.empty() || opt.out == "-") {
    write_dataset(std::cout, data);
  } else {
    write_dataset_file(opt.out, data);
  }
  return 0;
}

struct TruthOptions {
  int study = 1;
  std::int64_t n_oracle = 100000;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out;
};

int cmd_truth(const TruthOptions& opt) {
  const std::uint64_t seed = resolve_seed(opt.seed, opt.seed_given);
  if (opt.study == 1) {
    TruthSetOne truth = true_params_one();
    std::ostringstream body;
    body << "#posim-truth1 v1 K=" << truth.max_visit << "\n";
    body << "quantity\tt\tvalue\n";
    const char* names[4] = {"gamma_0", "gamma_A1", "gamma_A2", "gamma_A3"};
    for (int i = 0; i < 4; ++i)
      body << names[i] << "\t0\t" << format_double(truth.gamma_true[static_cast<std::size_t>(i)])
           << "\n";
    for (std::size_t t = 0; t < truth.survival_always.size(); ++t) {
      body << "S_always\t" << t << '\t' << format_double(truth.survival_always[t]) << '\n';
      body << "S_never\t" << t << '\t' << format_double(truth.survival_never[t]) << '\n';
    }
    if (opt.out.empty() || opt.out == "-") {
      std::cout << body.str();
    } else {
      std::ofstream f(opt.out, std::ios::binary);
      if (!f) throw std::runtime_error("cannot open for writing: " + opt.out);
      f << body.str();
    }
  } else {
    TruthSetTwo truth = compute_truth_two(opt.n_oracle, seed);
    if (opt.out.empty()) throw std::runtime_error("truth --study 2 requires --out");
    write_truth_two_file(opt.out, truth);
  }
  return 0;
}

struct RunOptions {
  std::string config_path;
  std::int32_t b_override = 0;
  int jobs = 1;
  std::string out_dir = "posim-out";
  std::string truth_path;
};

int cmd_run(const RunOptions& opt) {
  auto grid = load_scenario_config(opt.config_path);
  if (grid.empty()) throw std::runtime_error("config resolves to an empty scenario grid");
  if (opt.b_override > 0)
    for (auto& sc : grid) sc.replications = opt.b_override;

  const bool has_two = grid.front().study == Study::Two;
  TruthSetOne truth_one;
  TruthSetTwo truth_two;
  if (has_two) {
    if (opt.truth_path.empty() || !fs::exists(opt.truth_path)) {
      std::cerr << "error: study-2 scenarios need a truth file; run\n"
                << "  posim truth --study 2 --n-oracle 100000 --seed <seed> --out truth2.tsv\n"
                << "and pass it with --truth truth2.tsv\n";
      return 2;
    }
    truth_two = read_truth_two_file(opt.truth_path);
  } else {
    truth_one = true_params_one(grid.front().params_one.n_visits);
  }

  StudyResults results = run_study(grid, has_two ? nullptr : &truth_one,
                                   has_two ? &truth_two : nullptr, opt.jobs);

  fs::create_directories(opt.out_dir);
  {
    std::ofstream f(fs::path(opt.out_dir) / "results.tsv", std::ios::binary);
    write_metrics(f, results.metrics);
  }
  {
    std::ofstream f(fs::path(opt.out_dir) / "curves.tsv", std::ios::binary);
    write_curves(f, results.curves);
  }
  {
    std::ofstream f(fs::path(opt.out_dir) / "manifest.txt", std::ios::binary);
    f << "#posim-manifest v1\n";
    f << "tool\t" << kVersion << "\n";
    f << "config\t" << opt.config_path << "\n";
    f << "master_seed\t" << grid.front().master_seed << "\n";
    f << "b\t" << grid.front().replications << "\n";
    if (has_two) f << "truth\t" << opt.truth_path << "\n";
    f << "outputs\tresults.tsv\tcurves.tsv\n";
    for (const auto& sc : grid) f << "scenario\t" << sc.label() << "\n";
  }
  std::cerr << "wrote " << results.metrics.size() << " metric rows, " << results.curves.size()
            << " curve rows to " << opt.out_dir << "\n";
  return 0;
}

struct CurvesOptions {
  std::string curves_path;
  std::string scenario;  // tau-free id, e.g. study1_n1000_pi1_wtNoWT
  std::string format = "table";
  std::string out;
};

struct CurvePoint {
  double t;
  double mean;
  double truth;
};

int cmd_curves(const CurvesOptions& opt) {
  std::ifstream in(opt.curves_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open curves file: " + opt.curves_path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("#posim-curves v1", 0) != 0)
    throw std::runtime_error("curves file: unknown or missing format header");
  std::getline(in, line);  // column header

  // (tau, regime) -> points
  std::map<std::pair<std::string, std::string>, std::vector<CurvePoint>> series;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::vector<std::string> f;
    std::string tok;
    while (std::getline(ls, tok, '\t')) f.push_back(tok);
    if (f.size() != 10) throw std::runtime_error("curves file: bad row");
    const std::string id = "study" + f[0] + "_n" + f[1] + "_pi" + f[2] + "_wt" + f[4];
    if (id != opt.scenario) continue;
    series[{f[3], f[6]}].push_back({std::stod(f[7]), std::stod(f[8]), std::stod(f[9])});
  }
  if (series.empty()) throw std::runtime_error("unknown scenario id: " + opt.scenario);

  std::ostringstream body;
  if (opt.format == "table") {
    body << "#posim-curve-table v1 scenario=" << opt.scenario << "\n";
    body << "tau\tregime\tt\tmean_survival\ttrue_survival\n";
    for (const auto& [key, pts] : series)
      for (const auto& p : pts)
        body << key.first << '\t' << key.second << '\t' << format_double(p.t) << '\t'
             << format_double(p.mean) << '\t' << format_double(p.truth) << '\n';
  } else if (opt.format == "svg") {
    const double width = 640, height = 420, ml = 50, mr = 15, mt = 15, mb = 35;
    double tmax = 1.0;
    for (const auto& [key, pts] : series)
      for (const auto& p : pts) tmax = std::max(tmax, p.t);
    auto sx = [&](double t) { return ml + (width - ml - mr) * t / tmax; };
    auto sy = [&](double s) { return mt + (height - mt - mb) * (1.0 - s); };
    body << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
         << "'>\n";
    body << "<rect width='100%' height='100%' fill='white'/>\n";
    body << "<line x1='" << ml << "' y1='" << sy(0) << "' x2='" << width - mr << "' y2='" << sy(0)
         << "' stroke='black'/>\n";
    body << "<line x1='" << ml << "' y1='" << sy(0) << "' x2='" << ml << "' y2='" << sy(1)
         << "' stroke='black'/>\n";
    body << "<text x='" << (width / 2) << "' y='" << height - 8 << "' font-size='12'>t</text>\n";
    body << "<text x='8' y='" << (height / 2) << "' font-size='12'>S(t)</text>\n";
    // one colour per tau, solid = always treated, dashed = never treated
    const char* palette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02"};
    int colour_idx = 0;
    std::map<std::string, std::string> tau_colour;
    for (const auto& [key, pts] : series) {
      if (!tau_colour.count(key.first))
        tau_colour[key.first] = palette[colour_idx++ % 6];
      body << "<polyline fill='none' stroke='" << tau_colour[key.first] << "'"
           << (key.second == "never" ? " stroke-dasharray='6,4'" : "") << " points='";
      for (const auto& p : pts) body << sx(p.t) << ',' << sy(p.mean) << ' ';
      body << "'/>\n";
    }
    // truth overlay from the first series of each regime
    for (const char* regime : {"always", "never"}) {
      for (const auto& [key, pts] : series) {
        if (key.second != regime) continue;
        body << "<polyline fill='none' stroke='orange'"
             << (std::string(regime) == "never" ? " stroke-dasharray='6,4'" : "") << " points='";
        for (const auto& p : pts) body << sx(p.t) << ',' << sy(p.truth) << ' ';
        body << "'/>\n";
        break;
      }
    }
    body << "</svg>\n";
  } else {
    throw std::runtime_error("unknown format: " + opt.format);
  }

  if (opt.out.empty() || opt.out == "-") {
    std::cout << body.str();
  } else {
    std::ofstream f(opt.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + opt.out);
    f << body.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"positivity-violation MSM simulation engine"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  GenOptions gen;
  auto* sub_gen = app.add_subcommand("gen", "generate one simulated dataset");
  sub_gen->add_option("--study", gen.study, "study number")->check(CLI::IsMember({1, 2}))->required();
  sub_gen->add_option("--n", gen.n, "sample size");
  sub_gen->add_option("--pi", gen.pi, "exposure cut-off")->check(CLI::Range(0.0, 1.0));
  sub_gen->add_option("--tau", gen.tau, "rule threshold");
  sub_gen->add_option("--rep", gen.rep, "replication index");
  auto* gen_seed = sub_gen->add_option("--seed", gen.seed, "master seed (default: POSIM_SEED env)");
  sub_gen->add_flag("--benchmark", gen.benchmark, "benchmark mode (no forcing rule)");
  sub_gen->add_option("--out", gen.out, "output file ('-' for stdout)");

  TruthOptions truth;
  auto* sub_truth = app.add_subcommand("truth", "compute true estimand values");
  sub_truth->add_option("--study", truth.study, "study number")->check(CLI::IsMember({1, 2}))->required();
  sub_truth->add_option("--n-oracle", truth.n_oracle, "oracle sample size (study 2)");
  auto* truth_seed = sub_truth->add_option("--seed", truth.seed, "oracle seed");
  sub_truth->add_option("--out", truth.out, "output file");

  RunOptions run;
  auto* sub_run = app.add_subcommand("run", "run a scenario grid");
  sub_run->add_option("config", run.config_path, "scenario config file")->required()
      ->check(CLI::ExistingFile);
  sub_run->add_option("--b", run.b_override, "override replication count");
  sub_run->add_option("--jobs", run.jobs, "worker threads")->check(CLI::PositiveNumber);
  sub_run->add_option("--out-dir", run.out_dir, "output directory");
  sub_run->add_option("--truth", run.truth_path, "truth file (study 2)");

  CurvesOptions curves;
  auto* sub_curves = app.add_subcommand("curves", "emit mean survival curves");
  sub_curves->add_option("curves_file", curves.curves_path, "curves.tsv from a run")->required()
      ->check(CLI::ExistingFile);
  sub_curves->add_option("--scenario", curves.scenario, "scenario id, e.g. study1_n1000_pi1_wtNoWT")
      ->required();
  sub_curves->add_option("--format", curves.format, "table or svg")
      ->check(CLI::IsMember({"table", "svg"}));
  sub_curves->add_option("--out", curves.out, "output file ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*sub_gen) {
      gen.seed_given = gen_seed->count() > 0;
      return cmd_gen(gen);
    }
    if (*sub_truth) {
      truth.seed_given = truth_seed->count() > 0;
      return cmd_truth(truth);
    }
    if (*sub_run) return cmd_run(run);
    if (*sub_curves) return cmd_curves(curves);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
