#include "posim/harness.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "posim/estimators.hpp"
#include "posim/stochastic.hpp"

namespace posim {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<double> finite_only(const std::vector<double>& v, std::int32_t* n_excluded) {
  std::vector<double> out;
  out.reserve(v.size());
  for (double x : v) {
    if (std::isfinite(x))
      out.push_back(x);
    else if (n_excluded)
      ++*n_excluded;
  }
  return out;
}

// Per-replication estimates for one scenario; nan marks a failed estimand.
struct RepResult {
  bool ok = false;
  std::vector<double> estimands;
  std::vector<double> surv_always;
  std::vector<double> surv_never;
};

RepResult run_rep_one(const ScenarioConfig& sc, std::int32_t b, const TruthSetOne& truth) {
  RepResult res;
  const StudyOneParams params = sc.resolved_one();
  LongDataset data = simulate_dataset_one(params, static_cast<std::uint64_t>(b), sc.generator_seed());
  try {
    WeightTable w = estimate_weights_one(data, params.checkup_spacing);
    w = truncate_weights(std::move(w), sc.wt);
    LogitMsmFit fit = fit_logit_msm(data, w, GForm::HavercroftD1AD3);
    if (!fit.diagnostics.converged) return res;
    res.estimands.assign(fit.gamma_hat.data(), fit.gamma_hat.data() + fit.gamma_hat.size());
    const std::vector<int> always(static_cast<std::size_t>(params.n_visits) + 1, 1);
    const std::vector<int> never(static_cast<std::size_t>(params.n_visits) + 1, 0);
    for (std::int32_t t = 0; t <= params.n_visits + 1; ++t) {
      res.surv_always.push_back(survival_logit(fit.gamma_hat, GForm::HavercroftD1AD3, always, t));
      res.surv_never.push_back(survival_logit(fit.gamma_hat, GForm::HavercroftD1AD3, never, t));
    }
    (void)truth;
    res.ok = true;
  } catch (const std::exception&) {
    res.ok = false;
  }
  return res;
}

RepResult run_rep_two(const ScenarioConfig& sc, std::int32_t b, const TruthSetTwo& truth) {
  RepResult res;
  const StudyTwoParams params = sc.resolved_two();
  LongDataset data = simulate_dataset_two(params, static_cast<std::uint64_t>(b), sc.generator_seed());
  try {
    WeightTable w = estimate_weights_two(data);
    w = truncate_weights(std::move(w), sc.wt);
    AalenMsmFit fit = fit_aalen_msm(data, w);
    // estimand order: C0 at each grid t, then CAj at t = j+1..K+1
    for (std::size_t gi = 0; gi < truth.grid.size(); ++gi)
      res.estimands.push_back(fit.cumulative(0, truth.grid[gi]));
    for (std::int32_t j = 0; j <= params.n_visits; ++j)
      for (std::size_t gi = static_cast<std::size_t>(j); gi < truth.grid.size(); ++gi)
        res.estimands.push_back(fit.cumulative(1 + j, truth.grid[gi]));
    const std::vector<int> always(static_cast<std::size_t>(params.n_visits) + 1, 1);
    const std::vector<int> never(static_cast<std::size_t>(params.n_visits) + 1, 0);
    res.surv_always.push_back(1.0);
    res.surv_never.push_back(1.0);
    for (double t : truth.grid) {
      res.surv_always.push_back(survival_aalen(fit, always, t));
      res.surv_never.push_back(survival_aalen(fit, never, t));
    }
    res.ok = true;
  } catch (const std::exception&) {
    res.ok = false;
  }
  return res;
}

void append_metric(std::vector<MetricRow>& out, const ScenarioConfig& sc,
                   const std::string& name, double time, double truth_value,
                   const std::vector<double>& estimates, std::int32_t n_failed) {
  MetricRow row;
  row.scenario = sc;
  row.estimand = name;
  row.time = time;
  row.truth = truth_value;
  row.n_excluded = n_failed;
  std::vector<double> clean = finite_only(estimates, &row.n_excluded);
  row.n_success = static_cast<std::int32_t>(clean.size());
  if (!clean.empty()) {
    row.bias = bias(clean, truth_value);
    row.rmse = rmse(clean, truth_value);
    if (clean.size() >= 2) {
      row.emp_se = emp_se(clean);
      row.mc_se_bias = row.emp_se / std::sqrt(static_cast<double>(clean.size()));
    }
  }
  out.push_back(row);
}

}  // namespace

double bias(const std::vector<double>& estimates, double truth) {
  if (estimates.empty()) throw std::invalid_argument("bias: empty estimates");
  double s = 0.0;
  for (double x : estimates) s += x;
  return s / static_cast<double>(estimates.size()) - truth;
}

double emp_se(const std::vector<double>& estimates) {
  if (estimates.size() < 2) throw std::invalid_argument("emp_se: need at least 2 estimates");
  double mean = 0.0;
  for (double x : estimates) mean += x;
  mean /= static_cast<double>(estimates.size());
  double ss = 0.0;
  for (double x : estimates) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / (static_cast<double>(estimates.size()) - 1.0));
}

double rmse(const std::vector<double>& estimates, double truth) {
  if (estimates.empty()) throw std::invalid_argument("rmse: empty estimates");
  double ss = 0.0;
  for (double x : estimates) ss += (x - truth) * (x - truth);
  return std::sqrt(ss / static_cast<double>(estimates.size()));
}

std::uint64_t ScenarioConfig::generator_seed() const {
  std::uint64_t h = mix64(master_seed ^ 0x706f73696dULL);
  h = mix64(h ^ (study == Study::One ? 1ULL : 2ULL));
  h = mix64(h ^ static_cast<std::uint64_t>(n));
  if (study == Study::One) {
    h = mix64(h ^ static_cast<std::uint64_t>(params_one.n_visits));
    h = mix64(h ^ static_cast<std::uint64_t>(params_one.checkup_spacing));
  } else {
    h = mix64(h ^ static_cast<std::uint64_t>(params_two.n_visits));
  }
  return h;
}

StudyOneParams ScenarioConfig::resolved_one() const {
  StudyOneParams p = params_one;
  p.n = n;
  p.policy = PositivityPolicy{pi, tau, ViolationRegion::BelowTau};
  return p;
}

StudyTwoParams ScenarioConfig::resolved_two() const {
  StudyTwoParams p = params_two;
  p.n = n;
  p.policy = PositivityPolicy{pi, tau, ViolationRegion::AboveTau};
  p.intervention.reset();
  return p;
}

std::string ScenarioConfig::label() const {
  std::ostringstream s;
  s << "study" << (study == Study::One ? 1 : 2) << "_n" << n << "_pi" << format_double(pi)
    << "_tau" << format_double(tau) << "_wt" << truncation_name(wt);
  return s.str();
}

StudyResults run_study(const std::vector<ScenarioConfig>& grid, const TruthSetOne* truth_one,
                       const TruthSetTwo* truth_two, int jobs) {
  if (jobs < 1) jobs = 1;
  StudyResults results;

  for (const auto& sc : grid) {
    const bool one = (sc.study == Study::One);
    if (one && !truth_one) throw std::invalid_argument("run_study: study-I scenario without truth");
    if (!one && !truth_two) throw std::invalid_argument("run_study: study-II scenario without truth");

    const std::int32_t B = sc.replications;
    std::vector<RepResult> reps(static_cast<std::size_t>(B));

    auto worker = [&](int wi) {
      for (std::int32_t b = wi; b < B; b += jobs) {
        reps[static_cast<std::size_t>(b)] =
            one ? run_rep_one(sc, b, *truth_one) : run_rep_two(sc, b, *truth_two);
      }
    };
    if (jobs == 1) {
      worker(0);
    } else {
      std::vector<std::thread> pool;
      for (int wi = 0; wi < jobs; ++wi) pool.emplace_back(worker, wi);
      for (auto& th : pool) th.join();
    }

    std::int32_t n_failed = 0;
    for (const auto& r : reps)
      if (!r.ok) ++n_failed;

    // estimand names and truth values in replication order
    std::vector<std::string> names;
    std::vector<double> times, truths;
    if (one) {
      names = {"gamma_0", "gamma_A1", "gamma_A2", "gamma_A3"};
      times = {0, 0, 0, 0};
      truths.assign(truth_one->gamma_true.begin(), truth_one->gamma_true.end());
    } else {
      for (std::size_t gi = 0; gi < truth_two->grid.size(); ++gi) {
        names.push_back("C_0");
        times.push_back(truth_two->grid[gi]);
        truths.push_back(truth_two->c_true[0][gi]);
      }
      for (std::int32_t j = 0; j <= truth_two->max_visit; ++j) {
        for (std::size_t gi = static_cast<std::size_t>(j); gi < truth_two->grid.size(); ++gi) {
          names.push_back("C_A" + std::to_string(j));
          times.push_back(truth_two->grid[gi]);
          truths.push_back(truth_two->c_true[static_cast<std::size_t>(j) + 1][gi]);
        }
      }
    }

    for (std::size_t e = 0; e < names.size(); ++e) {
      std::vector<double> est;
      for (const auto& r : reps)
        if (r.ok) est.push_back(r.estimands[e]);
      append_metric(results.metrics, sc, names[e], times[e], truths[e], est, n_failed);
    }

    // mean survival curves over successful replications
    std::size_t curve_len = 0;
    for (const auto& r : reps)
      if (r.ok) curve_len = r.surv_always.size();
    for (std::size_t ci = 0; ci < curve_len; ++ci) {
      double sum_a = 0.0, sum_n = 0.0;
      std::int32_t cnt = 0;
      for (const auto& r : reps) {
        if (!r.ok) continue;
        sum_a += r.surv_always[ci];
        sum_n += r.surv_never[ci];
        ++cnt;
      }
      if (cnt == 0) break;
      double t, truth_a, truth_n;
      if (one) {
        t = static_cast<double>(ci);
        truth_a = truth_one->survival_always[ci];
        truth_n = truth_one->survival_never[ci];
      } else {
        t = (ci == 0) ? 0.0 : truth_two->grid[ci - 1];
        truth_a = (ci == 0) ? 1.0 : truth_two->survival_always[ci - 1];
        truth_n = (ci == 0) ? 1.0 : truth_two->survival_never[ci - 1];
      }
      CurveRow ra{sc, "always", t, sum_a / cnt, truth_a};
      CurveRow rn{sc, "never", t, sum_n / cnt, truth_n};
      results.curves.push_back(ra);
      results.curves.push_back(rn);
    }
  }
  return results;
}

void write_metrics(std::ostream& out, const std::vector<MetricRow>& metrics) {
  out << "#posim-results v1\n";
  out << "study\tn\tpi\ttau\twt\tB\testimand\tt\ttruth\tbias\temp_se\trmse\tmc_se_bias\t"
         "n_success\tn_excluded\n";
  for (const auto& m : metrics) {
    const auto& sc = m.scenario;
    out << (sc.study == Study::One ? 1 : 2) << '\t' << sc.n << '\t' << format_double(sc.pi)
        << '\t' << format_double(sc.tau) << '\t' << truncation_name(sc.wt) << '\t'
        << sc.replications << '\t' << m.estimand << '\t' << format_double(m.time) << '\t'
        << format_double(m.truth) << '\t' << format_double(m.bias) << '\t'
        << format_double(m.emp_se) << '\t' << format_double(m.rmse) << '\t'
        << format_double(m.mc_se_bias) << '\t' << m.n_success << '\t' << m.n_excluded << '\n';
  }
}

void write_curves(std::ostream& out, const std::vector<CurveRow>& curves) {
  out << "#posim-curves v1\n";
  out << "study\tn\tpi\ttau\twt\tB\tregime\tt\tmean_survival\ttrue_survival\n";
  for (const auto& c : curves) {
    const auto& sc = c.scenario;
    out << (sc.study == Study::One ? 1 : 2) << '\t' << sc.n << '\t' << format_double(sc.pi)
        << '\t' << format_double(sc.tau) << '\t' << truncation_name(sc.wt) << '\t'
        << sc.replications << '\t' << c.regime << '\t' << format_double(c.time) << '\t'
        << format_double(c.mean_survival) << '\t' << format_double(c.true_survival) << '\n';
  }
}

}  // namespace posim
