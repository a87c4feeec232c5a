#include "posim/truth.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "posim/dataset.hpp"

namespace posim {

TruthSetOne true_params_one(std::int32_t max_visit) {
  TruthSetOne truth;
  truth.max_visit = max_visit;
  Eigen::VectorXd gamma(4);
  for (int i = 0; i < 4; ++i) gamma[i] = truth.gamma_true[static_cast<std::size_t>(i)];
  const std::vector<int> always(static_cast<std::size_t>(max_visit) + 1, 1);
  const std::vector<int> never(static_cast<std::size_t>(max_visit) + 1, 0);
  for (std::int32_t t = 0; t <= max_visit + 1; ++t) {
    truth.survival_always.push_back(survival_logit(gamma, GForm::HavercroftD1AD3, always, t));
    truth.survival_never.push_back(survival_logit(gamma, GForm::HavercroftD1AD3, never, t));
  }
  return truth;
}

TruthSetTwo compute_truth_two(std::int64_t n_oracle, std::uint64_t seed,
                              const StudyTwoParams& base) {
  const std::int32_t K = base.n_visits;
  const std::int64_t n_regimes = std::int64_t{1} << (K + 1);
  // n_oracle subjects per regime: the per-regime empirical survival fractions
  // back the self-check below and need n_oracle-scale Monte Carlo error.
  const std::int64_t per_regime = std::max<std::int64_t>(1, n_oracle);

  LongDataset pooled;
  pooled.study = Study::Two;
  pooled.max_visit = K;

  std::vector<double> emp_surv_always, emp_surv_never;
  std::vector<double> grid;
  for (std::int32_t t = 1; t <= K + 1; ++t) grid.push_back(t);

  for (std::int64_t regime_idx = 0; regime_idx < n_regimes; ++regime_idx) {
    std::vector<int> regime(static_cast<std::size_t>(K) + 1, 0);
    for (std::int32_t k = 0; k <= K; ++k)
      regime[static_cast<std::size_t>(k)] = static_cast<int>((regime_idx >> k) & 1);

    StudyTwoParams params = base;
    params.n = static_cast<std::int32_t>(per_regime);
    params.intervention = regime;
    LongDataset d = simulate_dataset_two(params, static_cast<std::uint64_t>(regime_idx), seed);

    const bool is_always = (regime_idx == n_regimes - 1);
    const bool is_never = (regime_idx == 0);
    if (is_always || is_never) {
      // empirical survival fraction: a subject is dead by t iff its event
      // time is at most t; administratively censored subjects never are
      std::vector<std::int64_t> dead(grid.size(), 0);
      std::int64_t n_sub = 0;
      std::int32_t last_id = -1;
      for (const auto& r : d.rows) {
        if (r.id == last_id) continue;
        last_id = r.id;
        ++n_sub;
      }
      for (const auto& r : d.rows) {
        if (r.y_next != 1) continue;
        for (std::size_t gi = 0; gi < grid.size(); ++gi)
          if (r.t <= grid[gi]) ++dead[gi];
      }
      auto& dst = is_always ? emp_surv_always : emp_surv_never;
      for (std::size_t gi = 0; gi < grid.size(); ++gi)
        dst.push_back(1.0 - static_cast<double>(dead[gi]) / static_cast<double>(n_sub));
    }

    const auto id_offset = static_cast<std::int32_t>(regime_idx * per_regime);
    for (auto r : d.rows) {
      r.id += id_offset;
      pooled.rows.push_back(r);
    }
    pooled.n_subjects += d.n_subjects;
    pooled.nonpositive_hazard_count += d.nonpositive_hazard_count;
  }

  WeightTable unit;
  unit.rows.reserve(pooled.rows.size());
  for (const auto& r : pooled.rows) {
    WeightRow wr;
    wr.id = r.id;
    wr.k = r.k;
    unit.rows.push_back(wr);
  }

  AalenMsmFit fit = fit_aalen_msm(pooled, unit);

  TruthSetTwo truth;
  truth.max_visit = K;
  truth.grid = grid;
  truth.n_oracle = per_regime;
  truth.oracle_seed = seed;
  truth.alpha = base.alpha;
  truth.c_true.assign(static_cast<std::size_t>(K) + 2, std::vector<double>(grid.size(), 0.0));
  for (int col = 0; col < K + 2; ++col)
    for (std::size_t gi = 0; gi < grid.size(); ++gi)
      truth.c_true[static_cast<std::size_t>(col)][gi] = fit.cumulative(col, grid[gi]);

  const std::vector<int> always(static_cast<std::size_t>(K) + 1, 1);
  const std::vector<int> never(static_cast<std::size_t>(K) + 1, 0);
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    truth.survival_always.push_back(survival_aalen(fit, always, grid[gi]));
    truth.survival_never.push_back(survival_aalen(fit, never, grid[gi]));
  }

  // The plug-in and empirical survival routes must agree; a gap means the
  // oracle itself is broken and nothing downstream can be trusted.
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const double da = std::fabs(truth.survival_always[gi] - emp_surv_always[gi]);
    const double dn = std::fabs(truth.survival_never[gi] - emp_surv_never[gi]);
    if (da > 0.01 || dn > 0.01) {
      std::ostringstream msg;
      msg << "compute_truth_two: oracle self-check failed at t=" << grid[gi]
          << " (always: plug-in " << truth.survival_always[gi] << " vs empirical "
          << emp_surv_always[gi] << "; never: " << truth.survival_never[gi] << " vs "
          << emp_surv_never[gi] << "; n_oracle=" << truth.n_oracle << ")";
      throw std::runtime_error(msg.str());
    }
  }
  return truth;
}

TauGridTwo derive_tau_grid_two(std::int64_t n, std::uint64_t seed) {
  StudyTwoParams params;
  params.n = static_cast<std::int32_t>(n);
  LongDataset d = simulate_benchmark_two(params, 0, seed);
  std::vector<double> pool;
  pool.reserve(d.rows.size());
  for (const auto& r : d.rows) pool.push_back(r.l);

  TauGridTwo grid;
  for (double p : grid.probs) grid.computed.push_back(percentile_type7(pool, p));
  return grid;
}

void write_truth_two_file(const std::string& path, const TruthSetTwo& truth) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "#posim-truth2 v1 K=" << truth.max_visit << " n_oracle=" << truth.n_oracle
      << " seed=" << truth.oracle_seed << " alpha=" << format_double(truth.alpha[0]) << ','
      << format_double(truth.alpha[1]) << ',' << format_double(truth.alpha[2]) << ','
      << format_double(truth.alpha[3]) << "\n";
  out << "quantity\tt\tvalue\n";
  for (std::size_t gi = 0; gi < truth.grid.size(); ++gi) {
    out << "C0\t" << format_double(truth.grid[gi]) << '\t'
        << format_double(truth.c_true[0][gi]) << '\n';
    for (std::int32_t j = 0; j <= truth.max_visit; ++j)
      out << "CA" << j << '\t' << format_double(truth.grid[gi]) << '\t'
          << format_double(truth.c_true[static_cast<std::size_t>(j) + 1][gi]) << '\n';
    out << "S_always\t" << format_double(truth.grid[gi]) << '\t'
        << format_double(truth.survival_always[gi]) << '\n';
    out << "S_never\t" << format_double(truth.grid[gi]) << '\t'
        << format_double(truth.survival_never[gi]) << '\n';
  }
}

TruthSetTwo read_truth_two_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::string header;
  if (!std::getline(in, header) || header.rfind("#posim-truth2 v1", 0) != 0)
    throw std::runtime_error("truth file: unknown or missing format header");

  TruthSetTwo truth;
  {
    std::istringstream hs(header.substr(1));
    std::string tok;
    while (hs >> tok) {
      auto eq = tok.find('=');
      if (eq == std::string::npos) continue;
      std::string key = tok.substr(0, eq);
      std::string val = tok.substr(eq + 1);
      if (key == "K") truth.max_visit = std::stoi(val);
      else if (key == "n_oracle") truth.n_oracle = std::stoll(val);
      else if (key == "seed") truth.oracle_seed = std::stoull(val);
      else if (key == "alpha") {
        std::istringstream as(val);
        std::string part;
        int i = 0;
        while (std::getline(as, part, ',') && i < 4) truth.alpha[static_cast<std::size_t>(i++)] = std::stod(part);
      }
    }
  }
  for (std::int32_t t = 1; t <= truth.max_visit + 1; ++t) truth.grid.push_back(t);
  truth.c_true.assign(static_cast<std::size_t>(truth.max_visit) + 2,
                      std::vector<double>(truth.grid.size(), 0.0));
  truth.survival_always.assign(truth.grid.size(), 0.0);
  truth.survival_never.assign(truth.grid.size(), 0.0);

  std::string line;
  std::getline(in, line);  // column header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string quantity, t_s, v_s;
    std::getline(ls, quantity, '\t');
    std::getline(ls, t_s, '\t');
    std::getline(ls, v_s, '\t');
    const double t = std::stod(t_s);
    const double v = std::stod(v_s);
    const auto gi = static_cast<std::size_t>(t - 1.0);
    if (gi >= truth.grid.size()) throw std::runtime_error("truth file: grid time out of range");
    if (quantity == "C0") truth.c_true[0][gi] = v;
    else if (quantity == "S_always") truth.survival_always[gi] = v;
    else if (quantity == "S_never") truth.survival_never[gi] = v;
    else if (quantity.rfind("CA", 0) == 0) {
      const int j = std::stoi(quantity.substr(2));
      truth.c_true[static_cast<std::size_t>(j) + 1][gi] = v;
    }
  }
  return truth;
}

}  // namespace posim
