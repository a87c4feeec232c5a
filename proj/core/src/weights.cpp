#include "posim/weights.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace posim {

namespace {

double inv_logit(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double observed_prob(double p_treat, int a) { return a == 1 ? p_treat : 1.0 - p_treat; }

void check_denominator(double p, WeightRow& row) {
  if (p == 0.0)
    throw std::runtime_error("estimate_weights: denominator probability is exactly 0");
  if (p < 1e-12) row.extreme = true;
}

std::pair<double, double> strategy_percentiles(TruncationStrategy s) {
  switch (s) {
    case TruncationStrategy::P1_99: return {0.01, 0.99};
    case TruncationStrategy::P2_5_97_5: return {0.025, 0.975};
    case TruncationStrategy::P5_95: return {0.05, 0.95};
    case TruncationStrategy::P10_90: return {0.10, 0.90};
    case TruncationStrategy::NoWT: break;
  }
  throw std::logic_error("strategy_percentiles: NoWT has no percentiles");
}

}  // namespace

const char* truncation_name(TruncationStrategy s) {
  switch (s) {
    case TruncationStrategy::NoWT: return "NoWT";
    case TruncationStrategy::P1_99: return "1-99";
    case TruncationStrategy::P2_5_97_5: return "2.5-97.5";
    case TruncationStrategy::P5_95: return "5-95";
    case TruncationStrategy::P10_90: return "10-90";
  }
  return "?";
}

TruncationStrategy truncation_from_name(const std::string& name) {
  if (name == "NoWT") return TruncationStrategy::NoWT;
  if (name == "1-99") return TruncationStrategy::P1_99;
  if (name == "2.5-97.5") return TruncationStrategy::P2_5_97_5;
  if (name == "5-95") return TruncationStrategy::P5_95;
  if (name == "10-90") return TruncationStrategy::P10_90;
  throw std::invalid_argument("unknown truncation strategy: " + name);
}

double percentile_type7(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("percentile_type7: empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = h - std::floor(h);
  return values[lo] + frac * (values[hi] - values[lo]);
}

WeightTable estimate_weights_one(const LongDataset& data, std::int32_t kappa) {
  if (data.study != Study::One) throw std::invalid_argument("estimate_weights_one: study mismatch");
  if (kappa <= 0) throw std::invalid_argument("estimate_weights_one: kappa must be positive");

  // Initiation-model rows: check-up visits of subjects untreated entering.
  std::vector<std::size_t> fit_rows;
  {
    std::int32_t prev_id = -1;
    int prev_a = 0;
    for (std::size_t idx = 0; idx < data.rows.size(); ++idx) {
      const auto& r = data.rows[idx];
      if (r.id != prev_id) {
        prev_id = r.id;
        prev_a = 0;
      }
      const bool decision = (r.k % kappa == 0);
      if (decision && prev_a == 0) fit_rows.push_back(idx);
      prev_a = r.a;
    }
  }
  if (fit_rows.empty()) throw std::runtime_error("estimate_weights_one: no initiation rows");

  const auto m = static_cast<Eigen::Index>(fit_rows.size());
  Eigen::MatrixXd Xn(m, 2), Xd(m, 3);
  Eigen::VectorXd y(m), w = Eigen::VectorXd::Ones(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const auto& r = data.rows[fit_rows[static_cast<std::size_t>(j)]];
    Xn(j, 0) = 1.0;
    Xn(j, 1) = r.k;
    Xd(j, 0) = 1.0;
    Xd(j, 1) = r.k;
    Xd(j, 2) = r.l - 500.0;
    y[j] = r.a;
  }

  WeightTable table;
  table.numerator_fit = fit_weighted_logistic(Xn, y, w);
  table.denominator_fit = fit_weighted_logistic(Xd, y, w);
  const auto& tn = table.numerator_fit.coefficients;
  const auto& td = table.denominator_fit.coefficients;

  table.rows.reserve(data.rows.size());
  std::int32_t prev_id = -1;
  int prev_a = 0;
  double cum = 1.0;
  for (const auto& r : data.rows) {
    if (r.id != prev_id) {
      prev_id = r.id;
      prev_a = 0;
      cum = 1.0;
    }
    WeightRow wr;
    wr.id = r.id;
    wr.k = r.k;
    const bool decision = (r.k % kappa == 0);
    if (decision && prev_a == 0) {
      const double pn = inv_logit(tn[0] + tn[1] * r.k);
      const double pd = inv_logit(td[0] + td[1] * r.k + td[2] * (r.l - 500.0));
      wr.numerator_prob = observed_prob(pn, r.a);
      wr.denominator_prob = observed_prob(pd, r.a);
      check_denominator(wr.denominator_prob, wr);
      cum *= wr.numerator_prob / wr.denominator_prob;
    }
    wr.sw = cum;
    wr.sw_truncated = cum;
    prev_a = r.a;
    table.rows.push_back(wr);
  }

  std::vector<double> pool;
  pool.reserve(table.rows.size());
  for (const auto& wr : table.rows) pool.push_back(wr.sw);
  table.lower_bound = *std::min_element(pool.begin(), pool.end());
  table.upper_bound = *std::max_element(pool.begin(), pool.end());
  return table;
}

WeightTable estimate_weights_two(const LongDataset& data) {
  if (data.study != Study::Two) throw std::invalid_argument("estimate_weights_two: study mismatch");
  if (data.rows.empty()) throw std::runtime_error("estimate_weights_two: empty dataset");

  const auto m = static_cast<Eigen::Index>(data.rows.size());
  Eigen::MatrixXd Xn(m, 2), Xd(m, 3);
  Eigen::VectorXd y(m), w = Eigen::VectorXd::Ones(m);
  {
    std::int32_t prev_id = -1;
    int a_prev = 0;
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto& r = data.rows[static_cast<std::size_t>(j)];
      if (r.id != prev_id) {
        prev_id = r.id;
        a_prev = 0;  // A_{-1} = 0
      }
      Xn(j, 0) = 1.0;
      Xn(j, 1) = a_prev;
      Xd(j, 0) = 1.0;
      Xd(j, 1) = a_prev;
      Xd(j, 2) = r.l;
      y[j] = r.a;
      a_prev = r.a;
    }
  }

  WeightTable table;
  table.numerator_fit = fit_weighted_logistic(Xn, y, w);
  table.denominator_fit = fit_weighted_logistic(Xd, y, w);
  const auto& tn = table.numerator_fit.coefficients;
  const auto& td = table.denominator_fit.coefficients;

  table.rows.reserve(data.rows.size());
  std::int32_t prev_id = -1;
  int a_prev = 0;
  double cum = 1.0;
  for (const auto& r : data.rows) {
    if (r.id != prev_id) {
      prev_id = r.id;
      a_prev = 0;
      cum = 1.0;
    }
    WeightRow wr;
    wr.id = r.id;
    wr.k = r.k;
    const double pn = inv_logit(tn[0] + tn[1] * a_prev);
    const double pd = inv_logit(td[0] + td[1] * a_prev + td[2] * r.l);
    wr.numerator_prob = observed_prob(pn, r.a);
    wr.denominator_prob = observed_prob(pd, r.a);
    check_denominator(wr.denominator_prob, wr);
    cum *= wr.numerator_prob / wr.denominator_prob;
    wr.sw = cum;
    wr.sw_truncated = cum;
    a_prev = r.a;
    table.rows.push_back(wr);
  }

  std::vector<double> pool;
  pool.reserve(table.rows.size());
  for (const auto& wr : table.rows) pool.push_back(wr.sw);
  table.lower_bound = *std::min_element(pool.begin(), pool.end());
  table.upper_bound = *std::max_element(pool.begin(), pool.end());
  return table;
}

WeightTable truncate_weights(WeightTable table, TruncationStrategy strategy) {
  table.strategy = strategy;
  if (strategy == TruncationStrategy::NoWT) {
    for (auto& r : table.rows) r.sw_truncated = r.sw;
    return table;
  }
  const auto [lo_p, hi_p] = strategy_percentiles(strategy);
  std::vector<double> pool;
  pool.reserve(table.rows.size());
  for (const auto& r : table.rows) pool.push_back(r.sw);
  table.lower_bound = percentile_type7(pool, lo_p);
  table.upper_bound = percentile_type7(pool, hi_p);
  for (auto& r : table.rows)
    r.sw_truncated = std::clamp(r.sw, table.lower_bound, table.upper_bound);
  return table;
}

void write_weight_table(std::ostream& out, const WeightTable& table) {
  out << "#posim-weights v1 strategy=" << truncation_name(table.strategy)
      << " lower=" << format_double(table.lower_bound)
      << " upper=" << format_double(table.upper_bound) << "\n";
  out << "id\tk\tnum_prob\tden_prob\tsw\tsw_truncated\textreme\n";
  for (const auto& r : table.rows) {
    out << r.id << '\t' << r.k << '\t' << format_double(r.numerator_prob) << '\t'
        << format_double(r.denominator_prob) << '\t' << format_double(r.sw) << '\t'
        << format_double(r.sw_truncated) << '\t' << (r.extreme ? 1 : 0) << '\n';
  }
}

}  // namespace posim
