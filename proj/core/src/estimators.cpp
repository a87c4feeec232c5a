#include "posim/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace posim {

namespace {

double inv_logit(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

int gform_width(GForm gform, std::int32_t max_visit) {
  switch (gform) {
    case GForm::CurrentLevel: return 1;
    case GForm::Duration: return 1;
    case GForm::MainEffectTerms: return max_visit + 1;
    case GForm::HavercroftD1AD3: return 3;
  }
  return 0;
}

std::vector<double> expand_gform(GForm gform, const std::vector<int>& history,
                                 std::int32_t max_visit) {
  if (history.empty()) throw std::invalid_argument("expand_gform: empty history");
  const auto k = static_cast<std::int32_t>(history.size()) - 1;
  switch (gform) {
    case GForm::CurrentLevel:
      return {static_cast<double>(history.back())};
    case GForm::Duration: {
      double s = 0.0;
      for (int a : history) s += a;
      return {s};
    }
    case GForm::MainEffectTerms: {
      std::vector<double> cols(static_cast<std::size_t>(max_visit) + 1, 0.0);
      for (std::int32_t j = 0; j <= k; ++j)
        cols[static_cast<std::size_t>(j)] = history[static_cast<std::size_t>(k - j)];
      return cols;
    }
    case GForm::HavercroftD1AD3: {
      std::int32_t k_star = -1;
      for (std::int32_t j = 0; j <= k; ++j) {
        if (history[static_cast<std::size_t>(j)] == 1) {
          k_star = j;
          break;
        }
      }
      const int a = history.back();
      const double d1 = (k_star >= 0) ? std::min(k, k_star) : k;
      const double d3 = (a == 1) ? std::max(k - k_star, 0) : 0.0;
      return {d1, static_cast<double>(a), d3};
    }
  }
  throw std::logic_error("expand_gform: unknown g-form");
}

LogitMsmFit fit_logit_msm(const LongDataset& data, const WeightTable& weights, GForm gform) {
  if (weights.rows.size() != data.rows.size())
    throw std::invalid_argument("fit_logit_msm: weight table not aligned with dataset");
  const int width = gform_width(gform, data.max_visit);
  const auto m = static_cast<Eigen::Index>(data.rows.size());

  Eigen::MatrixXd X(m, width + 1);
  Eigen::VectorXd y(m), w(m);
  std::vector<int> history;
  std::int32_t prev_id = -1;
  for (Eigen::Index j = 0; j < m; ++j) {
    const auto& r = data.rows[static_cast<std::size_t>(j)];
    const auto& wr = weights.rows[static_cast<std::size_t>(j)];
    if (r.id != wr.id || r.k != wr.k)
      throw std::invalid_argument("fit_logit_msm: weight row misaligned");
    if (r.id != prev_id) {
      prev_id = r.id;
      history.clear();
    }
    history.push_back(r.a);
    const auto cols = expand_gform(gform, history, data.max_visit);
    X(j, 0) = 1.0;
    for (int c = 0; c < width; ++c) X(j, c + 1) = cols[static_cast<std::size_t>(c)];
    y[j] = r.y_next;
    w[j] = wr.sw_truncated;
  }

  LogitMsmFit fit;
  fit.diagnostics = fit_weighted_logistic(X, y, w);
  fit.gamma_hat = fit.diagnostics.coefficients;
  return fit;
}

double AalenMsmFit::cumulative(int col, double t) const {
  double c = 0.0;
  for (std::size_t i = 0; i < event_times.size() && event_times[i] <= t; ++i)
    c += increments(static_cast<Eigen::Index>(i), col);
  return c;
}

AalenMsmFit fit_aalen_msm(const LongDataset& data, const WeightTable& weights) {
  if (data.study != Study::Two) throw std::invalid_argument("fit_aalen_msm: study-II data required");
  if (weights.rows.size() != data.rows.size())
    throw std::invalid_argument("fit_aalen_msm: weight table not aligned with dataset");
  const std::int32_t K = data.max_visit;
  const int n_cols = K + 2;

  // Per-subject treatment history, per-visit weight, event time and status.
  struct SubjectInfo {
    std::vector<int> history;
    std::vector<double> weight;
    double t = 0.0;
    bool event = false;
  };
  std::map<std::int32_t, SubjectInfo> subjects;
  for (std::size_t j = 0; j < data.rows.size(); ++j) {
    const auto& r = data.rows[j];
    auto& s = subjects[r.id];
    s.history.push_back(r.a);
    s.weight.push_back(weights.rows[j].sw_truncated);
    s.t = r.t;
    if (r.y_next == 1) s.event = true;
  }

  // Ordered distinct event times; float ties share one increment.
  std::vector<double> times;
  for (const auto& [id, s] : subjects)
    if (s.event) times.push_back(s.t);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  AalenMsmFit fit;
  fit.max_visit = K;
  fit.event_times = times;
  fit.increments = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(times.size()), n_cols);
  fit.estimated.assign(times.size(), std::vector<bool>(static_cast<std::size_t>(n_cols), false));

  // Within an interval [k, k+1) every at-risk subject contributes a fixed 0/1
  // treatment-history row and a fixed weight, so the risk set collapses into at
  // most 2^(k+1) covariate patterns. We keep a weight total per pattern,
  // deflate it as subjects die, and solve each increment on the compacted
  // pattern design, whose Gram matrix equals that of the full risk-set design.
  std::size_t ti = 0;
  for (std::int32_t kf = 0; kf <= K && ti < times.size(); ++kf) {
    const int p = kf + 2;  // intercept + lags 0..kf
    const std::size_t n_pat = std::size_t{1} << (kf + 1);

    std::vector<double> pat_weight(n_pat, 0.0);
    std::vector<std::int64_t> pat_count(n_pat, 0);
    std::int64_t n_risk = 0;

    auto pattern_of = [&](const SubjectInfo& s) {
      std::size_t pid = 0;
      for (std::int32_t j = 0; j <= kf; ++j)
        if (s.history[static_cast<std::size_t>(kf - j)] == 1) pid |= std::size_t{1} << j;
      return pid;
    };

    // Subjects dying inside this interval, ascending in time, for removal and
    // for the dN right-hand side.
    std::vector<const SubjectInfo*> deaths;
    for (const auto& [id, s] : subjects) {
      if (static_cast<std::int32_t>(s.history.size()) <= kf || s.t <= kf) continue;
      const std::size_t pid = pattern_of(s);
      pat_weight[pid] += s.weight[static_cast<std::size_t>(kf)];
      ++pat_count[pid];
      ++n_risk;
      if (s.event && s.t < kf + 1) deaths.push_back(&s);
    }
    std::stable_sort(deaths.begin(), deaths.end(),
                     [](const SubjectInfo* a, const SubjectInfo* b) { return a->t < b->t; });

    std::size_t di = 0;
    while (ti < times.size() && times[ti] < kf + 1) {
      const double t = times[ti];
      // Subjects with earlier events have left the risk set.
      while (di < deaths.size() && deaths[di]->t < t) {
        const SubjectInfo& s = *deaths[di];
        const std::size_t pid = pattern_of(s);
        pat_weight[pid] -= s.weight[static_cast<std::size_t>(kf)];
        --pat_count[pid];
        --n_risk;
        ++di;
      }
      std::vector<double> dead_weight(n_pat, 0.0);
      for (std::size_t dj = di; dj < deaths.size() && deaths[dj]->t == t; ++dj)
        dead_weight[pattern_of(*deaths[dj])] += deaths[dj]->weight[static_cast<std::size_t>(kf)];
      if (n_risk < p) {
        // nothing identifiable at this time
        ++ti;
        continue;
      }

      Eigen::Index nr = 0;
      for (std::size_t pid = 0; pid < n_pat; ++pid)
        if (pat_count[pid] > 0) ++nr;
      Eigen::MatrixXd Xw(nr, p);
      Eigen::VectorXd yw(nr);
      Eigen::Index r = 0;
      for (std::size_t pid = 0; pid < n_pat; ++pid) {
        if (pat_count[pid] <= 0) continue;
        const double sw = std::sqrt(std::max(pat_weight[pid], 0.0));
        Xw(r, 0) = sw;
        for (std::int32_t j = 0; j <= kf; ++j)
          Xw(r, 1 + j) = ((pid >> j) & 1) ? sw : 0.0;
        yw[r] = (sw > 0.0) ? dead_weight[pid] / sw : 0.0;
        ++r;
      }

      // Weighted least squares with rank detection; unidentified columns are
      // dropped for this increment.
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xw);
      qr.setThreshold(1e-10);
      const auto rank = qr.rank();
      const auto perm = qr.colsPermutation().indices();
      if (rank == p) {
        Eigen::VectorXd dc = qr.solve(yw);
        for (int c = 0; c < p; ++c) {
          fit.increments(static_cast<Eigen::Index>(ti), c) = dc[c];
          fit.estimated[ti][static_cast<std::size_t>(c)] = true;
          if (dc[c] < 0.0) ++fit.negative_increment_count;
        }
      } else {
        Eigen::MatrixXd Xsub(Xw.rows(), rank);
        for (Eigen::Index c = 0; c < rank; ++c) Xsub.col(c) = Xw.col(perm[c]);
        Eigen::VectorXd dc = Xsub.colPivHouseholderQr().solve(yw);
        for (Eigen::Index c = 0; c < rank; ++c) {
          fit.increments(static_cast<Eigen::Index>(ti), perm[c]) = dc[c];
          fit.estimated[ti][static_cast<std::size_t>(perm[c])] = true;
          if (dc[c] < 0.0) ++fit.negative_increment_count;
        }
      }
      ++ti;
    }
  }
  return fit;
}

double survival_logit(const Eigen::VectorXd& gamma, GForm gform, const std::vector<int>& regime,
                      std::int32_t t) {
  if (t < 0) throw std::invalid_argument("survival_logit: negative horizon");
  if (static_cast<std::int32_t>(regime.size()) < t)
    throw std::invalid_argument("survival_logit: regime shorter than horizon");
  double surv = 1.0;
  std::vector<int> history;
  for (std::int32_t k = 0; k < t; ++k) {
    history.push_back(regime[static_cast<std::size_t>(k)]);
    const auto cols = expand_gform(gform, history, t - 1);
    double eta = gamma[0];
    for (std::size_t c = 0; c < cols.size(); ++c) eta += gamma[static_cast<Eigen::Index>(c + 1)] * cols[c];
    surv *= 1.0 - inv_logit(eta);
  }
  return surv;
}

double survival_aalen(const AalenMsmFit& fit, const std::vector<int>& regime, double t) {
  if (static_cast<std::int32_t>(regime.size()) < fit.max_visit + 1)
    throw std::invalid_argument("survival_aalen: regime shorter than K+1");
  double cum = 0.0;
  for (std::size_t i = 0; i < fit.event_times.size(); ++i) {
    const double s = fit.event_times[i];
    if (s > t) break;
    const auto kf = static_cast<std::int32_t>(std::floor(s));
    double term = fit.increments(static_cast<Eigen::Index>(i), 0);
    for (std::int32_t j = 0; j <= kf && j <= fit.max_visit; ++j)
      term += regime[static_cast<std::size_t>(kf - j)] *
              fit.increments(static_cast<Eigen::Index>(i), 1 + j);
    cum += term;
  }
  return std::exp(-cum);
}

}  // namespace posim
