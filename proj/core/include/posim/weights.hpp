#ifndef POSIM_WEIGHTS_HPP
#define POSIM_WEIGHTS_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "posim/dataset.hpp"
#include "posim/glm.hpp"

namespace posim {

enum class TruncationStrategy { NoWT, P1_99, P2_5_97_5, P5_95, P10_90 };

const char* truncation_name(TruncationStrategy s);
TruncationStrategy truncation_from_name(const std::string& name);

struct WeightRow {
  std::int32_t id = 0;
  std::int32_t k = 0;
  double numerator_prob = 1.0;    // P_num(A_k = a_k | past)
  double denominator_prob = 1.0;  // P_den(A_k = a_k | past)
  double sw = 1.0;                // cumulative stabilized weight up to k
  double sw_truncated = 1.0;
  bool extreme = false;  // denominator probability below 1e-12
};

struct WeightTable {
  std::vector<WeightRow> rows;  // aligned with the dataset rows, same order
  LogisticFit numerator_fit;
  LogisticFit denominator_fit;
  double lower_bound = 0.0;  // truncation bounds actually applied
  double upper_bound = 0.0;
  TruncationStrategy strategy = TruncationStrategy::NoWT;
};

// Study I: pooled logistic models for treatment initiation, fitted on
// check-up person-visits of subjects still untreated entering the visit.
//   numerator covariates (1, k); denominator covariates (1, k, L-500).
// Visit contribution to the product is num/den at the observed treatment;
// after initiation and between check-ups both probabilities are 1.
WeightTable estimate_weights_one(const LongDataset& data, std::int32_t kappa);

// Study II: pooled logistic models over all at-risk person-visits with
// A_{-1} = 0. Numerator covariates (1, A_{k-1}); denominator (1, A_{k-1}, L_k).
WeightTable estimate_weights_two(const LongDataset& data);

// Clamps every sw into the pooled [lower, upper] percentiles of the chosen
// strategy (linear-interpolation "type 7" percentiles). NoWT is the identity.
WeightTable truncate_weights(WeightTable table, TruncationStrategy strategy);

// Type-7 percentile (h = (n-1)p, linear interpolation) of an unsorted sample.
double percentile_type7(std::vector<double> values, double p);

void write_weight_table(std::ostream& out, const WeightTable& table);

}  // namespace posim

#endif
