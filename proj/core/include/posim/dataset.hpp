#ifndef POSIM_DATASET_HPP
#define POSIM_DATASET_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace posim {

enum class Study { One, Two };

// One subject-visit row, the universal exchange format. Study I uses
// (id, k, a, l, k_star, y_next, forced); study II additionally carries the
// subject frailty u and the event/censoring time t (constant per subject).
struct VisitRecord {
  std::int32_t id = 0;
  std::int32_t k = 0;
  std::int32_t a = 0;
  double l = 0.0;
  std::int32_t k_star = kNoInitiation;  // treatment initiation visit, study I
  double u = 0.0;
  double t = 0.0;
  std::int32_t y_next = 0;
  bool forced = false;

  static constexpr std::int32_t kNoInitiation = -1;
};

struct LongDataset {
  Study study = Study::One;
  std::int32_t n_subjects = 0;
  std::int32_t max_visit = 0;  // K
  std::vector<VisitRecord> rows;
  // diagnostics accumulated during generation
  std::int64_t nonpositive_hazard_count = 0;
  std::int64_t forced_count = 0;
};

// Versioned tab-delimited serialization; values use shortest round-trip
// decimal representation so re-reading is bit-exact.
void write_dataset(std::ostream& out, const LongDataset& data);
void write_dataset_file(const std::string& path, const LongDataset& data);
LongDataset read_dataset(std::istream& in);
LongDataset read_dataset_file(const std::string& path);

// Shortest decimal string that round-trips the double exactly.
std::string format_double(double x);

}  // namespace posim

#endif
