#ifndef POSIM_STOCHASTIC_HPP
#define POSIM_STOCHASTIC_HPP

#include <cstdint>
#include <utility>
#include <vector>

namespace posim {

// Purpose tags for the components of a stream path. Every random draw in
// the project is reachable through a (master_seed, path) key, so any
// dataset or oracle can be regenerated without replaying anything else.
enum class StreamLabel : std::uint64_t {
  Scenario = 1,
  Replication = 2,
  Subject = 3,
  Regime = 4,
  Oracle = 5,
};

struct StreamKey {
  std::uint64_t master_seed = 0;
  std::vector<std::pair<StreamLabel, std::uint64_t>> path;

  [[nodiscard]] StreamKey child(StreamLabel label, std::uint64_t index) const {
    StreamKey k = *this;
    k.path.emplace_back(label, index);
    return k;
  }
};

// Counter-based stream: the state is a hash of the key plus a draw counter,
// so sibling streams are independent of iteration order and a stream can be
// handed to any worker by value.
class RngStream {
 public:
  RngStream() = default;
  explicit RngStream(std::uint64_t derived_state) : base_(derived_state) {}

  std::uint64_t next_u64();

  // [0, 1), 53-bit resolution
  double uniform();
  // sd is a standard deviation; sd = 0 returns mean exactly
  double normal(double mean, double sd);
  int bernoulli(double p);

 private:
  std::uint64_t base_ = 0;
  std::uint64_t counter_ = 0;
};

RngStream derive_stream(const StreamKey& key);

// Quantile of the standard normal, needed for deterministic one-uniform
// normal draws (Acklam's rational approximation, |rel err| < 1.2e-9).
double inverse_normal_cdf(double p);

}  // namespace posim

#endif
