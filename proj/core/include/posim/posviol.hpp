#ifndef POSIM_POSVIOL_HPP
#define POSIM_POSVIOL_HPP

#include <stdexcept>

namespace posim {

// Which side of the threshold tau marks the poor-health region.
enum class ViolationRegion {
  BelowTau,  // I_tau = [0, tau), study I (low CD4 is poor health)
  AboveTau,  // I_tau = (tau, inf), study II (high biomarker is poor health)
};

struct PositivityPolicy {
  double pi = 1.0;   // exposure cut-off: expected fraction of compliant subjects
  double tau = 0.0;  // rule threshold on the confounder
  ViolationRegion region = ViolationRegion::BelowTau;

  PositivityPolicy() = default;
  PositivityPolicy(double pi_, double tau_, ViolationRegion region_)
      : pi(pi_), tau(tau_), region(region_) {
    if (pi < 0.0 || pi > 1.0) throw std::invalid_argument("PositivityPolicy: pi outside [0,1]");
    if (region == ViolationRegion::BelowTau && tau < 0.0)
      throw std::invalid_argument("PositivityPolicy: tau < 0 with BelowTau region");
  }
};

// True iff the subject-visit is forced into exposure: propensity at or above
// the cut-off and the confounder inside the poor-health region. Boundary
// conventions: p_i == pi counts as forced; the region excludes l == tau.
inline bool is_forced(const PositivityPolicy& policy, double p_i, double l) {
  if (p_i < policy.pi) return false;
  return policy.region == ViolationRegion::BelowTau ? (l >= 0.0 && l < policy.tau)
                                                    : (l > policy.tau);
}

}  // namespace posim

#endif
