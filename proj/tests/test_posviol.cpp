#include <stdexcept>

#include "doctest.h"
#include "posim/posviol.hpp"

using namespace posim;

TEST_CASE("pi = 1 never forces") {
  PositivityPolicy p{1.0, 500.0, ViolationRegion::BelowTau};
  CHECK_FALSE(is_forced(p, 0.0, 100.0));
  CHECK_FALSE(is_forced(p, 0.999999, 100.0));
}

TEST_CASE("pi = 0 forces everyone inside the region") {
  PositivityPolicy p{0.0, 500.0, ViolationRegion::BelowTau};
  CHECK(is_forced(p, 0.0, 100.0));
  CHECK(is_forced(p, 0.7, 499.9));
  CHECK_FALSE(is_forced(p, 0.7, 500.0));  // region excludes l == tau
  CHECK_FALSE(is_forced(p, 0.7, 600.0));
}

TEST_CASE("propensity boundary: p_i == pi counts as forced") {
  PositivityPolicy p{0.5, 500.0, ViolationRegion::BelowTau};
  CHECK(is_forced(p, 0.5, 100.0));
  CHECK_FALSE(is_forced(p, 0.4999, 100.0));
}

TEST_CASE("above-tau region is one-sided and open at tau") {
  PositivityPolicy p{0.05, 1.5, ViolationRegion::AboveTau};
  CHECK(is_forced(p, 0.9, 2.0));
  CHECK_FALSE(is_forced(p, 0.9, 1.5));
  CHECK_FALSE(is_forced(p, 0.9, -3.0));
  CHECK_FALSE(is_forced(p, 0.01, 2.0));
}

TEST_CASE("below-tau region ignores negative confounders") {
  PositivityPolicy p{0.0, 500.0, ViolationRegion::BelowTau};
  CHECK_FALSE(is_forced(p, 0.5, -1.0));
}

TEST_CASE("constructor validates pi and tau") {
  CHECK_THROWS_AS(PositivityPolicy(-0.1, 500.0, ViolationRegion::BelowTau),
                  std::invalid_argument);
  CHECK_THROWS_AS(PositivityPolicy(1.1, 500.0, ViolationRegion::BelowTau),
                  std::invalid_argument);
  CHECK_THROWS_AS(PositivityPolicy(0.5, -1.0, ViolationRegion::BelowTau),
                  std::invalid_argument);
  CHECK_NOTHROW(PositivityPolicy(0.5, -1.0, ViolationRegion::AboveTau));
}
