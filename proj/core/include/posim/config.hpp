#ifndef POSIM_CONFIG_HPP
#define POSIM_CONFIG_HPP

#include <string>
#include <vector>

#include "posim/harness.hpp"

namespace posim {

// Flat key=value scenario config with comma-separated grid lists; the
// scenario set is the cartesian product of n, pi, tau, and wt. Recognized
// keys: study, n, pi, tau, wt, b, seed, K, kappa, gamma, alpha,
// frailty_variance. Unknown keys and malformed lines are reported with
// their line number.
std::vector<ScenarioConfig> parse_scenario_config(const std::string& text);
std::vector<ScenarioConfig> load_scenario_config(const std::string& path);

}  // namespace posim

#endif
