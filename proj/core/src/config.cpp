#include "posim/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace posim {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::istringstream ss(s);
  std::string p;
  while (std::getline(ss, p, ',')) parts.push_back(trim(p));
  return parts;
}

[[noreturn]] void fail(int line_no, const std::string& msg) {
  throw std::runtime_error("config line " + std::to_string(line_no) + ": " + msg);
}

}  // namespace

std::vector<ScenarioConfig> parse_scenario_config(const std::string& text) {
  ScenarioConfig base;
  std::vector<std::int32_t> n_list = {1000};
  std::vector<double> pi_list = {1.0};
  std::vector<double> tau_list = {0.0};
  std::vector<TruncationStrategy> wt_list = {TruncationStrategy::NoWT};

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (val.empty()) fail(line_no, "empty value for '" + key + "'");

    try {
      if (key == "study") {
        if (val == "1") base.study = Study::One;
        else if (val == "2") base.study = Study::Two;
        else fail(line_no, "study must be 1 or 2");
      } else if (key == "n") {
        n_list.clear();
        for (const auto& v : split_list(val)) {
          const int n = std::stoi(v);
          if (n < 1) fail(line_no, "n must be positive");
          n_list.push_back(n);
        }
      } else if (key == "pi") {
        pi_list.clear();
        for (const auto& v : split_list(val)) {
          const double pi = std::stod(v);
          if (pi < 0.0 || pi > 1.0) fail(line_no, "pi must lie in [0,1]");
          pi_list.push_back(pi);
        }
      } else if (key == "tau") {
        tau_list.clear();
        for (const auto& v : split_list(val)) tau_list.push_back(std::stod(v));
      } else if (key == "wt") {
        wt_list.clear();
        for (const auto& v : split_list(val)) wt_list.push_back(truncation_from_name(v));
      } else if (key == "b") {
        base.replications = std::stoi(val);
        if (base.replications < 1) fail(line_no, "b must be positive");
      } else if (key == "seed") {
        base.master_seed = std::stoull(val);
      } else if (key == "K") {
        base.params_one.n_visits = std::stoi(val);
        base.params_two.n_visits = std::stoi(val);
      } else if (key == "kappa") {
        base.params_one.checkup_spacing = std::stoi(val);
      } else if (key == "gamma") {
        const auto parts = split_list(val);
        if (parts.size() != 4) fail(line_no, "gamma needs 4 values");
        for (int i = 0; i < 4; ++i)
          base.params_one.gamma[static_cast<std::size_t>(i)] = std::stod(parts[static_cast<std::size_t>(i)]);
      } else if (key == "alpha") {
        const auto parts = split_list(val);
        if (parts.size() != 4) fail(line_no, "alpha needs 4 values");
        for (int i = 0; i < 4; ++i)
          base.params_two.alpha[static_cast<std::size_t>(i)] = std::stod(parts[static_cast<std::size_t>(i)]);
      } else if (key == "frailty_variance") {
        base.params_two.frailty_variance = std::stod(val);
      } else {
        fail(line_no, "unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument& e) {
      fail(line_no, e.what());
    } catch (const std::out_of_range&) {
      fail(line_no, "value out of range");
    }
  }

  std::vector<ScenarioConfig> grid;
  for (auto n : n_list)
    for (auto pi : pi_list)
      for (auto tau : tau_list)
        for (auto wt : wt_list) {
          ScenarioConfig sc = base;
          sc.n = n;
          sc.pi = pi;
          sc.tau = tau;
          sc.wt = wt;
          grid.push_back(sc);
        }
  return grid;
}

std::vector<ScenarioConfig> load_scenario_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario_config(text.str());
}

}  // namespace posim
