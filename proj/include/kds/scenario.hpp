#pragma once

#include "kds/cones.hpp"
#include "kds/motion.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kds {

// Line-oriented scenario text: header directives (d, s, theta or eps,
// horizon, seed) followed by one `point` record per moving point with exact
// rational coefficients, constant term first, dimensions separated by '|'.
struct Scenario {
  int dim = 2;
  int max_degree = 2;  // s
  std::optional<Angle> theta;  // default pi/3 when neither theta nor eps set
  std::optional<Rat> eps;
  Rat horizon = 1;
  uint64_t seed = 0;
  std::vector<Trajectory> points;  // sorted by id ascending

  Angle effective_theta() const;
};

struct ScenarioError {
  int line = 0;
  int column = 0;
  std::string message;
  std::string str() const;
};

// Parses scenario text; throws ScenarioError on malformed input.
Scenario parse_scenario(const std::string& text);
std::string serialize_scenario(const Scenario& s);

struct GenParams {
  int n = 16;
  int dim = 2;
  int degree = 1;  // trajectory degree s
  uint64_t seed = 1;
  Rat horizon = 1;
  std::optional<Rat> eps;
};
Scenario generate_scenario(const GenParams& p);

}  // namespace kds
