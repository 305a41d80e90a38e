#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cfts {

// Invalid or inconsistent problem description (bad parameters, malformed
// schedules, malformed config documents). Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical integration could not continue (non-finite state or field output,
// step budget exhausted, blow-up). Carries the last time that was still good
// and a snapshot of the state there. Maps to CLI exit code 3.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double last_good_time,
                   std::vector<double> state_snapshot)
      : std::runtime_error(what),
        last_good_time(last_good_time),
        state_snapshot(std::move(state_snapshot)) {}

  double last_good_time;
  std::vector<double> state_snapshot;
};

}  // namespace cfts
