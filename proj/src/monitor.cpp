#include "cfts/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cfts/errors.hpp"

namespace cfts {

namespace {

std::vector<double> segment_grid(double t_begin, double t_end, double step) {
  std::vector<double> grid;
  if (!(t_end > t_begin)) {
    grid.push_back(t_begin);
    return grid;
  }
  const double h = step > 0.0 ? step : 1e-3 * (t_end - t_begin);
  const auto count = static_cast<std::size_t>(
      std::ceil((t_end - t_begin) / h - 1e-9));
  grid.reserve(count + 1);
  for (std::size_t i = 0; i < count; ++i) {
    grid.push_back(std::min(t_begin + static_cast<double>(i) * h, t_end));
  }
  grid.push_back(t_end);
  return grid;
}

}  // namespace

LyapunovSpec::LyapunovSpec(std::function<double(const State&)> value, double c,
                           double eta, int dim)
    : value(std::move(value)), c(c), eta(eta) {
  if (!this->value) {
    throw std::invalid_argument("LyapunovSpec: missing value function");
  }
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw std::invalid_argument("LyapunovSpec: decay rate c must be > 0");
  }
  if (!(eta > 0.0) || !(eta < 1.0)) {
    throw std::invalid_argument("LyapunovSpec: eta must lie in (0, 1)");
  }
  if (dim <= 0) {
    throw std::invalid_argument("LyapunovSpec: dimension must be positive");
  }

  const State origin(static_cast<std::size_t>(dim), 0.0);
  if (std::abs(this->value(origin)) > 1e-12) {
    throw std::invalid_argument("LyapunovSpec: value at the origin is not 0");
  }
  for (int i = 0; i < dim; ++i) {
    for (double scale : {1.0, -1.0, 1e-3}) {
      State probe(static_cast<std::size_t>(dim), 0.0);
      probe[static_cast<std::size_t>(i)] = scale;
      if (!(this->value(probe) > 0.0)) {
        throw std::invalid_argument(
            "LyapunovSpec: value is not positive on a nonzero probe state");
      }
    }
  }
}

MonitorReport check_flow_envelope(const Trajectory& traj,
                                  const LyapunovSpec& spec, double grid_step) {
  MonitorReport report;
  const double q = traj.order().value();
  const double alpha = spec.c * (1.0 - spec.eta) / q;
  const double p = 1.0 - spec.eta;

  for (const SegmentPath& seg : traj.segments()) {
    const double w0 = std::pow(spec.value(seg.start_state()), p);
    const double tol = 1e-7 * (1.0 + std::abs(w0));
    for (double t : segment_grid(seg.t_begin(), seg.t_end(), grid_step)) {
      const double lhs = std::pow(spec.value(seg.state_at(t)), p);
      const double rhs =
          std::max(w0 - alpha * std::pow(t - seg.t_begin(), q), 0.0);
      report.max_envelope_excess =
          std::max(report.max_envelope_excess, lhs - rhs);
      if (lhs > rhs + tol) {
        report.flow_violations.push_back({t, lhs, rhs});
      }
    }
  }
  return report;
}

MonitorReport check_jump_condition(const Trajectory& traj,
                                   const LyapunovSpec& spec,
                                   const std::vector<double>& beta_per_jump,
                                   double rel_tol) {
  if (beta_per_jump.size() != traj.jumps().size()) {
    throw ConfigError("check_jump_condition: expected one jump factor per "
                      "recorded jump");
  }
  MonitorReport report;
  const double exponent = 1.0 / (1.0 - spec.eta);
  for (std::size_t j = 0; j < traj.jumps().size(); ++j) {
    const JumpRecord& jump = traj.jumps()[j];
    const double lhs = spec.value(jump.post);
    const double rhs =
        std::pow(beta_per_jump[j], exponent) * spec.value(jump.delayed);
    const double tol = rel_tol * std::max(std::abs(lhs), std::abs(rhs));
    if (lhs > rhs + tol) {
      report.jump_violations.push_back({jump.time, lhs, rhs});
    }
  }
  return report;
}

std::optional<double> empirical_settling_time(const Trajectory& traj,
                                              double eps, double grid_step) {
  if (!(eps > 0.0)) {
    throw ConfigError("empirical_settling_time: eps must be > 0");
  }
  const double t0 = traj.start_time();
  const double horizon = traj.horizon();
  const double h = grid_step > 0.0 ? grid_step : (horizon - t0) / 4000.0;

  std::vector<double> grid;
  for (double t = t0; t < horizon; t += h) grid.push_back(t);
  grid.push_back(horizon);
  for (const JumpRecord& jump : traj.jumps()) grid.push_back(jump.time);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [&](double a, double b) {
                           return std::abs(a - b) <= 1e-12 * (1.0 + horizon);
                         }),
             grid.end());

  // Scan from the horizon backwards for the last sample above eps; settling
  // starts at the following grid point.
  std::size_t settled_from = grid.size();
  for (std::size_t i = grid.size(); i-- > 0;) {
    if (norm2(traj.sample(grid[i])) > eps) break;
    settled_from = i;
  }
  if (settled_from == grid.size()) return std::nullopt;
  return grid[settled_from];
}

}  // namespace cfts
