#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "cfts/trajectory.hpp"

namespace cfts {

// Lyapunov functional with its claimed decay law. The constructor spot-checks
// positive definiteness: value(0) = 0 and value > 0 on a deterministic set of
// nonzero probe states.
struct LyapunovSpec {
  LyapunovSpec(std::function<double(const State&)> value, double c, double eta,
               int dim);

  std::function<double(const State&)> value;
  double c;
  double eta;
};

struct Violation {
  double time = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct MonitorReport {
  std::vector<Violation> flow_violations;
  std::vector<Violation> jump_violations;
  // Worst observed lhs - rhs over the flow grid (negative when comfortably
  // inside the envelope, ~0 for envelope-attaining trajectories).
  double max_envelope_excess = 0.0;
};

// Grid check of the segment-wise decay envelope
//   V^(1-eta)(t) <= max(V^(1-eta)(t_seg) - alpha (t - t_seg)^q, 0)
// with alpha = c (1-eta)/q. The envelope is clamped at zero because after its
// zero crossing the trajectory is required to sit at V = 0, not below an
// impossible negative energy. Violations are recorded beyond a tolerance of
// 1e-7 (1 + |V^(1-eta)(t_seg)|); they are data, not errors.
// grid_step <= 0 selects 1e-3 of each segment's length.
MonitorReport check_flow_envelope(const Trajectory& traj,
                                  const LyapunovSpec& spec,
                                  double grid_step = 0.0);

// Verifies every recorded jump against its certified factor:
//   V(post) <= beta_j^(1/(1-eta)) V(delayed) within relative tolerance rel_tol.
// beta_per_jump must align with the trajectory's jump list.
MonitorReport check_jump_condition(const Trajectory& traj,
                                   const LyapunovSpec& spec,
                                   const std::vector<double>& beta_per_jump,
                                   double rel_tol = 1e-9);

// Earliest grid time t* with ||sample(t)|| <= eps for every sampled t >= t*
// up to the horizon; empty when the trajectory has not settled by the
// horizon. The grid merges an even subdivision (grid_step <= 0 selects
// (horizon - t0)/4000) with all jump times.
std::optional<double> empirical_settling_time(const Trajectory& traj,
                                              double eps,
                                              double grid_step = 0.0);

}  // namespace cfts
