#pragma once

#include <optional>

#include "cfts/trajectory.hpp"

namespace cfts {

struct SimOptions {
  double tol = 1e-8;
  double zero_deadband = 1e-10;
  // Overrides the default origin clamp (measure = euclidean norm at
  // threshold zero_deadband, project = zero fill) when set.
  std::optional<DeadbandPolicy> deadband;
  StepControls step_controls() const;
};

// Simulates the impulsive conformable system over [t0, horizon]:
// between impulses the flow dS/du = F(S) in the frame anchored at the last
// impulse, at each scheduled time t_j the jump map applied to the delayed
// state S(t_j^- - delay_j). An impulse exactly at the horizon is processed;
// the deadband is re-tested after every jump.
Trajectory simulate(const VectorField& field, FractionalOrder order,
                    const State& initial, double t0, double horizon,
                    const ImpulseSchedule& schedule = {},
                    const SimOptions& options = {});

}  // namespace cfts
