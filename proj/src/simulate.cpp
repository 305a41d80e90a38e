#include "cfts/simulate.hpp"

#include <cmath>

#include "cfts/errors.hpp"

namespace cfts {

StepControls SimOptions::step_controls() const {
  StepControls c;
  c.tol = tol;
  return c;
}

Trajectory simulate(const VectorField& field, FractionalOrder order,
                    const State& initial, double t0, double horizon,
                    const ImpulseSchedule& schedule,
                    const SimOptions& options) {
  if (static_cast<int>(initial.size()) != field.dim) {
    throw ConfigError("simulate: initial state dimension mismatch");
  }
  schedule.validate(t0);

  const DeadbandPolicy policy =
      options.deadband ? *options.deadband
                       : DeadbandPolicy::zero_clamp(options.zero_deadband);
  const StepControls controls = options.step_controls();

  // Jump maps must preserve the origin or the zero continuation breaks.
  for (const ImpulseEvent& e : schedule.events) {
    if (e.time > horizon) break;
    if (e.linear_gain) continue;
    const State mapped = e.map(State(field.dim, 0.0));
    for (double v : mapped) {
      if (!(std::abs(v) <= 1e-12)) {
        throw ConfigError("simulate: jump map does not preserve the origin");
      }
    }
  }

  Trajectory traj(order, t0, horizon, initial);
  State current = initial;
  double t_cur = t0;

  auto maybe_project = [&](State& s) {
    if (policy.measure && policy.measure(s) <= policy.threshold) {
      policy.project(s);
    }
  };

  for (std::size_t idx = 0; idx <= schedule.events.size(); ++idx) {
    const bool has_event = idx < schedule.events.size() &&
                           schedule.events[idx].time <= horizon;
    const double t_next = has_event ? schedule.events[idx].time : horizon;

    SegmentFrame frame{t_cur, order};
    SegmentPath path =
        integrate_segment(field, current, frame, t_next, controls, &policy);
    current = path.end_state();

    if (has_event) {
      const ImpulseEvent& event = schedule.events[idx];
      const double t_read = event.time - event.delay;
      if (t_read < t_cur) {
        throw ConfigError("simulate: delayed lookup left the current segment");
      }
      const State pre = current;
      const State delayed =
          event.delay == 0.0 ? pre : path.state_at(t_read);
      State post;
      if (event.linear_gain) {
        post = delayed;
        for (double& x : post) x *= *event.linear_gain;
      } else {
        post = event.map(delayed);
        if (static_cast<int>(post.size()) != field.dim) {
          throw ConfigError("simulate: jump map dimension mismatch");
        }
      }
      for (double v : post) {
        if (!std::isfinite(v)) {
          throw IntegrationError("simulate: non-finite post-impulse state",
                                 event.time, pre);
        }
      }
      traj.append_segment(std::move(path));
      JumpRecord record;
      record.time = event.time;
      record.delay = event.delay;
      record.pre = pre;
      record.delayed = delayed;
      record.post = post;
      record.linear_gain = event.linear_gain;
      traj.append_jump(std::move(record));

      current = post;
      maybe_project(current);  // impulse first, then the deadband re-test
      t_cur = event.time;
      if (t_cur == horizon) {
        // Jump exactly at the horizon: expose the post state through a
        // zero-length closing segment so sampling stays right-continuous.
        traj.append_segment(SegmentPath({t_cur, order}, horizon, current));
        return traj;
      }
    } else {
      traj.append_segment(std::move(path));
      return traj;
    }
  }
  return traj;
}

}  // namespace cfts
