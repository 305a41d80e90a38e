#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "cfts/conformable.hpp"
#include "cfts/system.hpp"

namespace cfts {

// One accepted step of the embedded pair, with everything the quartic
// interpolant needs. Valid for u in [u0, u0 + h].
struct DenseStep {
  double u0 = 0.0;
  double h = 0.0;
  State y0;
  std::array<State, 7> k;

  State eval(double u) const;
};

// Dense flow record for one inter-impulse segment, in the frame anchored at
// the segment start. Continuous up to integrator tolerance; consecutive
// steps may disagree by at most the deadband threshold when a projection
// fired between them.
class SegmentPath {
 public:
  SegmentPath(SegmentFrame frame, double t_end, State start);

  const SegmentFrame& frame() const { return frame_; }
  double t_begin() const { return frame_.t_start; }
  double t_end() const { return t_end_; }
  double u_end() const { return u_end_; }

  State state_at_u(double u) const;
  State state_at(double t) const;
  const State& start_state() const { return start_; }
  const State& end_state() const { return end_; }

  const std::vector<DenseStep>& steps() const { return steps_; }

  void append_step(DenseStep step, const State& y_next);
  void set_end_state(const State& y) { end_ = y; }

 private:
  SegmentFrame frame_;
  double t_end_;
  double u_end_;
  State start_;
  State end_;
  std::vector<DenseStep> steps_;
};

// Optional projection applied after each accepted step: once
// measure(state) <= threshold the state is replaced by project(state).
// The default policy in simulate() measures the euclidean norm and projects
// to the origin, realizing the exact-zero continuation of finite-time
// stable trajectories.
struct DeadbandPolicy {
  double threshold = 1e-10;
  std::function<double(const State&)> measure;
  std::function<void(State&)> project;

  static DeadbandPolicy zero_clamp(double threshold);
};

struct StepControls {
  double tol = 1e-8;           // local error target per step (abs and rel)
  double u_step_floor = 1e-10; // forced-progress floor in conformable time
  std::size_t max_steps = 20'000'000;
};

// Integrates dS/du = F(S) from the segment anchor to t_end with an adaptive
// embedded Dormand-Prince 5(4) pair and fourth-order dense output.
// Errors: non-finite state or field output, blow-up at the step floor, or an
// exhausted step budget raise IntegrationError carrying the last good time.
SegmentPath integrate_segment(const VectorField& field, const State& start,
                              const SegmentFrame& frame, double t_end,
                              const StepControls& controls = {},
                              const DeadbandPolicy* deadband = nullptr);

}  // namespace cfts
