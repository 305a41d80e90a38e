#pragma once

#include <optional>
#include <vector>

#include "cfts/integrate.hpp"

namespace cfts {

// What happened at one processed impulse. `pre` is the left limit S(t^-),
// `delayed` the state actually fed to the jump map, S(t^- - delay).
struct JumpRecord {
  double time = 0.0;
  double delay = 0.0;
  State pre;
  State delayed;
  State post;
  std::optional<double> linear_gain;
};

// Piecewise dense trajectory over [start_time, horizon]. Right-continuous:
// at a jump time sample() returns the post-impulse state and sample_pre()
// the pre-impulse limit. Discontinuities occur only at recorded jumps (plus
// sub-deadband projection seams inside segments).
class Trajectory {
 public:
  Trajectory(FractionalOrder order, double start_time, double horizon,
             State initial);

  int dim() const { return static_cast<int>(initial_.size()); }
  FractionalOrder order() const { return order_; }
  double start_time() const { return start_time_; }
  double horizon() const { return horizon_; }
  const State& initial_state() const { return initial_; }

  State sample(double t) const;
  State sample_pre(double t) const;

  const std::vector<SegmentPath>& segments() const { return segments_; }
  const std::vector<JumpRecord>& jumps() const { return jumps_; }

  void append_segment(SegmentPath segment);
  void append_jump(JumpRecord jump);

  // Applies a fixed linear map to every stored vector (dense stages, jump
  // records, initial state), yielding the trajectory of the mapped state.
  // Exact because the dense representation is linear in its vectors. Used to
  // slice drive/response/error views out of a coupled simulation.
  Trajectory mapped(const std::vector<std::vector<double>>& matrix) const;

 private:
  const SegmentPath& segment_for(double t, bool pre) const;

  FractionalOrder order_;
  double start_time_;
  double horizon_;
  State initial_;
  std::vector<SegmentPath> segments_;
  std::vector<JumpRecord> jumps_;
};

}  // namespace cfts
