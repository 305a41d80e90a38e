#include "cfts/trajectory.hpp"

#include <cmath>
#include <stdexcept>

#include "cfts/errors.hpp"

namespace cfts {

Trajectory::Trajectory(FractionalOrder order, double start_time,
                       double horizon, State initial)
    : order_(order),
      start_time_(start_time),
      horizon_(horizon),
      initial_(std::move(initial)) {
  if (!(horizon > start_time)) {
    throw ConfigError("Trajectory: horizon must exceed the start time");
  }
}

void Trajectory::append_segment(SegmentPath segment) {
  segments_.push_back(std::move(segment));
}

void Trajectory::append_jump(JumpRecord jump) {
  jumps_.push_back(std::move(jump));
}

const SegmentPath& Trajectory::segment_for(double t, bool pre) const {
  if (segments_.empty()) {
    throw std::domain_error("Trajectory: no segments recorded");
  }
  if (t < start_time_ || t > horizon_) {
    throw std::domain_error("Trajectory: sample time outside [t0, horizon]");
  }
  // Right-continuous lookup: the last segment starting at or before t.
  // Pre-impulse lookup: the last segment starting strictly before t.
  std::size_t lo = 0, hi = segments_.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi + 1) / 2;
    const double begin = segments_[mid].t_begin();
    if (pre ? (begin < t) : (begin <= t)) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return segments_[lo];
}

State Trajectory::sample(double t) const {
  const SegmentPath& seg = segment_for(t, /*pre=*/false);
  return seg.state_at(t);
}

State Trajectory::sample_pre(double t) const {
  if (t == start_time_) return initial_;
  const SegmentPath& seg = segment_for(t, /*pre=*/true);
  if (t >= seg.t_end()) return seg.end_state();
  return seg.state_at(t);
}

Trajectory Trajectory::mapped(
    const std::vector<std::vector<double>>& matrix) const {
  const std::size_t rows = matrix.size();
  const std::size_t cols = initial_.size();
  for (const auto& row : matrix) {
    if (row.size() != cols) {
      throw ConfigError("Trajectory::mapped: matrix column mismatch");
    }
  }
  auto apply = [&](const State& v) {
    State out(rows, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      double acc = 0.0;
      for (std::size_t c = 0; c < cols; ++c) acc += matrix[r][c] * v[c];
      out[r] = acc;
    }
    return out;
  };

  Trajectory out(order_, start_time_, horizon_, apply(initial_));
  for (const SegmentPath& seg : segments_) {
    SegmentPath mapped_seg(seg.frame(), seg.t_end(), apply(seg.start_state()));
    for (const DenseStep& step : seg.steps()) {
      DenseStep m;
      m.u0 = step.u0;
      m.h = step.h;
      m.y0 = apply(step.y0);
      for (int s = 0; s < 7; ++s) m.k[s] = apply(step.k[s]);
      mapped_seg.append_step(std::move(m), State(rows, 0.0));
    }
    mapped_seg.set_end_state(apply(seg.end_state()));
    out.append_segment(std::move(mapped_seg));
  }
  for (const JumpRecord& j : jumps_) {
    JumpRecord m;
    m.time = j.time;
    m.delay = j.delay;
    m.pre = apply(j.pre);
    m.delayed = apply(j.delayed);
    m.post = apply(j.post);
    m.linear_gain = j.linear_gain;
    out.append_jump(std::move(m));
  }
  return out;
}

}  // namespace cfts
