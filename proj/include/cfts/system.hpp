#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace cfts {

using State = std::vector<double>;

double norm2(const State& s);

// Right-hand side F of dS/du = F(S) in the rescaled segment variable.
// When require_zero_fixed is set (the default), the constructor verifies
// F(0) = 0 componentwise within 1e-12; the origin must be an equilibrium for
// finite-time stability to be meaningful.
struct VectorField {
  VectorField(int dim, std::function<State(const State&)> rhs,
              bool require_zero_fixed = true);

  State operator()(const State& s) const { return rhs(s); }

  int dim;
  std::function<State(const State&)> rhs;
};

// One impulse: at time t the state is replaced by map(S(t^- - delay)).
// linear_gain is set when the map is s -> gain * s; the simulator then applies
// the multiplication directly so the jump relation holds to machine precision.
struct ImpulseEvent {
  double time = 0.0;
  double delay = 0.0;
  std::function<State(const State&)> map;
  std::optional<double> linear_gain;

  static ImpulseEvent linear(double time, double delay, double gain);
};

struct ImpulseSchedule {
  std::vector<ImpulseEvent> events;
  double max_delay = 0.0;

  // Checks, with t_origin the simulation start: times strictly increasing,
  // 0 <= delay <= max_delay, and every delayed lookup stays inside the
  // segment it interrupts: t_{j-1} <= t_j - delay_j. Throws ConfigError.
  void validate(double t_origin) const;
};

}  // namespace cfts
