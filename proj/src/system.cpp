#include "cfts/system.hpp"

#include <cmath>
#include <string>

#include "cfts/errors.hpp"

namespace cfts {

double norm2(const State& s) {
  double acc = 0.0;
  for (double x : s) acc += x * x;
  return std::sqrt(acc);
}

VectorField::VectorField(int dim, std::function<State(const State&)> rhs,
                         bool require_zero_fixed)
    : dim(dim), rhs(std::move(rhs)) {
  if (dim <= 0) throw ConfigError("VectorField: dimension must be positive");
  if (!this->rhs) throw ConfigError("VectorField: missing right-hand side");
  const State at_origin = this->rhs(State(dim, 0.0));
  if (static_cast<int>(at_origin.size()) != dim) {
    throw ConfigError("VectorField: right-hand side dimension mismatch");
  }
  if (require_zero_fixed) {
    for (double v : at_origin) {
      if (!(std::abs(v) <= 1e-12)) {
        throw ConfigError(
            "VectorField: the origin is not an equilibrium (|F(0)| > 1e-12)");
      }
    }
  }
}

ImpulseEvent ImpulseEvent::linear(double time, double delay, double gain) {
  ImpulseEvent e;
  e.time = time;
  e.delay = delay;
  e.linear_gain = gain;
  e.map = [gain](const State& s) {
    State out = s;
    for (double& x : out) x *= gain;
    return out;
  };
  return e;
}

void ImpulseSchedule::validate(double t_origin) const {
  if (max_delay < 0.0) {
    throw ConfigError("ImpulseSchedule: negative max_delay");
  }
  double prev = t_origin;
  std::size_t idx = 0;
  for (const ImpulseEvent& e : events) {
    ++idx;
    const std::string tag = "impulse " + std::to_string(idx);
    if (!std::isfinite(e.time)) {
      throw ConfigError("ImpulseSchedule: " + tag + " has non-finite time");
    }
    if (!(e.time > prev)) {
      throw ConfigError("ImpulseSchedule: " + tag +
                        " does not strictly increase the time sequence");
    }
    if (e.delay < 0.0 || e.delay > max_delay) {
      throw ConfigError("ImpulseSchedule: " + tag +
                        " delay outside [0, max_delay]");
    }
    if (e.time - e.delay < prev) {
      throw ConfigError("ImpulseSchedule: " + tag +
                        " delayed lookup reaches before the previous impulse");
    }
    if (!e.map && !e.linear_gain) {
      throw ConfigError("ImpulseSchedule: " + tag + " has no jump map");
    }
    prev = e.time;
  }
}

}  // namespace cfts
