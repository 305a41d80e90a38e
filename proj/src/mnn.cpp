#include "cfts/mnn.hpp"

#include <algorithm>
#include <cmath>

#include "cfts/errors.hpp"

namespace cfts {

namespace {

constexpr double kSgnDeadZone = 1e-12;

double dead_zone_sgn(double v) {
  if (std::abs(v) <= kSgnDeadZone) return 0.0;
  return v > 0.0 ? 1.0 : -1.0;
}

double saturated_sgn(double v, double layer) {
  if (layer <= 0.0) return dead_zone_sgn(v);
  return std::clamp(v / layer, -1.0, 1.0);
}

void require_square(const std::vector<std::vector<double>>& m, int n,
                    const char* what) {
  if (static_cast<int>(m.size()) != n) {
    throw ConfigError(std::string("MemristiveNetwork: ") + what +
                      " must have one row per neuron");
  }
  for (const auto& row : m) {
    if (static_cast<int>(row.size()) != n) {
      throw ConfigError(std::string("MemristiveNetwork: ") + what +
                        " rows must have one entry per neuron");
    }
    for (double w : row) {
      if (!std::isfinite(w)) {
        throw ConfigError(std::string("MemristiveNetwork: ") + what +
                          " has a non-finite weight");
      }
    }
  }
}

}  // namespace

void MemristiveNetwork::validate() const {
  if (n <= 0) throw ConfigError("MemristiveNetwork: need at least one neuron");
  const auto un = static_cast<std::size_t>(n);
  if (decay.size() != un || threshold.size() != un ||
      activation.size() != un || input.size() != un) {
    throw ConfigError(
        "MemristiveNetwork: decay, threshold, activation, and input must "
        "all have one entry per neuron");
  }
  require_square(weight_inner, n, "inner weights");
  require_square(weight_outer, n, "outer weights");
  for (int r = 0; r < n; ++r) {
    const auto ur = static_cast<std::size_t>(r);
    if (!(decay[ur] > 0.0) || !std::isfinite(decay[ur])) {
      throw ConfigError("MemristiveNetwork: decay rates must be > 0");
    }
    if (!(threshold[ur] > 0.0) || !std::isfinite(threshold[ur])) {
      throw ConfigError("MemristiveNetwork: switching thresholds must be > 0");
    }
    if (!std::isfinite(input[ur])) {
      throw ConfigError("MemristiveNetwork: external inputs must be finite");
    }
    const Activation& act = activation[ur];
    if (!act.fn) {
      throw ConfigError("MemristiveNetwork: missing activation function");
    }
    if (!(act.lipschitz > 0.0) || !(act.bound >= 0.0)) {
      throw ConfigError(
          "MemristiveNetwork: activation needs lipschitz > 0 and bound >= 0");
    }
    // Spot-check the declared Lipschitz constant and bound on fixed probes.
    const double probes[] = {-2.7, -1.0, -0.3, 0.0, 0.4, 1.1, 3.2};
    for (double p : probes) {
      const double fp = act.fn(p);
      if (!std::isfinite(fp) || std::abs(fp) > act.bound + 1e-9) {
        throw ConfigError(
            "MemristiveNetwork: activation exceeds its declared bound");
      }
      for (double pp : probes) {
        if (std::abs(act.fn(p) - act.fn(pp)) >
            act.lipschitz * std::abs(p - pp) + 1e-9) {
          throw ConfigError(
              "MemristiveNetwork: activation exceeds its declared Lipschitz "
              "constant");
        }
      }
    }
  }
}

double MemristiveNetwork::weight_max(int r, int s) const {
  const auto ur = static_cast<std::size_t>(r);
  const auto us = static_cast<std::size_t>(s);
  return std::max(std::abs(weight_inner[ur][us]),
                  std::abs(weight_outer[ur][us]));
}

double MemristiveNetwork::weight_min(int r, int s) const {
  const auto ur = static_cast<std::size_t>(r);
  const auto us = static_cast<std::size_t>(s);
  return std::min(std::abs(weight_inner[ur][us]),
                  std::abs(weight_outer[ur][us]));
}

double MemristiveNetwork::weight_mid(int r, int s) const {
  const auto ur = static_cast<std::size_t>(r);
  const auto us = static_cast<std::size_t>(s);
  return 0.5 * (weight_inner[ur][us] + weight_outer[ur][us]);
}

double MemristiveNetwork::weight_dev(int r, int s) const {
  const auto ur = static_cast<std::size_t>(r);
  const auto us = static_cast<std::size_t>(s);
  return 0.5 * std::abs(weight_inner[ur][us] - weight_outer[ur][us]);
}

void ControllerGains::validate(int n) const {
  const auto un = static_cast<std::size_t>(n);
  if (linear.size() != un || switching.size() != un || power.size() != un) {
    throw ConfigError(
        "ControllerGains: linear, switching, and power gains must all have "
        "one entry per neuron");
  }
  for (std::size_t r = 0; r < un; ++r) {
    if (!(linear[r] >= 0.0) || !(switching[r] >= 0.0) || !(power[r] > 0.0)) {
      throw ConfigError(
          "ControllerGains: need linear >= 0, switching >= 0, power > 0");
    }
  }
  if (!(exponent > 0.0) || !(exponent < 1.0)) {
    throw ConfigError("ControllerGains: exponent must lie in (0, 1)");
  }
}

double switched_weight(double inner, double outer, double threshold,
                       double state) {
  return std::abs(state) <= threshold ? inner : outer;
}

State drive_rhs(const MemristiveNetwork& net, const State& x) {
  const auto un = static_cast<std::size_t>(net.n);
  State dx(un, 0.0);
  for (std::size_t r = 0; r < un; ++r) {
    double acc = -net.decay[r] * x[r] + net.input[r];
    for (std::size_t s = 0; s < un; ++s) {
      const double w = switched_weight(net.weight_inner[r][s],
                                       net.weight_outer[r][s],
                                       net.threshold[r], x[r]);
      acc += w * net.activation[s].fn(x[s]);
    }
    dx[r] = acc;
  }
  return dx;
}

State controller_output(const ControllerGains& gains, const State& e) {
  State u(e.size(), 0.0);
  for (std::size_t r = 0; r < e.size(); ++r) {
    const double s = dead_zone_sgn(e[r]);
    u[r] = -gains.linear[r] * e[r] - gains.switching[r] * s -
           gains.power[r] * std::pow(std::abs(e[r]), gains.exponent) * s;
  }
  return u;
}

std::vector<double> quadratic_dominance_margins(const MemristiveNetwork& net,
                                                const ControllerGains& gains) {
  std::vector<double> margins(static_cast<std::size_t>(net.n), 0.0);
  for (int r = 0; r < net.n; ++r) {
    const auto ur = static_cast<std::size_t>(r);
    double load = 0.0;
    for (int s = 0; s < net.n; ++s) {
      const auto us = static_cast<std::size_t>(s);
      load += net.weight_max(r, s) * net.activation[us].lipschitz +
              net.weight_max(s, r) * net.activation[ur].lipschitz;
    }
    margins[ur] = 2.0 * (net.decay[ur] + gains.linear[ur]) - load;
  }
  return margins;
}

std::vector<double> switching_dominance_margins(const MemristiveNetwork& net,
                                                const ControllerGains& gains) {
  std::vector<double> margins(static_cast<std::size_t>(net.n), 0.0);
  for (int r = 0; r < net.n; ++r) {
    const auto ur = static_cast<std::size_t>(r);
    double mismatch = 0.0;
    for (int s = 0; s < net.n; ++s) {
      mismatch += 2.0 * net.weight_dev(r, s) *
                  net.activation[static_cast<std::size_t>(s)].bound;
    }
    margins[ur] = gains.switching[ur] - mismatch;
  }
  return margins;
}

void SyncSchedule::validate(double t_origin) const {
  if (delays.size() != times.size() || gains.size() != times.size()) {
    throw ConfigError(
        "SyncSchedule: times, delays, and gains must have equal length");
  }
  if (max_delay < 0.0) throw ConfigError("SyncSchedule: negative delay bound");
  double prev = t_origin;
  for (std::size_t j = 0; j < times.size(); ++j) {
    if (!std::isfinite(times[j]) || !(times[j] > prev)) {
      throw ConfigError("SyncSchedule: times must be finite and strictly "
                        "increasing past the start time");
    }
    if (!(delays[j] >= 0.0) || delays[j] > max_delay) {
      throw ConfigError("SyncSchedule: delays must lie in [0, max_delay]");
    }
    if (times[j] - delays[j] < prev) {
      throw ConfigError("SyncSchedule: delayed lookup reaches past the "
                        "previous impulse");
    }
    if (!(gains[j] > 0.0) || !std::isfinite(gains[j])) {
      throw ConfigError("SyncSchedule: gains must be positive and finite");
    }
    prev = times[j];
  }
}

namespace {

std::vector<std::vector<double>> block_selector(int n, double drive_coeff,
                                                double response_coeff) {
  std::vector<std::vector<double>> m(
      static_cast<std::size_t>(n),
      std::vector<double>(static_cast<std::size_t>(2 * n), 0.0));
  for (int r = 0; r < n; ++r) {
    const auto ur = static_cast<std::size_t>(r);
    m[ur][ur] = drive_coeff;
    m[ur][static_cast<std::size_t>(n + r)] = response_coeff;
  }
  return m;
}

}  // namespace

SyncRun simulate_sync(const MemristiveNetwork& net,
                      const ControllerGains& gains, FractionalOrder order,
                      const State& x0, const State& y0, double t0,
                      double horizon, const SyncSchedule& schedule,
                      const SyncOptions& options) {
  net.validate();
  gains.validate(net.n);
  schedule.validate(t0);
  const auto un = static_cast<std::size_t>(net.n);
  if (x0.size() != un || y0.size() != un) {
    throw ConfigError("simulate_sync: initial states must match the network "
                      "dimension");
  }

  const double layer = options.sgn_layer;
  VectorField coupled_field(
      2 * net.n,
      [&net, &gains, un, layer](const State& z) {
        const State x(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(un));
        const State y(z.begin() + static_cast<std::ptrdiff_t>(un), z.end());
        State dz(2 * un, 0.0);
        const State dx = drive_rhs(net, x);
        const State dy = drive_rhs(net, y);
        for (std::size_t r = 0; r < un; ++r) {
          const double e = y[r] - x[r];
          const double s = saturated_sgn(e, layer);
          dz[r] = dx[r];
          dz[un + r] = dy[r] - gains.linear[r] * e - gains.switching[r] * s -
                       gains.power[r] *
                           std::pow(std::abs(e), gains.exponent) * s;
        }
        return dz;
      },
      /*require_zero_fixed=*/false);

  // Response-onto-drive projection: kills the error bitwise once inside the
  // deadband, after which identical field evaluations keep it at zero.
  DeadbandPolicy manifold;
  manifold.threshold = options.manifold_deadband;
  manifold.measure = [un](const State& z) {
    double acc = 0.0;
    for (std::size_t r = 0; r < un; ++r) {
      const double e = z[un + r] - z[r];
      acc += e * e;
    }
    return std::sqrt(acc);
  };
  manifold.project = [un](State& z) {
    for (std::size_t r = 0; r < un; ++r) z[un + r] = z[r];
  };

  ImpulseSchedule events;
  events.max_delay = schedule.max_delay;
  for (std::size_t j = 0; j < schedule.times.size(); ++j) {
    events.events.push_back(
        ImpulseEvent::linear(schedule.times[j], schedule.delays[j],
                             schedule.gains[j]));
  }

  SimOptions sim;
  sim.tol = options.tol;
  sim.deadband = manifold;

  State z0(2 * un, 0.0);
  std::copy(x0.begin(), x0.end(), z0.begin());
  std::copy(y0.begin(), y0.end(), z0.begin() + static_cast<std::ptrdiff_t>(un));

  Trajectory coupled =
      simulate(coupled_field, order, z0, t0, horizon, events, sim);
  Trajectory drive = coupled.mapped(block_selector(net.n, 1.0, 0.0));
  Trajectory response = coupled.mapped(block_selector(net.n, 0.0, 1.0));
  Trajectory error = coupled.mapped(block_selector(net.n, -1.0, 1.0));
  return SyncRun{std::move(coupled), std::move(drive), std::move(response),
                 std::move(error)};
}

Certificate certify_sync(const MemristiveNetwork& net,
                         const ControllerGains& gains, FractionalOrder order,
                         const State& e0, double t0,
                         const SyncSchedule& schedule, double gamma,
                         const std::string& regime_name) {
  net.validate();
  gains.validate(net.n);
  schedule.validate(t0);
  if (e0.size() != static_cast<std::size_t>(net.n)) {
    throw ConfigError("certify_sync: initial error must match the network "
                      "dimension");
  }

  std::vector<ConditionCheck> dominance;
  const std::vector<double> quad = quadratic_dominance_margins(net, gains);
  const std::vector<double> sw = switching_dominance_margins(net, gains);
  bool dominance_ok = true;
  for (std::size_t r = 0; r < quad.size(); ++r) {
    const bool ok = quad[r] >= 0.0;
    dominance.push_back({"quadratic-dominance-" + std::to_string(r + 1), ok,
                         quad[r], 0.0});
    dominance_ok = dominance_ok && ok;
  }
  for (std::size_t r = 0; r < sw.size(); ++r) {
    const bool ok = sw[r] >= 0.0;
    dominance.push_back({"switching-dominance-" + std::to_string(r + 1), ok,
                         sw[r], 0.0});
    dominance_ok = dominance_ok && ok;
  }

  const double eta = 0.5 * (1.0 + gains.exponent);
  const double c = std::pow(2.0, eta) *
                   *std::min_element(gains.power.begin(), gains.power.end());
  const double v0 = 0.5 * norm2(e0) * norm2(e0);
  FlowDecayParams p(c, eta, order, t0, v0);

  ImpulseGainParams g;
  g.max_delay = schedule.max_delay;
  g.gamma = gamma;
  for (double mu : schedule.gains) {
    g.beta_per_jump.push_back(beta_from_linear_gain(mu, eta));
  }
  g.beta = g.beta_per_jump.empty()
               ? 0.0
               : *std::max_element(g.beta_per_jump.begin(),
                                   g.beta_per_jump.end());

  Certificate cert;
  if (regime_name != regime::no_impulse && g.beta_per_jump.empty()) {
    throw ConfigError("certify_sync: impulsive regime with an empty schedule; "
                      "use the no-impulse regime");
  }
  if (regime_name == regime::no_impulse) {
    cert = certify_no_impulse(p);
  } else if (regime_name == regime::stabilizing_delayed) {
    cert = certify_stabilizing_delayed(p, g, schedule.times);
  } else if (regime_name == regime::stabilizing_delay_free) {
    cert = certify_stabilizing_delay_free(p, g, schedule.times);
  } else if (regime_name == regime::destabilizing_delayed) {
    cert = certify_destabilizing_delayed(p, g, schedule.times);
  } else if (regime_name == regime::destabilizing_delay_free) {
    cert = certify_destabilizing_delay_free(p, g, schedule.times);
  } else {
    throw ConfigError("certify_sync: unknown regime " + regime_name);
  }

  cert.conditions.insert(cert.conditions.begin(), dominance.begin(),
                         dominance.end());
  cert.failed_conditions.clear();
  for (const ConditionCheck& cond : cert.conditions) {
    if (!cond.pass) cert.failed_conditions.push_back(cond.name);
  }
  cert.valid = cert.valid && dominance_ok;
  if (!dominance_ok) {
    cert.notes.push_back(
        "controller gains do not dominate the network couplings; the decay "
        "law is unsupported");
  }
  return cert;
}

}  // namespace cfts
