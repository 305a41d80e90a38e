#include "cfts/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cfts/errors.hpp"

namespace cfts {

namespace {

constexpr double kRelSlack = 1e-12;

// Comparisons inside certificate conditions tolerate representation error;
// strictness is honored up to a relative slack.
bool leq_slack(double a, double b) {
  return a <= b + kRelSlack * std::max({1.0, std::abs(a), std::abs(b)});
}

bool geq_slack(double a, double b) { return leq_slack(b, a); }

double quiet_nan() { return std::numeric_limits<double>::quiet_NaN(); }

void require_sorted(const std::vector<double>& times) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) ||
        (i > 0 && !(times[i] > times[i - 1]))) {
      throw ConfigError("certify: impulse times must be finite and strictly "
                        "increasing");
    }
  }
}

void require_regime(const ImpulseGainParams& g, bool stabilizing) {
  if (stabilizing) {
    if (!(g.beta > 0.0) || !(g.beta < 1.0)) {
      throw ConfigError(
          "certify: stabilizing regime requires 0 < beta < 1");
    }
    if (!(g.gamma > g.beta) || !(g.gamma < 1.0)) {
      throw ConfigError(
          "certify: stabilizing regime requires gamma in (beta, 1)");
    }
  } else {
    if (!(g.beta >= 1.0)) {
      throw ConfigError(
          "certify: destabilizing regime requires beta >= 1");
    }
    if (!(g.gamma >= g.beta)) {
      throw ConfigError(
          "certify: destabilizing regime requires gamma >= beta");
    }
  }
  if (g.max_delay < 0.0) {
    throw ConfigError("certify: negative delay bound");
  }
  for (double bj : g.beta_per_jump) {
    if (!(bj > 0.0)) {
      throw ConfigError("certify: jump factors must be positive");
    }
    if (!leq_slack(bj, g.beta)) {
      throw ConfigError(
          "certify: a jump factor exceeds the uniform bound beta");
    }
  }
}

int count_before(const std::vector<double>& times, double deadline) {
  int n = 0;
  for (double t : times) {
    if (t < deadline) {
      ++n;
    } else {
      break;
    }
  }
  return n;
}

Certificate base_certificate(const FlowDecayParams& p,
                             const std::string& regime_name) {
  Certificate cert;
  cert.regime = regime_name;
  cert.gamma_s0 = no_impulse_settling_bound(p);
  cert.settling_bound = quiet_nan();
  return cert;
}

void finish(Certificate& cert) {
  for (const ConditionCheck& c : cert.conditions) {
    if (!c.pass) cert.failed_conditions.push_back(c.name);
  }
}

}  // namespace

FlowDecayParams::FlowDecayParams(double c, double eta, FractionalOrder order,
                                 double t0, double v0)
    : c(c), eta(eta), order(order), t0(t0), v0(v0) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw std::invalid_argument("FlowDecayParams: decay rate c must be > 0");
  }
  if (!(eta > 0.0) || !(eta < 1.0)) {
    throw std::invalid_argument("FlowDecayParams: eta must lie in (0, 1)");
  }
  if (!(v0 >= 0.0) || !std::isfinite(v0)) {
    throw std::invalid_argument("FlowDecayParams: v0 must be >= 0");
  }
  if (!std::isfinite(t0)) {
    throw std::invalid_argument("FlowDecayParams: t0 must be finite");
  }
}

double FlowDecayParams::alpha() const {
  return c * (1.0 - eta) / order.value();
}

double no_impulse_settling_bound(const FlowDecayParams& p) {
  if (p.v0 == 0.0) return p.t0;
  const double q = p.order.value();
  return p.t0 + std::pow(std::pow(p.v0, 1.0 - p.eta) / p.alpha(), 1.0 / q);
}

double beta_from_linear_gain(double gain, double eta, double v_homogeneity) {
  if (!(gain > 0.0)) {
    throw std::invalid_argument("beta_from_linear_gain: gain must be > 0");
  }
  if (!(eta > 0.0) || !(eta < 1.0)) {
    throw std::invalid_argument("beta_from_linear_gain: eta must be in (0,1)");
  }
  if (!(v_homogeneity > 0.0)) {
    throw std::invalid_argument(
        "beta_from_linear_gain: homogeneity degree must be > 0");
  }
  return std::pow(gain, v_homogeneity * (1.0 - eta));
}

Certificate certify_no_impulse(const FlowDecayParams& p) {
  Certificate cert = base_certificate(p, regime::no_impulse);
  cert.valid = true;
  cert.settling_bound = cert.gamma_s0;
  cert.impulse_count = 0;
  if (p.v0 == 0.0) cert.notes.push_back("initial energy already zero");
  return cert;
}

Certificate certify_stabilizing_delayed(const FlowDecayParams& p,
                                        const ImpulseGainParams& g,
                                        const std::vector<double>& times) {
  require_regime(g, /*stabilizing=*/true);
  require_sorted(times);
  Certificate cert = base_certificate(p, regime::stabilizing_delayed);

  if (p.v0 == 0.0) {
    cert.valid = true;
    cert.settling_bound = p.t0;
    cert.notes.push_back("initial energy already zero");
    return cert;
  }

  const double q = p.order.value();
  const double big_gamma = cert.gamma_s0;
  const double gq = std::pow(big_gamma - p.t0, q);
  const int n_before = count_before(times, big_gamma);
  cert.impulse_count = n_before;

  if (n_before == 0) {
    bool no_early_read = true;
    if (!times.empty()) {
      // The first impulse lands after settling, but its delayed read must
      // not reach back before the settling instant or it resurrects the
      // state and the flow bound no longer covers the schedule.
      no_early_read = geq_slack(times.front() - g.max_delay, big_gamma);
      cert.conditions.push_back({"delayed-read-after-settling", no_early_read,
                                 times.front() - g.max_delay, big_gamma});
    }
    if (no_early_read) {
      cert.valid = true;
      cert.settling_bound = big_gamma;
      cert.notes.push_back("no impulse before the flow settles");
    }
    finish(cert);
    return cert;
  }

  const double gamma_n = std::pow(g.gamma, n_before);
  const double tau_q = std::pow(g.max_delay, q);
  // Budget that must stay positive for the chain to terminate in time.
  const double budget = gamma_n * (1.0 - g.beta / g.gamma) * gq -
                        g.beta * tau_q;
  const bool budget_ok = budget > 0.0;
  cert.conditions.push_back({"delay-budget-positive", budget_ok, budget, 0.0});

  const double t_last = times[n_before - 1];
  double deadline = quiet_nan();
  bool deadline_ok = false;
  if (budget > 0.0) {
    deadline = p.t0 + std::pow(budget / (1.0 - g.beta), 1.0 / q);
    deadline_ok = leq_slack(t_last, deadline);
  }
  cert.conditions.push_back(
      {"last-impulse-deadline", deadline_ok, t_last, deadline});

  cert.valid = budget_ok && deadline_ok;
  if (cert.valid) {
    cert.settling_bound = p.t0 + std::pow(gamma_n, 1.0 / q) *
                                      (big_gamma - p.t0);
  }
  finish(cert);
  return cert;
}

Certificate certify_stabilizing_delay_free(const FlowDecayParams& p,
                                           const ImpulseGainParams& g,
                                           const std::vector<double>& times) {
  require_regime(g, /*stabilizing=*/true);
  require_sorted(times);
  Certificate cert = base_certificate(p, regime::stabilizing_delay_free);

  if (p.v0 == 0.0) {
    cert.valid = true;
    cert.settling_bound = p.t0;
    cert.notes.push_back("initial energy already zero");
    return cert;
  }

  const double q = p.order.value();
  const double big_gamma = cert.gamma_s0;
  const int n_before = count_before(times, big_gamma);
  cert.impulse_count = n_before;
  cert.valid = true;  // stabilizing delay-free impulses never delay settling

  if (n_before == 0) {
    cert.settling_bound = big_gamma;
    cert.notes.push_back("no impulse before the flow settles");
    return cert;
  }

  const double gamma_n = std::pow(g.gamma, n_before);
  const double deadline =
      p.t0 + std::pow(gamma_n * (1.0 - g.beta / g.gamma) / (1.0 - g.beta),
                      1.0 / q) *
                 (big_gamma - p.t0);
  const double t_last = times[n_before - 1];
  const bool deadline_ok = leq_slack(t_last, deadline);
  cert.conditions.push_back(
      {"last-impulse-deadline", deadline_ok, t_last, deadline});

  if (deadline_ok) {
    cert.settling_bound =
        p.t0 + std::pow(gamma_n, 1.0 / q) * (big_gamma - p.t0);
  } else {
    // Delay-free stabilizing impulses preserve finite-time stability
    // unconditionally; only the schedule-specific refinement is lost, so the
    // certificate stays valid and failed_conditions stays empty.
    cert.settling_bound = big_gamma;
    cert.notes.push_back("schedule-specific bound unavailable");
  }
  return cert;
}

namespace {

// First index j (1-based) whose impulse time reaches the deadline chain
// (ratio^(j-1))^(1/q) * (gamma_s0 - t0) + t0. Schedule exhaustion counts as
// +infinity, so the scan always terminates at times.size() + 1.
int deadline_chain_first_hit(const std::vector<double>& times, double ratio,
                             double q, double t0, double big_gamma) {
  const double span = big_gamma - t0;
  for (std::size_t j = 1; j <= times.size(); ++j) {
    const double threshold =
        t0 + std::pow(std::pow(ratio, static_cast<double>(j - 1)), 1.0 / q) *
                 span;
    if (geq_slack(times[j - 1], threshold)) return static_cast<int>(j);
  }
  return static_cast<int>(times.size()) + 1;
}

}  // namespace

Certificate certify_destabilizing_delayed(const FlowDecayParams& p,
                                          const ImpulseGainParams& g,
                                          const std::vector<double>& times) {
  require_regime(g, /*stabilizing=*/false);
  require_sorted(times);
  Certificate cert = base_certificate(p, regime::destabilizing_delayed);

  if (p.v0 == 0.0) {
    cert.valid = true;
    cert.settling_bound = p.t0;
    cert.notes.push_back("initial energy already zero");
    return cert;
  }

  const double q = p.order.value();
  const double big_gamma = cert.gamma_s0;
  const double gq = std::pow(big_gamma - p.t0, q);
  const double tau_q = std::pow(g.max_delay, q);

  const double needed = g.beta + g.beta * tau_q / gq;
  const bool margin_ok = geq_slack(g.gamma, needed);
  cert.conditions.push_back({"gamma-vs-beta-tau", margin_ok, g.gamma, needed});

  const int n0 = deadline_chain_first_hit(times, g.gamma, q, p.t0, big_gamma);
  cert.impulse_count = n0;
  cert.valid = margin_ok;
  if (cert.valid) {
    cert.settling_bound =
        p.t0 + std::pow(std::pow(g.gamma, static_cast<double>(n0 - 1)),
                        1.0 / q) *
                   (big_gamma - p.t0);
  }
  finish(cert);
  return cert;
}

Certificate certify_destabilizing_delay_free(const FlowDecayParams& p,
                                             const ImpulseGainParams& g,
                                             const std::vector<double>& times) {
  require_regime(g, /*stabilizing=*/false);
  require_sorted(times);
  Certificate cert = base_certificate(p, regime::destabilizing_delay_free);

  if (p.v0 == 0.0) {
    cert.valid = true;
    cert.settling_bound = p.t0;
    cert.notes.push_back("initial energy already zero");
    return cert;
  }

  const double q = p.order.value();
  const double big_gamma = cert.gamma_s0;
  const int n0 = deadline_chain_first_hit(times, g.beta, q, p.t0, big_gamma);
  cert.impulse_count = n0;
  cert.valid = true;
  cert.settling_bound =
      p.t0 + std::pow(std::pow(g.beta, static_cast<double>(n0 - 1)), 1.0 / q) *
                 (big_gamma - p.t0);
  return cert;
}

std::optional<ChainRatioChoice> optimize_chain_ratio(
    const FlowDecayParams& p, const ImpulseGainParams& g,
    const std::vector<double>& times, const std::string& regime_name,
    int grid_points) {
  if (grid_points < 2) {
    throw ConfigError("optimize_chain_ratio: grid too small");
  }
  const bool stabilizing = regime_name == regime::stabilizing_delayed ||
                           regime_name == regime::stabilizing_delay_free;
  const bool destabilizing = regime_name == regime::destabilizing_delayed ||
                             regime_name == regime::destabilizing_delay_free;
  if (!stabilizing && !destabilizing) {
    throw ConfigError("optimize_chain_ratio: unknown regime " + regime_name);
  }

  auto run = [&](double gamma) {
    ImpulseGainParams trial = g;
    trial.gamma = gamma;
    if (regime_name == regime::stabilizing_delayed) {
      return certify_stabilizing_delayed(p, trial, times);
    }
    if (regime_name == regime::stabilizing_delay_free) {
      return certify_stabilizing_delay_free(p, trial, times);
    }
    if (regime_name == regime::destabilizing_delayed) {
      return certify_destabilizing_delayed(p, trial, times);
    }
    return certify_destabilizing_delay_free(p, trial, times);
  };

  const double lo = stabilizing ? g.beta : g.beta;
  const double hi = stabilizing ? 1.0 : std::max(4.0 * g.beta, g.beta + 4.0);
  std::optional<ChainRatioChoice> best;
  for (int i = 1; i < grid_points; ++i) {
    const double gamma =
        lo + (hi - lo) * static_cast<double>(i) / grid_points;
    if (stabilizing && (gamma <= g.beta || gamma >= 1.0)) continue;
    if (destabilizing && gamma < g.beta) continue;
    Certificate cert = run(gamma);
    // A fallback bound (failed schedule deadline) is not a schedule-specific
    // optimum; require every recorded condition to hold.
    if (!cert.valid || !cert.failed_conditions.empty()) continue;
    if (!best || cert.settling_bound < best->settling_bound) {
      best = ChainRatioChoice{gamma, cert.settling_bound};
    }
  }
  return best;
}

}  // namespace cfts
