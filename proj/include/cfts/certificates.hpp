#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cfts/conformable.hpp"

namespace cfts {

// Regime labels used by certificates and scenario summaries.
namespace regime {
inline constexpr const char* no_impulse = "no-impulse";
inline constexpr const char* stabilizing_delayed = "stabilizing-delayed";
inline constexpr const char* stabilizing_delay_free = "stabilizing-delay-free";
inline constexpr const char* destabilizing_delayed = "destabilizing-delayed";
inline constexpr const char* destabilizing_delay_free =
    "destabilizing-delay-free";
}  // namespace regime

// Parameters of the continuous-flow decay law: along the flow the Lyapunov
// value satisfies dV/du <= -c V^eta in each segment frame, with c > 0 and
// 0 < eta < 1. v0 = V at the start time t0.
struct FlowDecayParams {
  FlowDecayParams(double c, double eta, FractionalOrder order, double t0,
                  double v0);

  double alpha() const;  // c (1 - eta) / q

  double c;
  double eta;
  FractionalOrder order;
  double t0;
  double v0;
};

// Per-impulse Lyapunov jump factors and the two uniform constants the
// settling bounds use: beta bounds every beta_j, gamma is the chain ratio
// (gamma in (beta, 1) for stabilizing impulses, gamma >= beta >= 1 for
// destabilizing ones). max_delay is the uniform delay bound tau.
struct ImpulseGainParams {
  std::vector<double> beta_per_jump;
  double beta = 0.0;
  double gamma = 0.0;
  double max_delay = 0.0;
};

struct ConditionCheck {
  std::string name;
  bool pass = false;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct Certificate {
  bool valid = false;
  std::string regime;
  double gamma_s0 = 0.0;        // no-impulse settling bound of the flow
  double settling_bound = 0.0;  // meaningful only when valid
  int impulse_count = 0;        // N (stabilizing) or N0 (destabilizing)
  std::vector<ConditionCheck> conditions;
  std::vector<std::string> failed_conditions;
  std::vector<std::string> notes;
};

// Settling deadline of the pure flow: t0 + (v0^(1-eta) / alpha)^(1/q);
// exactly t0 when v0 = 0.
double no_impulse_settling_bound(const FlowDecayParams& p);

// Lyapunov jump factor of a linear state jump s -> gain * s under a
// Lyapunov function homogeneous of the given degree: beta_j =
// gain^(degree (1 - eta)).
double beta_from_linear_gain(double gain, double eta,
                             double v_homogeneity = 2.0);

Certificate certify_no_impulse(const FlowDecayParams& p);

// Stabilizing impulses (beta < 1) with delays. N counts scheduled times
// before the flow deadline; validity requires the last of them to land by
// the schedule deadline and the delay budget to stay positive. Bound:
// (gamma^N)^(1/q) * gamma_s0.
Certificate certify_stabilizing_delayed(const FlowDecayParams& p,
                                        const ImpulseGainParams& g,
                                        const std::vector<double>& times);

// Delay-free stabilizing impulses. Unconditionally valid with bound
// gamma_s0; when the schedule deadline also holds the sharper bound
// (gamma^N)^(1/q) * gamma_s0 applies.
Certificate certify_stabilizing_delay_free(const FlowDecayParams& p,
                                           const ImpulseGainParams& g,
                                           const std::vector<double>& times);

// Destabilizing impulses (beta >= 1) with delays. Requires
// gamma >= beta + beta tau^q / gamma_s0^q. N0 is the first index whose
// scheduled time reaches the growing deadline chain (schedule exhaustion
// counts as +infinity). Bound: (gamma^(N0-1))^(1/q) * gamma_s0.
Certificate certify_destabilizing_delayed(const FlowDecayParams& p,
                                          const ImpulseGainParams& g,
                                          const std::vector<double>& times);

// Delay-free destabilizing impulses; beta itself drives the deadline chain.
Certificate certify_destabilizing_delay_free(const FlowDecayParams& p,
                                             const ImpulseGainParams& g,
                                             const std::vector<double>& times);

struct ChainRatioChoice {
  double gamma = 0.0;
  double settling_bound = 0.0;
};

// Grid search for the chain ratio minimizing the certified settling bound
// subject to the regime's conditions. Returns nothing when no feasible
// gamma exists on the grid. regime_name: one of the four impulsive regimes.
std::optional<ChainRatioChoice> optimize_chain_ratio(
    const FlowDecayParams& p, const ImpulseGainParams& g,
    const std::vector<double>& times, const std::string& regime_name,
    int grid_points = 4000);

}  // namespace cfts
