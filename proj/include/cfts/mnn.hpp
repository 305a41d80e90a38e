#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cfts/certificates.hpp"
#include "cfts/simulate.hpp"

namespace cfts {

// Scalar activation with its global Lipschitz constant and bound. The
// network validator spot-checks both on deterministic probe points.
struct Activation {
  std::function<double(double)> fn;
  double lipschitz = 0.0;
  double bound = 0.0;
};

// State-dependent-weight neural network
//   dx_r = -a_r x_r + sum_s b_rs(x_r) f_s(x_s) + I_r
// where row r uses weight_inner[r][s] while |x_r| <= threshold_r (boundary
// included) and weight_outer[r][s] otherwise.
struct MemristiveNetwork {
  int n = 0;
  std::vector<double> decay;                       // a_r > 0
  std::vector<std::vector<double>> weight_inner;   // b_rs, |x_r| <= theta_r
  std::vector<std::vector<double>> weight_outer;   // b_rs, |x_r| >  theta_r
  std::vector<double> threshold;                   // theta_r > 0
  std::vector<Activation> activation;
  std::vector<double> input;                       // I_r

  void validate() const;  // throws ConfigError

  double weight_max(int r, int s) const;
  double weight_min(int r, int s) const;
  double weight_mid(int r, int s) const;   // midpoint of the two branches
  double weight_dev(int r, int s) const;   // half the branch gap
};

// Finite-time synchronizing feedback
//   u_r(e) = -linear_r e_r - switching_r sgn(e_r)
//            - power_r |e_r|^exponent sgn(e_r),
// exponent in (0, 1). sgn uses a 1e-12 dead zone: sgn of magnitudes below it
// is 0, suppressing chatter on numerically-zero errors.
struct ControllerGains {
  std::vector<double> linear;     // lambda_r
  std::vector<double> switching;  // zeta_r
  std::vector<double> power;      // vartheta_r
  double exponent = 0.5;          // varrho

  void validate(int n) const;
};

double switched_weight(double inner, double outer, double threshold,
                       double state);

State drive_rhs(const MemristiveNetwork& net, const State& x);

// Exact controller output (dead-zone sgn). The co-simulation replaces the
// dead-zone sgn with a thin saturation layer; see SyncOptions.
State controller_output(const ControllerGains& gains, const State& e);

// Margin of the quadratic-dominance condition per neuron:
//   2(a_r + linear_r)
//   - sum_s [ (|inner_rs + outer_rs| + |inner_rs - outer_rs|) L_s
//           + (|inner_sr + outer_sr| + |inner_sr - outer_sr|) L_r ] / 2.
// All margins >= 0 make the quadratic error terms non-expansive.
std::vector<double> quadratic_dominance_margins(const MemristiveNetwork& net,
                                                const ControllerGains& gains);

// Margin of the switching-gain dominance condition per neuron:
//   switching_r - sum_s |inner_rs - outer_rs| M_s.
// All margins >= 0 let the switching term absorb weight-branch mismatch.
std::vector<double> switching_dominance_margins(const MemristiveNetwork& net,
                                                const ControllerGains& gains);

// Impulse schedule of the synchronized pair: at time_j both drive and
// response are rescaled by gain_j applied to their delayed states.
struct SyncSchedule {
  std::vector<double> times;
  std::vector<double> delays;
  std::vector<double> gains;
  double max_delay = 0.0;

  void validate(double t_origin) const;
};

struct SyncOptions {
  double tol = 1e-8;
  // Once ||response - drive|| falls to this threshold the response is
  // projected onto the drive, making the error exactly zero from then on.
  double manifold_deadband = 1e-8;
  // Width of the saturation layer replacing sgn inside the co-simulation
  // field. Pure sgn stalls adaptive steppers in the sliding regime; the
  // layer bounds the model deviation by its width, far below every
  // acceptance tolerance, and the manifold projection supplies the exact
  // zero tail.
  double sgn_layer = 1e-5;
};

struct SyncRun {
  Trajectory coupled;   // [drive; response], dimension 2n
  Trajectory drive;
  Trajectory response;
  Trajectory error;     // response - drive
};

SyncRun simulate_sync(const MemristiveNetwork& net,
                      const ControllerGains& gains, FractionalOrder order,
                      const State& x0, const State& y0, double t0,
                      double horizon, const SyncSchedule& schedule = {},
                      const SyncOptions& options = {});

// Synchronization certificate: checks the two dominance conditions, derives
// the error-system decay law (c = 2^((1+exponent)/2) min_r power_r,
// eta = (1+exponent)/2, V = ||e||^2/2) and the per-impulse factors
// beta_j = gain_j^(1-exponent), then delegates to the requested impulsive
// regime with chain ratio gamma.
Certificate certify_sync(const MemristiveNetwork& net,
                         const ControllerGains& gains, FractionalOrder order,
                         const State& e0, double t0,
                         const SyncSchedule& schedule, double gamma,
                         const std::string& regime_name);

}  // namespace cfts
