// Acceptance gate: eight checks, one [PASS]/[FAIL] line each.
// Every tolerance is pinned here, next to the check that uses it.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cfts/certificates.hpp"
#include "cfts/conformable.hpp"
#include "cfts/mnn.hpp"
#include "cfts/monitor.hpp"
#include "cfts/scenario.hpp"
#include "cfts/simulate.hpp"

using namespace cfts;

namespace {

int g_failures = 0;

void report(int index, const char* title, bool pass,
            const std::string& detail) {
  std::printf("[%s] %d. %s%s%s\n", pass ? "PASS" : "FAIL", index, title,
              detail.empty() ? "" : ": ", detail.c_str());
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

// ---------------------------------------------------------------- criterion 1

struct Regression {
  const char* label;
  double computed;
  double expected;
  double tol;
};

bool criterion_formulas(std::string& detail) {
  const FlowDecayParams scalar(2.0 / 3.0, 0.75, FractionalOrder(0.98), 0.0,
                               0.25);
  const double beta_s = beta_from_linear_gain(0.71, 0.75);
  const double beta_d = beta_from_linear_gain(1.72, 0.75);
  const Certificate t1n2 = certify_stabilizing_delayed(
      scalar, {{beta_s, beta_s, beta_s}, beta_s, 0.9, 0.05}, {0.2, 0.4, 4.4});
  const Certificate t1n4 = certify_stabilizing_delayed(
      scalar, {{beta_s, beta_s, beta_s, beta_s, beta_s}, beta_s, 0.9, 0.05},
      {0.1, 0.26, 0.48, 0.7, 4.4});
  const Certificate t2 = certify_destabilizing_delayed(
      scalar, {{beta_d, beta_d, beta_d, beta_d}, beta_d, 1.5, 0.45},
      {1.5, 2.0, 2.8, 15.5});

  std::vector<ScenarioConfig> all = builtin_scenarios();
  auto cfg_named = [&](const std::string& name) -> const ScenarioConfig& {
    for (const ScenarioConfig& c : all) {
      if (c.name == name) return c;
    }
    std::abort();
  };
  auto sync_cert = [&](const std::string& name) {
    const ScenarioConfig& c = cfg_named(name);
    State e0{c.mnn->y0[0] - c.mnn->x0[0], c.mnn->y0[1] - c.mnn->x0[1]};
    SyncSchedule s{c.impulses.times, c.impulses.delays, c.impulses.gains,
                   c.impulses.max_delay};
    return certify_sync(c.mnn->network, c.mnn->gains, FractionalOrder(c.order),
                        e0, c.t0, s, c.gamma, c.regime);
  };
  const Certificate hat1 = sync_cert("example2-stabilizing-tau01");
  const Certificate hat2 = sync_cert("example2-destabilizing-tau005");
  const double beta_hat_s = beta_from_linear_gain(0.4, 0.65);
  const double beta_hat_d = beta_from_linear_gain(1.38, 0.65);

  const Regression rows[] = {
      {"Gamma_S0", no_impulse_settling_bound(scalar), 4.280, 0.001},
      {"T1(N=2)", t1n2.settling_bound, 3.452, 0.002},
      {"T1(N=4)", t1n4.settling_bound, 2.784, 0.002},
      {"T2", t2.settling_bound, 14.810, 0.005},
      {"beta(0.71)", beta_s, 0.843, 0.001},
      {"beta(1.72)", beta_d, 1.311, 0.001},
      {"Gamma_hat", hat1.gamma_s0, 9.630, 0.002},
      {"beta_hat(0.4)", beta_hat_s, 0.527, 0.001},
      {"beta_hat(1.38)", beta_hat_d, 1.253, 0.001},
      {"T2_hat", hat2.settling_bound, 18.446, 0.01},
      // the published 2.946 recomputes to 2.951 from its own constituents;
      // the pinned +/- 0.01 window covers the discrepancy
      {"T1_hat", hat1.settling_bound, 2.946, 0.01},
  };

  bool ok = true;
  for (const Regression& r : rows) {
    const bool here = r.computed == r.computed &&
                      std::abs(r.computed - r.expected) <= r.tol;
    if (!here && ok) {
      detail = std::string(r.label) + " = " + fmt(r.computed) +
               ", expected " + fmt(r.expected) + " +/- " + fmt(r.tol);
    }
    ok = ok && here;
  }
  if (ok) {
    detail = "11 published values reproduced (T1_hat recomputes to " +
             fmt(hat1.settling_bound) + " against the published 2.946)";
  }
  return ok;
}

// ---------------------------------------------------------------- criterion 2

bool criterion_trajectory_oracle(std::string& detail) {
  VectorField field(
      1, [](const State& s) { return State{-signed_pow(s[0], 0.5) / 3.0}; });
  SimOptions opts;
  opts.tol = 1e-10;
  opts.zero_deadband = 1e-6;
  const Trajectory traj =
      simulate(field, FractionalOrder(0.98), {0.5}, 0.0, 6.0, {}, opts);

  double worst = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double t = 4.27 * i / 2000.0;
    const double root = std::sqrt(0.5) - std::pow(t, 0.98) / (6.0 * 0.98);
    worst = std::max(worst, std::abs(traj.sample(t)[0] - root * root));
  }
  const bool match = worst <= 1e-6;

  const auto settled = empirical_settling_time(traj, 1e-6);
  const bool settles =
      settled.has_value() && std::abs(*settled - 4.280) <= 0.01;

  detail = "max |S_sim - S_exact| = " + fmt(worst) + " on [0, 4.27]; " +
           "empirical settling = " +
           (settled ? fmt(*settled) : std::string("none")) +
           " vs 4.280 +/- 0.01";
  return match && settles;
}

// ---------------------------------------------------- criteria 3, 5, 7 shared

struct RunOutcome {
  double bound = 0.0;
  double empirical = 0.0;
  bool settled = false;
  std::size_t flow_violations = 0;
  std::size_t jump_violations = 0;
  bool valid = false;
};

std::map<std::string, RunOutcome> run_everything(
    const std::filesystem::path& out_dir) {
  std::map<std::string, RunOutcome> out;
  for (const ScenarioConfig& cfg : builtin_scenarios()) {
    const ScenarioResult res = run_scenario(cfg, out_dir);
    RunOutcome o;
    o.bound = res.certificate.settling_bound;
    o.settled = res.empirical_settling.has_value();
    o.empirical = o.settled ? *res.empirical_settling : -1.0;
    o.flow_violations = res.monitor.flow_violations.size();
    o.jump_violations = res.monitor.jump_violations.size();
    o.valid = res.certificate.valid;
    out[cfg.name] = o;
  }
  return out;
}

bool criterion_bound_ordering(const std::map<std::string, RunOutcome>& runs,
                              std::string& detail) {
  bool ok = true;
  double worst_gap = -1e9;
  for (const auto& [name, o] : runs) {
    const bool here = o.valid && o.settled && o.empirical <= o.bound + 0.02;
    if (!here && ok) {
      detail = name + ": empirical " +
               (o.settled ? fmt(o.empirical) : std::string("unsettled")) +
               " vs bound " + fmt(o.bound);
    }
    ok = ok && here;
    if (o.settled) worst_gap = std::max(worst_gap, o.empirical - o.bound);
  }
  if (ok) {
    detail = "all 10 scenarios settle inside their certificates (tightest "
             "slack " +
             fmt(-worst_gap) + ")";
  }
  return ok;
}

bool criterion_monitor(const std::map<std::string, RunOutcome>& runs,
                       std::string& detail) {
  bool clean = true;
  for (const auto& [name, o] : runs) {
    if (o.flow_violations != 0 || o.jump_violations != 0) {
      if (clean) {
        detail = name + " reports " + fmt(double(o.flow_violations)) +
                 " flow / " + fmt(double(o.jump_violations)) +
                 " jump violations";
      }
      clean = false;
    }
  }

  // negative control: scale the envelope-attaining run; the shrunken copy
  // decays slower in V^(1-eta) than its own restarted envelope allows
  VectorField field(
      1, [](const State& s) { return State{-signed_pow(s[0], 0.5) / 3.0}; });
  SimOptions opts;
  opts.tol = 1e-10;
  opts.zero_deadband = 1e-6;
  const Trajectory good =
      simulate(field, FractionalOrder(0.98), {0.5}, 0.0, 6.0, {}, opts);
  const Trajectory corrupted = good.mapped({{0.5}});
  LyapunovSpec spec([](const State& s) { return s[0] * s[0]; }, 2.0 / 3.0,
                    0.75, 1);
  const MonitorReport rep = check_flow_envelope(corrupted, spec);
  const bool control = rep.flow_violations.size() >= 1;
  if (clean && control) {
    detail = "0 violations across 10 scenarios; corrupted control flags " +
             fmt(double(rep.flow_violations.size()));
  } else if (!control) {
    detail += detail.empty() ? "" : "; ";
    detail += "corrupted control raised no violation";
  }
  return clean && control;
}

bool criterion_delay_effects(const std::map<std::string, RunOutcome>& runs,
                             std::string& detail) {
  auto emp = [&](const char* name) { return runs.at(name).empirical; };
  const double no_imp = emp("example1-no-impulse");
  struct Claim {
    const char* what;
    bool holds;
  };
  const Claim claims[] = {
      {"mnn tau=0.08 >= tau=0.01",
       emp("example2-stabilizing-tau08") >= emp("example2-stabilizing-tau01")},
      {"mnn tau=0.1 >= tau=0.005",
       emp("example2-destabilizing-tau10") >=
           emp("example2-destabilizing-tau005")},
      {"stabilizing N=2 < no-impulse",
       emp("example1-stabilizing-n2") < no_imp},
      {"stabilizing N=4 < no-impulse",
       emp("example1-stabilizing-n4") < no_imp},
      {"destabilizing tau=0.45 > no-impulse",
       emp("example1-destabilizing-tau45") > no_imp},
      {"destabilizing tau=0.1 > no-impulse",
       emp("example1-destabilizing-tau10") > no_imp},
  };
  bool ok = true;
  for (const Claim& c : claims) {
    if (!c.holds && ok) detail = std::string("violated: ") + c.what;
    ok = ok && c.holds;
  }
  if (ok) detail = "all 6 orderings hold";
  return ok;
}

// ---------------------------------------------------------------- criterion 4

bool criterion_property_suite(std::string& detail) {
  std::mt19937 rng(424242);
  const double qs[] = {0.3, 0.5, 0.93, 0.98, 1.0};
  std::uniform_int_distribution<int> pick_q(0, 4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int failures = 0;
  int cases = 0;
  auto expect = [&](bool cond) {
    ++cases;
    if (!cond) ++failures;
  };

  for (int i = 0; i < 100; ++i) {  // power rule, 1e-6 relative
    const double q = qs[pick_q(rng)];
    SegmentFrame frame{-1.0 + 2.0 * unit(rng), FractionalOrder(q)};
    const double p = 1.2 + 2.8 * unit(rng);
    const double dt = 0.3 + 5.0 * unit(rng);
    auto h = [&](double t) { return std::pow(t - frame.t_start, p); };
    const double want = p * std::pow(dt, p - q);
    const double got = conformable_derivative(h, frame.t_start + dt, frame);
    expect(std::abs(got - want) <= 1e-6 * (1.0 + std::abs(want)));
  }

  for (int i = 0; i < 100; ++i) {  // linearity, 1e-6
    const double q = qs[pick_q(rng)];
    SegmentFrame frame{0.0, FractionalOrder(q)};
    const double a = -3.0 + 6.0 * unit(rng);
    const double b = -3.0 + 6.0 * unit(rng);
    const double t = 0.3 + 3.0 * unit(rng);
    auto h1 = [](double s) { return std::sin(s); };
    auto h2 = [](double s) { return s * s; };
    const double lhs = conformable_derivative(
        [&](double s) { return a * h1(s) + b * h2(s); }, t, frame);
    const double rhs = a * conformable_derivative(h1, t, frame) +
                       b * conformable_derivative(h2, t, frame);
    expect(std::abs(lhs - rhs) <= 1e-6 * (1.0 + std::abs(rhs)));
  }

  for (int i = 0; i < 100; ++i) {  // fundamental theorem, 1e-6
    const double q = qs[pick_q(rng)];
    SegmentFrame frame{0.0, FractionalOrder(q)};
    const double c0 = -1.0 + 2.0 * unit(rng);
    const double c1 = -1.0 + 2.0 * unit(rng);
    auto h = [&](double s) { return c0 + c1 * std::sin(s) + 0.25 * s; };
    auto F = [&](double t) { return conformable_integral(h, t, frame, 1e-12); };
    const double t = 0.5 + 2.5 * unit(rng);
    const double got = conformable_derivative(F, t, frame, 1e-4);
    expect(std::abs(got - h(t)) <= 1e-6 * (1.0 + std::abs(h(t))));
  }

  for (int i = 0; i < 100; ++i) {  // chain rule for squares, 1e-6
    const double q = qs[pick_q(rng)];
    SegmentFrame frame{0.0, FractionalOrder(q)};
    auto h = [&](double t) { return conformable_time(t, frame) + 1.0; };
    const double t = 0.3 + 3.0 * unit(rng);
    const double got =
        conformable_derivative([&](double s) { return h(s) * h(s); }, t,
                               frame);
    expect(std::abs(got - 2.0 * h(t)) <= 1e-6 * (1.0 + 2.0 * h(t)));
  }

  for (int i = 0; i < 100; ++i) {  // monotonicity detection
    const double q = qs[pick_q(rng)];
    SegmentFrame frame{0.0, FractionalOrder(q)};
    const double slope = 0.5 + 1.5 * unit(rng);
    auto up = [&](double s) { return slope * s + 0.3 * std::sin(s); };
    const double t = 0.2 + 4.0 * unit(rng);
    expect(conformable_derivative(up, t, frame) > 0.0);
    expect(conformable_derivative([&](double s) { return -up(s); }, t,
                                  frame) < 0.0);
  }

  detail = fmt(double(cases)) + " randomized cases, " +
           fmt(double(failures)) + " failures";
  return failures == 0 && cases >= 500;
}

// ---------------------------------------------------------------- criterion 6

bool criterion_h_margins(std::string& detail) {
  // brute-force evaluation straight from the parameter tables
  const double a[2] = {1.7, 2.2};
  const double lam[2] = {3.5, 4.9};
  const double zeta[2] = {0.4, 1.5};
  const double L[2] = {1.3, 1.5};
  const double M[2] = {1.3, 1.5};
  const double inner[2][2] = {{1.4, -1.3}, {-2.1, 2.7}};
  const double outer[2][2] = {{1.5, -1.2}, {-2.6, 2.3}};

  double h1[2], h2[2];
  for (int r = 0; r < 2; ++r) {
    double sum1 = 0.0, sum2 = 0.0;
    for (int s = 0; s < 2; ++s) {
      const double wmax_rs =
          std::max(std::abs(inner[r][s]), std::abs(outer[r][s]));
      const double wmax_sr =
          std::max(std::abs(inner[s][r]), std::abs(outer[s][r]));
      sum1 += wmax_rs * L[s] + wmax_sr * L[r];
      sum2 += std::abs(inner[r][s] - outer[r][s]) * M[s];
    }
    h1[r] = 2.0 * (a[r] + lam[r]) - sum1;
    h2[r] = zeta[r] - sum2;
  }

  const bool h1_ok = std::abs(h1[0] - 1.17) <= 0.01 &&
                     std::abs(h1[1] - 0.77) <= 0.01;
  const bool h2_ok = std::abs(h2[0] - 0.12) <= 0.001 &&
                     std::abs(h2[1] - 0.25) <= 0.001;

  // the library must agree with the brute force evaluation
  MemristiveNetwork net;
  net.n = 2;
  net.decay = {a[0], a[1]};
  net.weight_inner = {{inner[0][0], inner[0][1]}, {inner[1][0], inner[1][1]}};
  net.weight_outer = {{outer[0][0], outer[0][1]}, {outer[1][0], outer[1][1]}};
  net.threshold = {1.0, 1.0};
  net.input = {0.0, 0.0};
  net.activation = {
      Activation{[](double v) { return 1.3 * std::tanh(v); }, 1.3, 1.3},
      Activation{[](double v) { return 1.5 * std::sin(v); }, 1.5, 1.5}};
  ControllerGains gains;
  gains.linear = {lam[0], lam[1]};
  gains.switching = {zeta[0], zeta[1]};
  gains.power = {1.1, 1.2};
  gains.exponent = 0.3;
  const std::vector<double> lib1 = quadratic_dominance_margins(net, gains);
  const std::vector<double> lib2 = switching_dominance_margins(net, gains);
  const bool agree = std::abs(lib1[0] - h1[0]) <= 1e-9 &&
                     std::abs(lib1[1] - h1[1]) <= 1e-9 &&
                     std::abs(lib2[0] - h2[0]) <= 1e-9 &&
                     std::abs(lib2[1] - h2[1]) <= 1e-9;

  detail = "H1 = (" + fmt(h1[0]) + ", " + fmt(h1[1]) + "), H2 = (" +
           fmt(h2[0]) + ", " + fmt(h2[1]) + ")";
  if (!agree) detail += "; checker disagrees with brute force";
  return h1_ok && h2_ok && agree;
}

// ---------------------------------------------------------------- criterion 8

bool criterion_unit_order(std::string& detail) {
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  auto track = [&](double got, double want) {
    worst = std::max(worst,
                     std::abs(got - want) / std::max(1.0, std::abs(want)));
  };

  for (int rep = 0; rep < 50; ++rep) {
    const double c = 0.2 + 1.8 * unit(rng);
    const double eta = 0.15 + 0.7 * unit(rng);
    const double v0 = 0.2 + 4.8 * unit(rng);
    const double t0 = -1.0 + 2.0 * unit(rng);
    const FlowDecayParams p(c, eta, FractionalOrder(1.0), t0, v0);
    const double span = std::pow(v0, 1.0 - eta) / (c * (1.0 - eta));
    track(no_impulse_settling_bound(p), t0 + span);

    const double beta = 0.1 + 0.7 * unit(rng);
    const double gamma = beta + (0.98 - beta) * (0.2 + 0.6 * unit(rng));
    const int n = 1 + int(unit(rng) * 3.0);
    const double budget = std::pow(gamma, n) * (1.0 - beta / gamma) * span;
    const double eps =
        std::min(0.05 * span, budget / (1.0 - beta) / (10.0 * n));
    std::vector<double> times;
    for (int j = 1; j <= n; ++j) times.push_back(t0 + j * eps);
    ImpulseGainParams g{std::vector<double>(times.size(), beta), beta, gamma,
                        0.25 * eps};
    const Certificate stab = certify_stabilizing_delayed(p, g, times);
    if (!stab.valid) {
      detail = "stabilizing draw " + fmt(double(rep)) + " unexpectedly invalid";
      return false;
    }
    track(stab.settling_bound, t0 + std::pow(gamma, n) * span);

    const double beta_d = 1.0 + unit(rng);
    const double tau_d = 0.02 * span;
    const double gamma_d = beta_d * (1.0 + tau_d / span) + 0.05;
    std::vector<double> dtimes;
    for (int j = 1; j <= 3; ++j) {
      dtimes.push_back(t0 + 0.9 * std::pow(gamma_d, j - 1) * span);
    }
    dtimes.push_back(t0 + 1.01 * std::pow(gamma_d, 3) * span);
    ImpulseGainParams gd{std::vector<double>(dtimes.size(), beta_d), beta_d,
                         gamma_d, tau_d};
    const Certificate destab = certify_destabilizing_delayed(p, gd, dtimes);
    if (!destab.valid) {
      detail =
          "destabilizing draw " + fmt(double(rep)) + " unexpectedly invalid";
      return false;
    }
    track(destab.settling_bound, t0 + std::pow(gamma_d, 3) * span);
  }

  detail = "150 reductions, worst relative deviation " + fmt(worst);
  return worst <= 1e-12;
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path out_dir =
      argc > 1 ? std::filesystem::path(argv[1]) : "acceptance_out";
  std::filesystem::create_directories(out_dir);

  std::string detail;

  detail.clear();
  report(1, "settling-time calculator regression", criterion_formulas(detail),
         detail);

  detail.clear();
  report(2, "analytic trajectory oracle", criterion_trajectory_oracle(detail),
         detail);

  const std::map<std::string, RunOutcome> runs = run_everything(out_dir);

  detail.clear();
  report(3, "certificate-vs-simulation ordering",
         criterion_bound_ordering(runs, detail), detail);

  detail.clear();
  report(4, "conformable-calculus property suite",
         criterion_property_suite(detail), detail);

  detail.clear();
  report(5, "Lyapunov monitor soundness", criterion_monitor(runs, detail),
         detail);

  detail.clear();
  report(6, "H-condition margins", criterion_h_margins(detail), detail);

  detail.clear();
  report(7, "qualitative delay effects",
         criterion_delay_effects(runs, detail), detail);

  detail.clear();
  report(8, "order-1 reduction", criterion_unit_order(detail), detail);

  if (g_failures == 0) {
    std::printf("acceptance: 8/8 criteria pass\n");
    return 0;
  }
  std::printf("acceptance: %d criteria FAILED\n", g_failures);
  return 1;
}
