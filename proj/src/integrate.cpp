#include "cfts/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "cfts/errors.hpp"

namespace cfts {

namespace {

// Dormand-Prince 5(4) tableau with the standard fourth-order interpolant.
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187,
                 A53 = 64448.0 / 6561, A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                 B5 = -2187.0 / 6784, B6 = 11.0 / 84;
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                 E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;
constexpr double P[7][4] = {
    {1.0, -8048581381.0 / 2820520608.0, 8663915743.0 / 2820520608.0,
     -12715105075.0 / 11282082432.0},
    {0.0, 0.0, 0.0, 0.0},
    {0.0, 131558114200.0 / 32700410799.0, -68118460800.0 / 10900136933.0,
     87487479700.0 / 32700410799.0},
    {0.0, -1754552775.0 / 470086768.0, 14199869525.0 / 1410260304.0,
     -10690763975.0 / 1880347072.0},
    {0.0, 127303824393.0 / 49829197408.0, -318862633887.0 / 49829197408.0,
     701980252875.0 / 199316789632.0},
    {0.0, -282668133.0 / 205662961.0, 2019193451.0 / 616988883.0,
     -1453857185.0 / 822651844.0},
    {0.0, 40617522.0 / 29380423.0, -110615467.0 / 29380423.0,
     69997945.0 / 29380423.0}};

bool finite(const State& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace

State DenseStep::eval(double u) const {
  const std::size_t n = y0.size();
  State out = y0;
  if (h == 0.0) return out;
  const double theta = std::clamp((u - u0) / h, 0.0, 1.0);
  for (int s = 0; s < 7; ++s) {
    // Horner evaluation of theta * (P0 + theta (P1 + theta (P2 + theta P3)))
    double w = P[s][3];
    w = P[s][2] + theta * w;
    w = P[s][1] + theta * w;
    w = P[s][0] + theta * w;
    w *= theta * h;
    if (w == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) out[i] += w * k[s][i];
  }
  return out;
}

SegmentPath::SegmentPath(SegmentFrame frame, double t_end, State start)
    : frame_(frame),
      t_end_(t_end),
      u_end_(conformable_time(t_end, frame)),
      start_(start),
      end_(std::move(start)) {}

State SegmentPath::state_at_u(double u) const {
  if (steps_.empty()) return start_;
  if (u <= steps_.front().u0) return steps_.front().y0;
  const DenseStep* step = &steps_.back();
  // Last step whose interval starts at or before u.
  std::size_t lo = 0, hi = steps_.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi + 1) / 2;
    if (steps_[mid].u0 <= u) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  step = &steps_[lo];
  if (u >= step->u0 + step->h) {
    // Clamp round-off past the final step to the recorded end state.
    if (lo + 1 >= steps_.size()) return end_;
  }
  return step->eval(u);
}

State SegmentPath::state_at(double t) const {
  return state_at_u(conformable_time(t, frame_));
}

void SegmentPath::append_step(DenseStep step, const State& y_next) {
  steps_.push_back(std::move(step));
  end_ = y_next;
}

DeadbandPolicy DeadbandPolicy::zero_clamp(double threshold) {
  DeadbandPolicy p;
  p.threshold = threshold;
  p.measure = [](const State& s) { return norm2(s); };
  p.project = [](State& s) { std::fill(s.begin(), s.end(), 0.0); };
  return p;
}

SegmentPath integrate_segment(const VectorField& field, const State& start,
                              const SegmentFrame& frame, double t_end,
                              const StepControls& controls,
                              const DeadbandPolicy* deadband) {
  const std::size_t n = start.size();
  if (!(t_end >= frame.t_start)) {
    throw ConfigError("integrate_segment: t_end precedes the segment anchor");
  }
  SegmentPath path(frame, t_end, start);
  const double U = path.u_end();
  if (U == 0.0) return path;

  const double tol = std::max(controls.tol, 1e-14);
  auto report_time = [&](double u) {
    return inverse_conformable_time(u, frame);
  };
  auto fail = [&](const std::string& why, double u, const State& y) {
    char buf[64];
    const double t = report_time(u);
    std::snprintf(buf, sizeof(buf), "%.17g", t);
    throw IntegrationError(
        "integrate_segment: " + why + " near t = " + std::string(buf), t, y);
  };

  State y = start;
  double u = 0.0;
  State k1 = field(y);
  if (k1.size() != n) {
    throw ConfigError("integrate_segment: field dimension mismatch");
  }
  if (!finite(k1)) fail("non-finite field output", u, y);

  // Initial step from the classic two-probe heuristic.
  double h;
  {
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = tol + tol * std::abs(y[i]);
      d0 += (y[i] / sc) * (y[i] / sc);
      d1 += (k1[i] / sc) * (k1[i] / sc);
    }
    d0 = std::sqrt(d0 / n);
    d1 = std::sqrt(d1 / n);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, U);
    State y1(n);
    for (std::size_t i = 0; i < n; ++i) y1[i] = y[i] + h0 * k1[i];
    State f1 = field(y1);
    double d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = tol + tol * std::abs(y[i]);
      d2 += ((f1[i] - k1[i]) / sc) * ((f1[i] - k1[i]) / sc);
    }
    d2 = std::sqrt(d2 / n) / h0;
    const double dmax = std::max(d1, d2);
    const double h1 =
        dmax > 1e-15 ? std::pow(0.01 / dmax, 0.2) : std::max(1e-6, h0 * 1e-3);
    h = std::min({100.0 * h0, h1, U});
    h = std::max(h, controls.u_step_floor);
  }

  State k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n);
  bool rejected = false;
  std::size_t steps = 0;

  while (u < U) {
    if (++steps > controls.max_steps) {
      fail("step budget exhausted", u, y);
    }
    const bool floored = h <= controls.u_step_floor;
    h = std::max(h, controls.u_step_floor);
    if (u + h >= U) h = U - u;

    auto stage = [&](State& k, const std::array<double, 6>& a, int m) {
      for (std::size_t i = 0; i < n; ++i) {
        double acc = y[i];
        const double* ks[6] = {k1.data(), k2.data(), k3.data(),
                               k4.data(), k5.data(), k6.data()};
        for (int j = 0; j < m; ++j) acc += h * a[j] * ks[j][i];
        ytmp[i] = acc;
      }
      k = field(ytmp);
    };
    stage(k2, {A21}, 1);
    stage(k3, {A31, A32}, 2);
    stage(k4, {A41, A42, A43}, 3);
    stage(k5, {A51, A52, A53, A54}, 4);
    stage(k6, {A61, A62, A63, A64, A65}, 5);
    for (std::size_t i = 0; i < n; ++i) {
      ynew[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] +
                            B6 * k6[i]);
    }
    k7 = field(ynew);

    if (!finite(k2) || !finite(k3) || !finite(k4) || !finite(k5) ||
        !finite(k6) || !finite(k7) || !finite(ynew)) {
      fail("non-finite state or field output", u, y);
    }

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] +
                            E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
      const double sc =
          tol + tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err += (e / sc) * (e / sc);
    }
    err = std::sqrt(err / n);

    if (err <= 1.0 || floored) {
      if (floored && err > 1e8) {
        fail("state blow-up at the step floor", u, y);
      }
      DenseStep step;
      step.u0 = u;
      step.h = h;
      step.y0 = y;
      step.k = {k1, k2, k3, k4, k5, k6, k7};
      u += h;
      y = ynew;
      path.append_step(std::move(step), y);
      k1 = k7;  // first-same-as-last
      if (deadband && deadband->measure && u < U) {
        if (deadband->measure(y) <= deadband->threshold) {
          State projected = y;
          deadband->project(projected);
          if (projected != y) {
            y = projected;
            path.set_end_state(y);
            k1 = field(y);
            if (!finite(k1)) fail("non-finite field output", u, y);
          }
        }
      }
      double factor = err <= 1e-30 ? 10.0 : 0.9 * std::pow(err, -0.2);
      factor = std::clamp(factor, 0.2, 10.0);
      if (rejected) factor = std::min(factor, 1.0);
      rejected = false;
      h *= factor;
    } else {
      rejected = true;
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
    }
  }
  return path;
}

}  // namespace cfts
