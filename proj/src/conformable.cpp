#include "cfts/conformable.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace cfts {

FractionalOrder::FractionalOrder(double q) : q_(q) {
  if (!(q > 0.0) || !(q <= 1.0) || !std::isfinite(q)) {
    throw std::invalid_argument(
        "fractional order must lie in (0, 1], got " + std::to_string(q));
  }
}

double conformable_time(double t, const SegmentFrame& frame) {
  const double dt = t - frame.t_start;
  if (dt < 0.0) {
    throw std::domain_error("conformable_time: t precedes the segment anchor");
  }
  if (frame.order.is_unit()) return dt;
  const double q = frame.order.value();
  return std::pow(dt, q) / q;
}

double inverse_conformable_time(double u, const SegmentFrame& frame) {
  if (u < 0.0) {
    throw std::domain_error("inverse_conformable_time: negative u");
  }
  if (frame.order.is_unit()) return frame.t_start + u;
  const double q = frame.order.value();
  return frame.t_start + std::pow(q * u, 1.0 / q);
}

double conformable_derivative(const std::function<double(double)>& h, double t,
                              const SegmentFrame& frame, double step) {
  const double dt = t - frame.t_start;
  if (dt <= 0.0) {
    throw std::domain_error(
        "conformable_derivative: t must lie strictly past the anchor");
  }
  if (step <= 0.0) step = std::max(1e-6, 1e-6 * std::abs(t));
  const double slope = (h(t + step) - h(t - step)) / (2.0 * step);
  const double q = frame.order.value();
  return std::pow(dt, 1.0 - q) * slope;
}

namespace {

struct QuadratureCheck {
  static double sample(const std::function<double(double)>& g, double u) {
    const double v = g(u);
    if (!std::isfinite(v)) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.17g", u);
      throw std::domain_error(
          std::string("conformable_integral: non-finite integrand at u = ") +
          buf);
    }
    return v;
  }
};

// Adaptive Simpson with an absolute accuracy budget distributed over the
// recursion. Depth is capped; the cap is generous for the smooth rescaled
// integrands this sees.
double simpson_rec(const std::function<double(double)>& g, double a, double b,
                   double fa, double fm, double fb, double whole, double tol,
                   int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = QuadratureCheck::sample(g, lm);
  const double frm = QuadratureCheck::sample(g, rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return simpson_rec(g, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(g, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double conformable_integral(const std::function<double(double)>& h,
                            double t_end, const SegmentFrame& frame,
                            double tol) {
  const double u_end = conformable_time(t_end, frame);
  if (u_end == 0.0) return 0.0;
  auto g = [&](double u) { return h(inverse_conformable_time(u, frame)); };
  const double fa = QuadratureCheck::sample(g, 0.0);
  const double fb = QuadratureCheck::sample(g, u_end);
  const double fm = QuadratureCheck::sample(g, 0.5 * u_end);
  const double whole = u_end / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(g, 0.0, u_end, fa, fm, fb, whole, std::max(tol, 1e-15),
                     48);
}

double signed_pow(double x, double p) {
  if (x == 0.0) return 0.0;
  return x > 0.0 ? std::pow(x, p) : -std::pow(-x, p);
}

}  // namespace cfts
