#pragma once

#include <functional>

namespace cfts {

// Fractional order q of the conformable derivative, restricted to (0, 1].
// q = 1 recovers the classical first-order derivative.
class FractionalOrder {
 public:
  explicit FractionalOrder(double q);
  double value() const { return q_; }
  bool is_unit() const { return q_ == 1.0; }

 private:
  double q_;
};

// Anchor for one inter-impulse segment. The conformable derivative is always
// taken relative to the segment's start time, so every impulse restarts the
// frame at the impulse instant.
struct SegmentFrame {
  double t_start;
  FractionalOrder order;
};

// u = (t - t_start)^q / q. Strictly increasing in t, zero at the anchor.
// Throws std::domain_error for t < t_start.
double conformable_time(double t, const SegmentFrame& frame);

// Inverse of conformable_time: t = t_start + (q u)^(1/q).
// Throws std::domain_error for u < 0.
double inverse_conformable_time(double u, const SegmentFrame& frame);

// Numeric conformable derivative (t - t_start)^(1-q) h'(t) via a central
// difference. step <= 0 selects max(1e-6, 1e-6 |t|). Requires t > t_start;
// the anchor itself is outside the numeric domain.
double conformable_derivative(const std::function<double(double)>& h, double t,
                              const SegmentFrame& frame, double step = 0.0);

// Conformable integral of h over [t_start, t_end]:
//   integral of h(s) (s - t_start)^(q-1) ds,
// evaluated as an ordinary integral in the rescaled variable u. Adaptive
// quadrature to absolute/relative tolerance tol. A non-finite integrand
// sample raises std::domain_error naming the offending abscissa.
double conformable_integral(const std::function<double(double)>& h,
                            double t_end, const SegmentFrame& frame,
                            double tol = 1e-10);

// sign(x) |x|^p with signed_pow(0, p) = 0. Keeps fractional powers of
// slightly negative round-off values finite instead of producing NaN.
double signed_pow(double x, double p);

}  // namespace cfts
