#include <doctest.h>

#include <cmath>
#include <vector>

#include "cfts/conformable.hpp"
#include "cfts/errors.hpp"
#include "cfts/integrate.hpp"

using namespace cfts;

namespace {

VectorField decay_field() {
  return VectorField(1, [](const State& s) { return State{-s[0]}; });
}

StepControls tight(double tol) {
  StepControls c;
  c.tol = tol;
  return c;
}

}  // namespace

TEST_CASE("linear decay matches exp to integrator tolerance") {
  SegmentFrame frame{0.0, FractionalOrder(1.0)};
  SegmentPath path =
      integrate_segment(decay_field(), {1.0}, frame, 5.0, tight(1e-10));
  for (int i = 0; i <= 50; ++i) {
    const double t = 5.0 * i / 50.0;
    CHECK(path.state_at(t)[0] ==
          doctest::Approx(std::exp(-t)).epsilon(1e-9));
  }
  CHECK(path.t_begin() == 0.0);
  CHECK(path.t_end() == 5.0);
}

TEST_CASE("harmonic oscillator stays on the circle") {
  VectorField field(2, [](const State& s) { return State{s[1], -s[0]}; });
  SegmentFrame frame{0.0, FractionalOrder(1.0)};
  SegmentPath path = integrate_segment(field, {0.0, 1.0}, frame, 10.0,
                                       tight(1e-10));
  for (int i = 0; i <= 40; ++i) {
    const double t = 10.0 * i / 40.0;
    const State s = path.state_at(t);
    CHECK(s[0] == doctest::Approx(std::sin(t)).epsilon(1e-7));
    CHECK(s[1] == doctest::Approx(std::cos(t)).epsilon(1e-7));
  }
}

TEST_CASE("power-law flow matches its closed form in conformable time") {
  // dS/du = -(1/3) sqrt(S)  =>  sqrt(S)(u) = sqrt(S0) - u/6.
  VectorField field(
      1, [](const State& s) { return State{-signed_pow(s[0], 0.5) / 3.0}; });
  SegmentFrame frame{0.0, FractionalOrder(0.98)};
  SegmentPath path = integrate_segment(field, {0.5}, frame, 4.0, tight(1e-10));
  for (int i = 0; i <= 40; ++i) {
    const double t = 4.0 * i / 40.0;
    const double u = conformable_time(t, frame);
    const double root = std::sqrt(0.5) - u / 6.0;
    CHECK(path.state_at(t)[0] ==
          doctest::Approx(root * root).epsilon(1e-9));
  }
}

TEST_CASE("dense output is continuous across accepted steps") {
  VectorField field(2, [](const State& s) { return State{s[1], -s[0]}; });
  SegmentFrame frame{0.0, FractionalOrder(1.0)};
  SegmentPath path = integrate_segment(field, {0.0, 1.0}, frame, 10.0,
                                       tight(1e-8));
  REQUIRE(path.steps().size() > 2);
  for (std::size_t i = 0; i + 1 < path.steps().size(); ++i) {
    const DenseStep& a = path.steps()[i];
    const DenseStep& b = path.steps()[i + 1];
    const State left = a.eval(a.u0 + a.h);
    for (int d = 0; d < 2; ++d) {
      CHECK(left[d] == doctest::Approx(b.y0[d]).epsilon(1e-12));
    }
  }
  // endpoints: the path starts at the initial state and ends at end_state()
  CHECK(path.state_at(path.t_begin()) == path.start_state());
  const State tail = path.state_at_u(path.u_end());
  for (int d = 0; d < 2; ++d) {
    CHECK(tail[d] == doctest::Approx(path.end_state()[d]).epsilon(1e-12));
  }
}

TEST_CASE("tighter tolerance tightens the answer") {
  SegmentFrame frame{0.0, FractionalOrder(1.0)};
  auto worst = [&](double tol) {
    SegmentPath p =
        integrate_segment(decay_field(), {1.0}, frame, 8.0, tight(tol));
    double err = 0.0;
    for (int i = 0; i <= 100; ++i) {
      const double t = 8.0 * i / 100.0;
      err = std::max(err, std::abs(p.state_at(t)[0] - std::exp(-t)));
    }
    return err;
  };
  const double loose = worst(1e-5);
  const double tight_err = worst(1e-11);
  CHECK(tight_err <= 1e-9);
  CHECK(tight_err <= loose + 1e-15);
}

TEST_CASE("non-finite field output aborts with the last good time") {
  // rhs is poisoned below 0.5, so it cannot fix the origin; opt out
  VectorField field(
      1, [](const State& s) { return State{s[0] < 0.5 ? std::nan("") : -s[0]}; },
      false);
  SegmentFrame frame{0.0, FractionalOrder(1.0)};
  try {
    integrate_segment(field, {1.0}, frame, 10.0, tight(1e-8));
    FAIL("expected IntegrationError");
  } catch (const IntegrationError& e) {
    CHECK(e.last_good_time >= 0.0);
    CHECK(e.last_good_time <= 10.0);
    REQUIRE(e.state_snapshot.size() == 1);
    CHECK(std::isfinite(e.state_snapshot[0]));
    // the state was still above the poisoned region when the run stopped
    CHECK(e.state_snapshot[0] >= 0.5 - 0.1);
  }
}

TEST_CASE("finite-time blow-up aborts instead of spinning") {
  VectorField field(1, [](const State& s) { return State{s[0] * s[0]}; });
  SegmentFrame frame{0.0, FractionalOrder(1.0)};
  try {
    integrate_segment(field, {1.0}, frame, 5.0, tight(1e-8));
    FAIL("expected IntegrationError");
  } catch (const IntegrationError& e) {
    // dy/du = y^2 from 1 blows up at u = 1
    CHECK(e.last_good_time <= 1.1);
  }
}

TEST_CASE("step budget exhaustion raises IntegrationError") {
  VectorField field(2, [](const State& s) { return State{s[1], -s[0]}; });
  SegmentFrame frame{0.0, FractionalOrder(1.0)};
  StepControls controls;
  controls.tol = 1e-12;
  controls.max_steps = 5;
  CHECK_THROWS_AS(
      integrate_segment(field, {0.0, 1.0}, frame, 1000.0, controls),
      IntegrationError);
}

TEST_CASE("zero field leaves the state bitwise constant") {
  VectorField field(2, [](const State&) { return State{0.0, 0.0}; });
  SegmentFrame frame{0.0, FractionalOrder(0.93)};
  SegmentPath path = integrate_segment(field, {0.25, -1.5}, frame, 7.0);
  for (double t : {0.0, 1.0, 3.5, 7.0}) {
    const State s = path.state_at(t);
    CHECK(s[0] == 0.25);
    CHECK(s[1] == -1.5);
  }
}

TEST_CASE("bad segment requests are configuration errors") {
  SegmentFrame frame{1.0, FractionalOrder(1.0)};
  CHECK_THROWS_AS(
      integrate_segment(decay_field(), {1.0}, frame, 0.5, tight(1e-8)),
      ConfigError);
  CHECK_THROWS_AS(
      integrate_segment(decay_field(), {1.0, 2.0}, frame, 2.0, tight(1e-8)),
      ConfigError);
}

TEST_CASE("vector field construction validates its contract") {
  CHECK_THROWS_AS(VectorField(0, [](const State& s) { return s; }),
                  ConfigError);
  CHECK_THROWS_AS(VectorField(2, {}), ConfigError);
  // origin not fixed
  CHECK_THROWS_AS(
      VectorField(1, [](const State& s) { return State{s[0] + 1.0}; }),
      ConfigError);
  // opt out for fields whose origin is not an equilibrium
  VectorField shifted(1, [](const State& s) { return State{s[0] + 1.0}; },
                      false);
  CHECK(shifted({0.0})[0] == 1.0);
  // wrong output dimension
  CHECK_THROWS_AS(VectorField(2, [](const State&) { return State{1.0}; }),
                  ConfigError);
}

TEST_CASE("zero clamp deadband pins the tail to exact zero") {
  SegmentFrame frame{0.0, FractionalOrder(1.0)};
  DeadbandPolicy clamp = DeadbandPolicy::zero_clamp(1e-3);
  SegmentPath path = integrate_segment(decay_field(), {1.0}, frame, 30.0,
                                       tight(1e-10), &clamp);
  // e^-u crosses 1e-3 near u = 6.9; well past it the state must be exactly 0
  CHECK(path.state_at(10.0)[0] == 0.0);
  CHECK(path.state_at(20.0)[0] == 0.0);
  CHECK(path.state_at(30.0)[0] == 0.0);
  CHECK(path.end_state()[0] == 0.0);
  // before the crossing the flow is untouched
  CHECK(path.state_at(2.0)[0] == doctest::Approx(std::exp(-2.0)).epsilon(1e-8));
}
