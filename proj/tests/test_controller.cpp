#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "gcbot/controller.hpp"

using namespace gcbot::control;

TEST_CASE("pid zero error zero history") {
  const PidGains g{1.0, 0.5, 0.2, 100.0};
  const auto out = pid_step(g, PidState{}, 0.0, 0.05);
  CHECK(out.control == 0.0);
}

TEST_CASE("pid pure proportional") {
  const PidGains g{1.0, 0.0, 0.0, 100.0};
  const auto out = pid_step(g, PidState{}, 10.0, 0.05);
  CHECK(out.control == doctest::Approx(10.0).epsilon(1e-15));
}

TEST_CASE("pid matches the scalar recurrence term by term") {
  const PidGains g{0.5, 0.1, 0.05, 100.0};
  const double dt = 0.05;
  const double errors[] = {10.0, 8.0, 5.0};

  // Recurrence computed by hand, independent of the implementation:
  //   i_k = clamp(i_{k-1} + e_k dt);  d_k = (e_k - e_{k-1})/dt (0 at k=0)
  //   u_k = kp e_k + ki i_k + kd d_k
  double integral = 0.0, prev = 0.0;
  PidState state;
  for (int k = 0; k < 3; ++k) {
    const double e = errors[k];
    integral = std::clamp(integral + e * dt, -100.0, 100.0);
    const double deriv = k == 0 ? 0.0 : (e - prev) / dt;
    const double expected = 0.5 * e + 0.1 * integral + 0.05 * deriv;
    prev = e;

    const auto out = pid_step(g, state, e, dt);
    state = out.state;
    CHECK(out.control == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("pid rejects non-positive dt") {
  CHECK_THROWS_AS(pid_step(PidGains{1, 0, 0, 10}, PidState{}, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(pid_step(PidGains{1, 0, 0, 10}, PidState{}, 1.0, -0.1), std::invalid_argument);
}

TEST_CASE("anti-windup bounds the integral after any step sequence") {
  const PidGains g{0.1, 2.0, 0.0, 3.0};
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> err(-50, 50);
  PidState state;
  for (int k = 0; k < 2000; ++k) {
    state = pid_step(g, state, err(rng), 0.05).state;
    CHECK(std::abs(state.integral) <= 3.0);
  }
}

TEST_CASE("reset zeroes state and kills the derivative kick") {
  PidState s;
  s = pid_step(PidGains{1, 1, 1, 10}, s, 5.0, 0.05).state;
  s = pid_step(PidGains{1, 1, 1, 10}, s, 2.0, 0.05).state;
  const auto r = reset(s);
  CHECK(r.integral == 0.0);
  CHECK_FALSE(r.initialized);
  CHECK(reset(r).integral == 0.0);  // idempotent

  // First step after reset: derivative term must not fire.
  const PidGains kd_only{0.0, 0.0, 1.0, 10.0};
  CHECK(pid_step(kd_only, r, 42.0, 0.05).control == 0.0);
}

namespace {

// Table oracle mirroring the documented sign mapping, written against the
// contract rather than the implementation.
std::vector<Motion> align_oracle(double ux, double uy, double db, double ex, double ey) {
  std::vector<Motion> want;
  if (std::abs(ex) <= db && std::abs(ey) <= db) return {{MotionKind::Stop, 0.0}};
  if (std::abs(ex) > db && ux != 0.0)
    want.push_back({ux > 0 ? MotionKind::RotateCW : MotionKind::RotateCCW,
                    std::min(1.0, std::abs(ux))});
  if (std::abs(ey) > db && uy != 0.0)
    want.push_back({uy < 0 ? MotionKind::Forward : MotionKind::Backward,
                    std::min(1.0, std::abs(uy))});
  return want;
}

}  // namespace

TEST_CASE("align_command examples") {
  const auto stop = align_command(0, 0, 5, 0, 0);
  REQUIRE(stop.size() == 1);
  CHECK(stop[0].kind == MotionKind::Stop);
  CHECK(stop[0].magnitude == 0.0);

  const auto cw = align_command(0.4, 0, 5, 100, 0);
  REQUIRE(cw.size() == 1);
  CHECK(cw[0].kind == MotionKind::RotateCW);
  CHECK(cw[0].magnitude > 0.0);
}

TEST_CASE("align_command sweeps the sign table") {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> err(-300, 300), gain(0.0, 0.02);
  for (int i = 0; i < 1000; ++i) {
    const double ex = err(rng), ey = err(rng);
    const double kp = gain(rng);
    const double ux = kp * ex, uy = kp * ey;
    const auto got = align_command(ux, uy, 5.0, ex, ey);
    const auto want = align_oracle(ux, uy, 5.0, ex, ey);
    REQUIRE(got.size() == want.size());
    for (std::size_t k = 0; k < got.size(); ++k) {
      CHECK(got[k].kind == want[k].kind);
      CHECK(got[k].magnitude == doctest::Approx(want[k].magnitude).epsilon(1e-12));
      if (got[k].kind != MotionKind::Stop) {
        CHECK(got[k].magnitude > 0.0);
        CHECK(got[k].magnitude <= 1.0);
      }
    }
  }
}

TEST_CASE("align_command is a pure function of its arguments") {
  const auto a = align_command(0.3, -0.2, 5.0, 60, -40);
  const auto b = align_command(0.3, -0.2, 5.0, 60, -40);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("pure proportional loop on an integrator plant settles into the deadband") {
  // Plant: each step removes gain-proportional error, e' = e - c*u.
  const PidGains g{0.5, 0.0, 0.0, 100.0};
  const double deadband = 5.0, plant = 0.8;
  double e = 200.0;
  PidState s;
  double prev_abs = std::abs(e);
  int steps = 0;
  while (std::abs(e) > deadband && steps < 200) {
    const auto out = pid_step(g, s, e, 0.05);
    s = out.state;
    e -= plant * out.control;
    CHECK(std::abs(e) <= prev_abs);
    prev_abs = std::abs(e);
    ++steps;
  }
  CHECK(std::abs(e) <= deadband);
  CHECK(steps < 200);
}
