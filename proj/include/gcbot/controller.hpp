#pragma once

#include <vector>

namespace gcbot::control {

struct PidGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
  double integral_limit = 1000.0;  // anti-windup clamp, pixel-seconds

  void validate() const;  // throws std::invalid_argument
};

struct PidState {
  double integral = 0.0;
  double prev_error = 0.0;
  bool initialized = false;
};

struct PidOutput {
  double control = 0.0;
  PidState state;
};

// One discrete PID update. The derivative term is zero on the first step
// after a reset; the integral is clamped to +/- integral_limit before use.
// Throws std::invalid_argument when dt <= 0.
PidOutput pid_step(const PidGains& gains, const PidState& state, double error, double dt);

PidState reset(const PidState& state);

enum class MotionKind {
  Forward,
  Backward,
  StrafeLeft,
  StrafeRight,
  RotateCW,
  RotateCCW,
  Stop,
};

struct Motion {
  MotionKind kind = MotionKind::Stop;
  double magnitude = 0.0;  // 0 for Stop, (0, 1] otherwise

  bool operator==(const Motion&) const = default;
};

// Maps per-axis PID outputs to base motions. Sign table:
//   |ex| <= deadband and |ey| <= deadband          -> {Stop}
//   |ex| >  deadband: ux > 0 -> RotateCW, ux < 0 -> RotateCCW
//   |ey| >  deadband: uy < 0 -> Forward,  uy > 0 -> Backward
// Magnitudes are min(1, |u|); an axis with u == 0 emits nothing.
std::vector<Motion> align_command(double ux, double uy, double deadband, double ex, double ey);

}  // namespace gcbot::control
