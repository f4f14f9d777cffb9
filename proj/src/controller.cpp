#include "gcbot/controller.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gcbot::control {

void PidGains::validate() const {
  if (kp < 0.0 || ki < 0.0 || kd < 0.0)
    throw std::invalid_argument("controller gains: kp, ki, kd must be >= 0");
  if (!(integral_limit > 0.0))
    throw std::invalid_argument("controller.integral_limit: must be > 0");
}

PidOutput pid_step(const PidGains& gains, const PidState& state, double error, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("pid_step: dt must be > 0");

  PidState next = state;
  next.integral = std::clamp(state.integral + error * dt,
                             -gains.integral_limit, gains.integral_limit);
  const double derivative = state.initialized ? (error - state.prev_error) / dt : 0.0;
  next.prev_error = error;
  next.initialized = true;

  const double control = gains.kp * error + gains.ki * next.integral + gains.kd * derivative;
  return {control, next};
}

PidState reset(const PidState&) { return PidState{}; }

std::vector<Motion> align_command(double ux, double uy, double deadband, double ex, double ey) {
  if (deadband < 0.0) throw std::invalid_argument("align_command: deadband must be >= 0");

  std::vector<Motion> out;
  if (std::abs(ex) <= deadband && std::abs(ey) <= deadband) {
    out.push_back({MotionKind::Stop, 0.0});
    return out;
  }
  if (std::abs(ex) > deadband && ux != 0.0) {
    out.push_back({ux > 0.0 ? MotionKind::RotateCW : MotionKind::RotateCCW,
                   std::min(1.0, std::abs(ux))});
  }
  if (std::abs(ey) > deadband && uy != 0.0) {
    out.push_back({uy < 0.0 ? MotionKind::Forward : MotionKind::Backward,
                   std::min(1.0, std::abs(uy))});
  }
  return out;
}

}  // namespace gcbot::control
