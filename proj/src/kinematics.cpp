#include "gcbot/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gcbot/units.hpp"

namespace gcbot::kin {

namespace {

constexpr double kServoMinDeg = 0.0;
constexpr double kServoMaxDeg = 180.0;

bool servo_in_range(double deg) { return deg >= kServoMinDeg && deg <= kServoMaxDeg; }

}  // namespace

void ArmGeometry::validate() const {
  if (!(shoulder_height_cm > 0.0)) throw std::invalid_argument("arm.geometry.shoulder_height_cm: must be > 0");
  if (!(upper_len_cm > 0.0)) throw std::invalid_argument("arm.geometry.upper_len_cm: must be > 0");
  if (!(fore_len_cm > 0.0)) throw std::invalid_argument("arm.geometry.fore_len_cm: must be > 0");
  if (!(wrist_offset_cm > 0.0)) throw std::invalid_argument("arm.geometry.wrist_offset_cm: must be > 0");
}

void JointAngles::validate() const {
  for (double a : {base_yaw_deg, shoulder_deg, elbow_deg, wrist_roll_deg, gripper_deg}) {
    if (!servo_in_range(a)) throw std::invalid_argument("joint angles: servo command outside [0, 180]");
  }
}

void JointCalibration::validate() const {
  if (scale == 0.0) throw std::invalid_argument("arm.calibration.scale: must be nonzero");
}

void ArmCalibration::validate() const {
  yaw.validate();
  shoulder.validate();
  elbow.validate();
}

void WorkspaceBounds::validate() const {
  if (!(x_min_cm < x_max_cm && y_min_cm < y_max_cm && z_min_cm < z_max_cm))
    throw std::invalid_argument("workspace: min must be below max on every axis");
}

void ServoSpec::validate() const {
  if (!(stall_torque_kg_cm > 0.0)) throw std::invalid_argument("servo.stall_torque_kg_cm: must be > 0");
  if (!(preferred_min_deg >= 0.0 && preferred_max_deg <= 180.0 && preferred_min_deg < preferred_max_deg))
    throw std::invalid_argument("servo.preferred range: must be inside [0, 180]");
  if (!(resolution_deg > 0.0)) throw std::invalid_argument("servo.resolution_deg: must be > 0");
}

void GripperModel::validate() const {
  if (!(screw_pitch_mm_per_rev > 0.0)) throw std::invalid_argument("gripper.screw_pitch_mm_per_rev: must be > 0");
  if (!(max_aperture_mm > 0.0)) throw std::invalid_argument("gripper.max_aperture_mm: must be > 0");
}

void LinkMasses::validate() const {
  if (upper_g < 0.0 || fore_g < 0.0) throw std::invalid_argument("arm.link_masses_g: must be >= 0");
}

Vec3 forward_kinematics(const ArmGeometry& g, const ArmCalibration& cal, const JointAngles& q) {
  const double yaw = deg2rad(cal.yaw.to_world_deg(q.base_yaw_deg));
  const double sh = deg2rad(cal.shoulder.to_world_deg(q.shoulder_deg));
  const double el = deg2rad(cal.elbow.to_world_deg(q.elbow_deg));

  // No pitch term anywhere: the linkage keeps the effector level, so the
  // wrist offset extends the radial reach directly.
  const double r = g.upper_len_cm * std::cos(sh) + g.fore_len_cm * std::cos(el) + g.wrist_offset_cm;
  const double z = g.shoulder_height_cm + g.upper_len_cm * std::sin(sh) + g.fore_len_cm * std::sin(el);
  return {r * std::sin(yaw), r * std::cos(yaw), z};
}

IkResult inverse_kinematics(const ArmGeometry& g, const ArmCalibration& cal, const Vec3& target) {
  const double yaw_world = rad2deg(std::atan2(target.x, target.y));
  const double r = std::hypot(target.x, target.y) - g.wrist_offset_cm;
  const double dz = target.z - g.shoulder_height_cm;

  if (r < 0.0) return {IkStatus::Unreachable, {}};

  const double l1 = g.upper_len_cm;
  const double l2 = g.fore_len_cm;
  const double rho = std::hypot(r, dz);
  if (rho > l1 + l2 || rho < std::abs(l1 - l2)) return {IkStatus::Unreachable, {}};

  // Elbow-up branch: shoulder lifted above the shoulder-to-wrist chord.
  // At the straight-arm boundary beta collapses to 0 and both links align.
  const double phi = std::atan2(dz, r);
  const double cos_beta = std::clamp((rho * rho + l1 * l1 - l2 * l2) / (2.0 * l1 * rho), -1.0, 1.0);
  const double sh_world = phi + std::acos(cos_beta);
  const double el_world =
      std::atan2(dz - l1 * std::sin(sh_world), r - l1 * std::cos(sh_world));

  JointAngles q;
  q.base_yaw_deg = cal.yaw.to_servo_deg(yaw_world);
  q.shoulder_deg = cal.shoulder.to_servo_deg(rad2deg(sh_world));
  q.elbow_deg = cal.elbow.to_servo_deg(rad2deg(el_world));
  q.wrist_roll_deg = 90.0;  // level

  if (!servo_in_range(q.base_yaw_deg) || !servo_in_range(q.shoulder_deg) ||
      !servo_in_range(q.elbow_deg)) {
    return {IkStatus::ServoLimit, {}};
  }
  return {IkStatus::Ok, q};
}

bool in_workspace(const Vec3& p, const WorkspaceBounds& w) {
  return p.x >= w.x_min_cm && p.x <= w.x_max_cm &&
         p.y >= w.y_min_cm && p.y <= w.y_max_cm &&
         p.z >= w.z_min_cm && p.z <= w.z_max_cm;
}

namespace {

double quantize_angle(double deg, double res) {
  const double steps = deg / res;
  const double lo = std::floor(steps);
  const double frac = steps - lo;
  double snapped;
  if (frac == 0.5) {
    // Tie: pick the candidate closer to the 90-degree band center.
    const double a = lo * res;
    const double b = (lo + 1.0) * res;
    snapped = std::abs(a - 90.0) <= std::abs(b - 90.0) ? a : b;
  } else {
    snapped = std::round(steps) * res;
  }
  return std::clamp(snapped, kServoMinDeg, kServoMaxDeg);
}

}  // namespace

QuantizeResult quantize(const JointAngles& q, const ServoSpec& spec) {
  QuantizeResult out;
  out.angles.base_yaw_deg = quantize_angle(q.base_yaw_deg, spec.resolution_deg);
  out.angles.shoulder_deg = quantize_angle(q.shoulder_deg, spec.resolution_deg);
  out.angles.elbow_deg = quantize_angle(q.elbow_deg, spec.resolution_deg);
  out.angles.wrist_roll_deg = quantize_angle(q.wrist_roll_deg, spec.resolution_deg);
  out.angles.gripper_deg = quantize_angle(q.gripper_deg, spec.resolution_deg);
  for (double a : {out.angles.base_yaw_deg, out.angles.shoulder_deg, out.angles.elbow_deg,
                   out.angles.wrist_roll_deg, out.angles.gripper_deg}) {
    if (a < spec.preferred_min_deg || a > spec.preferred_max_deg) out.degraded = true;
  }
  return out;
}

TorqueCheck static_torque_check(const ArmGeometry& g, const ArmCalibration& cal,
                                const JointAngles& q, double payload_g,
                                const LinkMasses& masses, const ArmServoSpecs& specs,
                                double safety_factor) {
  if (payload_g < 0.0) throw std::invalid_argument("static_torque_check: payload must be >= 0");
  if (!(safety_factor > 0.0)) throw std::invalid_argument("arm.safety_factor: must be > 0");

  const double sh = deg2rad(cal.shoulder.to_world_deg(q.shoulder_deg));
  const double el = deg2rad(cal.elbow.to_world_deg(q.elbow_deg));
  const double m_up = masses.upper_g / 1000.0;
  const double m_fore = masses.fore_g / 1000.0;
  const double m_load = payload_g / 1000.0;

  // Levers are horizontal distances from each joint axis. The forearm and
  // payload hang at the elbow pin as seen from the shoulder; their own
  // moment about the elbow axis goes through the linkage to the elbow servo.
  const double shoulder_lever = std::abs(std::cos(sh));
  const double shoulder_moment = m_up * (g.upper_len_cm / 2.0) * shoulder_lever +
                                 (m_fore + m_load) * g.upper_len_cm * shoulder_lever;
  const double elbow_moment = m_fore * (g.fore_len_cm / 2.0) * std::abs(std::cos(el)) +
                              m_load * std::abs(g.fore_len_cm * std::cos(el) + g.wrist_offset_cm);

  TorqueCheck out;
  out.shoulder_kg_cm = shoulder_moment;
  out.elbow_kg_cm = elbow_moment;
  if (shoulder_moment > specs.shoulder.stall_torque_kg_cm / safety_factor) {
    return {false, TorqueJoint::Shoulder, shoulder_moment, elbow_moment};
  }
  if (elbow_moment > specs.elbow.stall_torque_kg_cm / safety_factor) {
    return {false, TorqueJoint::Elbow, shoulder_moment, elbow_moment};
  }
  return out;
}

double gripper_aperture(double screw_angle_deg, const GripperModel& m) {
  if (!servo_in_range(screw_angle_deg))
    throw std::invalid_argument("gripper_aperture: screw angle outside [0, 180]");
  return std::clamp(m.max_aperture_mm * screw_angle_deg / 180.0, 0.0, m.max_aperture_mm);
}

}  // namespace gcbot::kin
