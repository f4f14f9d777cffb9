#pragma once

namespace gcbot::kin {

// Arm frame: origin at the arm base on the ground plate, x lateral-right,
// y forward, z up. The elbow servo sits on the base plate; the four-bar
// linkage holds the forearm's world angle independent of the shoulder and
// keeps the effector level, so the wrist offset is always horizontal.

struct ArmGeometry {
  double shoulder_height_cm = 9.0;  // base plate to shoulder axis
  double upper_len_cm = 20.0;       // shoulder to elbow
  double fore_len_cm = 19.0;        // elbow to wrist
  double wrist_offset_cm = 8.0;     // wrist axis to gripper tip, horizontal

  void validate() const;  // throws std::invalid_argument
};

// Servo command angles, degrees in [0, 180]. The elbow field commands the
// forearm's world angle directly (base-plate servo through the linkage).
struct JointAngles {
  double base_yaw_deg = 90.0;
  double shoulder_deg = 90.0;
  double elbow_deg = 90.0;
  double wrist_roll_deg = 90.0;
  double gripper_deg = 180.0;

  bool operator==(const JointAngles&) const = default;
  void validate() const;
};

// Affine servo-to-world map: world_deg = scale * servo_deg + offset_deg.
// Defaults put servo 90 at world 0 (horizontal link / straight-ahead yaw).
struct JointCalibration {
  double scale = 1.0;
  double offset_deg = -90.0;

  double to_world_deg(double servo_deg) const { return scale * servo_deg + offset_deg; }
  double to_servo_deg(double world_deg) const { return (world_deg - offset_deg) / scale; }
  void validate() const;
};

struct ArmCalibration {
  JointCalibration yaw;
  JointCalibration shoulder;
  JointCalibration elbow;

  void validate() const;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct WorkspaceBounds {
  double x_min_cm = -46.0, x_max_cm = 46.0;
  double y_min_cm = 9.0, y_max_cm = 46.0;
  double z_min_cm = 5.0, z_max_cm = 32.0;

  void validate() const;
};

struct ServoSpec {
  double stall_torque_kg_cm = 8.5;   // mg955 at 4.8 V; 10 at 6 V; sg90: 2.5
  double preferred_min_deg = 40.0;   // band with the tighter position offset
  double preferred_max_deg = 140.0;
  double position_offset_cm = 0.5;   // worst-case effector slop per the band note
  double resolution_deg = 1.0;

  void validate() const;
};

struct ArmServoSpecs {
  ServoSpec yaw;
  ServoSpec shoulder;
  ServoSpec elbow;
  ServoSpec wrist{2.5, 40.0, 140.0, 0.5, 1.0};    // sg90
  ServoSpec gripper{2.5, 40.0, 140.0, 0.5, 1.0};  // sg90
};

struct GripperModel {
  double screw_pitch_mm_per_rev = 120.0;  // jaw travel per screw revolution
  double max_aperture_mm = 60.0;

  void validate() const;
};

struct LinkMasses {
  double upper_g = 60.0;  // CoM at mid-link
  double fore_g = 60.0;

  void validate() const;
};

// Gripper tip position for a servo pose.
Vec3 forward_kinematics(const ArmGeometry& g, const ArmCalibration& cal, const JointAngles& q);

enum class IkStatus { Ok, Unreachable, ServoLimit };

struct IkResult {
  IkStatus status = IkStatus::Unreachable;
  JointAngles angles;  // meaningful only when status == Ok

  bool ok() const { return status == IkStatus::Ok; }
};

// Closed-form IK: yaw from atan2(x, y), then the planar two-link problem on
// (radial reach, height), elbow-up branch. Wrist roll comes back level (90);
// the gripper angle is not part of the solution and is left at its default.
IkResult inverse_kinematics(const ArmGeometry& g, const ArmCalibration& cal, const Vec3& target);

bool in_workspace(const Vec3& p, const WorkspaceBounds& w);  // inclusive bounds

struct QuantizeResult {
  JointAngles angles;
  bool degraded = false;  // some joint ended up outside the preferred band
};

// Rounds every joint to the nearest multiple of spec.resolution_deg.
// Half-step ties round toward 90 (the band center).
QuantizeResult quantize(const JointAngles& q, const ServoSpec& spec);

enum class TorqueJoint { Shoulder, Elbow };

struct TorqueCheck {
  bool ok = true;
  TorqueJoint exceeded = TorqueJoint::Shoulder;  // first exceeding joint when !ok
  double shoulder_kg_cm = 0.0;
  double elbow_kg_cm = 0.0;
};

// Static gravity moments against stall torque. The linkage routes the
// forearm + payload moment about the elbow axis to the base-plate elbow
// servo; the shoulder servo carries the upper link plus everything hanging
// at the elbow pin. Torques in kg*cm, payload in grams.
TorqueCheck static_torque_check(const ArmGeometry& g, const ArmCalibration& cal,
                                const JointAngles& q, double payload_g,
                                const LinkMasses& masses, const ArmServoSpecs& specs,
                                double safety_factor = 1.0);

// Jaw opening for a gripper servo angle, linear in the screw rotation.
// Throws std::invalid_argument outside [0, 180].
double gripper_aperture(double screw_angle_deg, const GripperModel& m);

}  // namespace gcbot::kin
