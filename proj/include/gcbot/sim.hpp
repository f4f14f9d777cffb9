#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "gcbot/controller.hpp"
#include "gcbot/geometry.hpp"
#include "gcbot/kinematics.hpp"
#include "gcbot/mission.hpp"
#include "gcbot/protocol.hpp"

namespace gcbot::sim {

// World frame: x right, y forward at heading 0, heading clockwise-positive
// (robot forward = (sin h, cos h)). The robot pose is the arm-base origin;
// the camera sits arm_base_offset behind it along the forward axis.

struct SimObject {
  std::string class_label = "bottle";
  double x_cm = 0.0;
  double y_cm = 0.0;
  double diameter_mm = 30.0;
  double mass_g = 150.0;
  bool picked = false;
};

struct WorldState {
  double robot_x_cm = 0.0;
  double robot_y_cm = 0.0;
  double heading_rad = 0.0;
  std::vector<SimObject> objects;
  int bin_count = 0;
  double time_s = 0.0;
  kin::JointAngles servo_pos;     // actuator-side servo state, slewed by advance()
  kin::JointAngles servo_target;
  std::optional<std::size_t> held_object;
};

struct ActuatorModel {
  double wheel_radius_cm = 3.0;
  double motor_rpm = 300.0;          // no-load; caps the achievable base speed
  double base_speed_cap_cm_s = 20.0; // loaded full-command speed
  double yaw_rate_rad_s = 0.3;
  double servo_slew_deg_s = 240.0;
  double command_latency_s = 0.0;

  // Full-command translation speed: the load cap, never above no-load.
  double base_speed_cm_s() const;
  void validate() const;
};

struct DetectorOracle {
  double pixel_noise_sigma_px = 2.0;
  double miss_probability = 0.05;
  double confidence_mean = 0.93;
  double confidence_sigma = 0.04;

  void validate() const;
};

// One independent engine per consumer, derived from (seed, label) so adding
// a consumer never shifts another's draws.
std::mt19937_64 make_stream(std::uint64_t seed, std::string_view label);

struct DetectorStreams {
  std::mt19937_64 noise;
  std::mt19937_64 confidence;
  std::mt19937_64 miss;
};

DetectorStreams make_detector_streams(std::uint64_t seed);

// Object position in the arm-base frame (x lateral-right, y forward, z up to
// the grasp plane is the caller's choice; z here is the object center height).
kin::Vec3 object_in_arm_frame(const WorldState& w, const SimObject& obj);

// Noise-free pinhole projection of one object; empty when culled (behind the
// camera or its ground-contact pixel outside the frame). The bbox bottom
// edge is the contact point's row, so ranging that row inverts exactly.
std::optional<geom::BoundingBox> project_object(const WorldState& w, const SimObject& obj,
                                                const geom::CameraModel& cam);

std::vector<mission::Detection> render_detections(const WorldState& w,
                                                  const geom::CameraModel& cam,
                                                  const DetectorOracle& oracle,
                                                  DetectorStreams& rng);

struct CommandOutcome {
  bool pending = false;  // ack deferred until the servo motion completes
  wire::Ack ack;         // meaningful when pending == false
};

// Move/Stop integrate base motion over dt immediately; ArmTo/Grip/Home set
// servo targets (executed by advance) and ack on completion. An unreachable
// ArmTo leaves the world untouched and acks Err(5).
CommandOutcome apply_command(WorldState& w, const wire::Command& c, const ActuatorModel& model,
                             const kin::ArmGeometry& arm, const kin::ArmCalibration& cal,
                             double dt);

// Slews servos toward their targets and advances the clock.
void advance(WorldState& w, const ActuatorModel& model, double dt);

bool servos_settled(const WorldState& w);

enum class MissReason { TooFar, Aperture, Torque };

const char* miss_reason_name(MissReason r);

struct PickResolution {
  bool success = false;
  MissReason reason = MissReason::TooFar;
  double tip_offset_cm = 0.0;
  std::size_t object_index = 0;
  bool had_candidate = false;
};

// Grasp check at jaw closure: tip within tolerance of the nearest unpicked
// object (horizontal), jaw was open wide enough before closing, and the
// static torque check admits the object's mass. Success marks the object
// picked and held.
PickResolution resolve_pick(WorldState& w, const kin::ArmGeometry& arm,
                            const kin::ArmCalibration& cal, const kin::JointAngles& q,
                            double aperture_before_mm, const kin::GripperModel& gripper,
                            const kin::LinkMasses& masses, const kin::ArmServoSpecs& specs,
                            double safety_factor, double tolerance_cm);

struct ScenarioObject {
  std::string class_label = "bottle";
  double x_cm = 0.0;
  double y_cm = 0.0;
  double diameter_mm = 30.0;
  double mass_g = 150.0;
};

struct ScenarioConfig {
  geom::CameraModel camera;
  kin::ArmGeometry arm_geometry;
  kin::ArmCalibration calibration;
  kin::LinkMasses link_masses;
  kin::ArmServoSpecs servos;
  double safety_factor = 1.0;
  kin::GripperModel gripper;
  control::PidGains gains_x{0.0006, 0.0, 0.001, 1000.0};
  control::PidGains gains_y{0.002, 0.0, 0.001, 1000.0};
  mission::MissionConfig mission;
  ActuatorModel actuator;
  kin::WorkspaceBounds workspace;
  DetectorOracle detector;
  std::vector<ScenarioObject> objects;
  double time_budget_s = 120.0;
  double pick_tolerance_cm = 2.0;

  void validate() const;  // throws std::invalid_argument naming the field
};

struct PickAttempt {
  double t_s = 0.0;
  bool success = false;
  std::string miss_reason;  // empty on success
  double tip_offset_cm = 0.0;
};

struct Report {
  std::uint64_t seed = 0;
  int objects_total = 0;
  int picked = 0;
  int attempts = 0;
  std::vector<PickAttempt> attempt_log;
  double sim_duration_s = 0.0;
  long ticks = 0;
  std::string final_state;
  int bin_count = 0;
  long frames_sent = 0;
  long acks_received = 0;
  long decode_errors = 0;
};

struct TrajectoryRow {
  double t_s = 0.0;
  double x_cm = 0.0;
  double y_cm = 0.0;
  double heading_rad = 0.0;
  std::string state;
  std::string command;  // wire payloads sent this tick, '+'-joined, "-" if none
  std::vector<bool> object_picked;
};

struct DetectionFrame {
  double t_s = 0.0;
  std::vector<mission::Detection> detections;
};

struct RunOptions {
  bool wire_enabled = true;  // route every command/ack through encode->bytes->decode
  bool record_detections = false;
  const std::vector<DetectionFrame>* replay_log = nullptr;  // replaces the oracle
};

struct RunResult {
  Report report;
  std::vector<TrajectoryRow> trajectory;
  std::vector<DetectionFrame> recorded;
};

// Fixed-timestep closed loop; bit-identical results for identical
// (config, seed).
RunResult run_scenario(const ScenarioConfig& cfg, std::uint64_t seed,
                       const RunOptions& opts = {});

}  // namespace gcbot::sim
