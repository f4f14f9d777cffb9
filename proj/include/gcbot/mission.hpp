#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gcbot/controller.hpp"
#include "gcbot/geometry.hpp"
#include "gcbot/kinematics.hpp"
#include "gcbot/protocol.hpp"

namespace gcbot::mission {

struct Detection {
  std::string class_label;
  double confidence = 0.0;  // [0, 1]
  geom::BoundingBox bbox;
};

struct MissionConfig {
  double confidence_threshold = 0.90;
  std::vector<std::string> target_classes = {"bottle"};
  double deadband_px = 5.0;
  double detection_period_s = 1.0 / 3.5;
  double control_period_s = 0.05;
  int pick_target = 1;             // deposits needed before Done
  kin::Vec3 bin_pose_cm{-20.0, 15.0, 20.0};
  double grasp_z_cm = 5.0;         // arm-frame z for the grasp approach
  int scan_speed = 64;             // wire speed of the Search rotation sweep
  double approach_speed_max = 0.4; // command magnitude ceiling while closing in
  int max_grip_retries = 2;        // failed grabs before the target is abandoned
  double lock_min_iou = 0.3;       // re-detection gate against the locked bbox
  int max_loss_ticks = 3;          // consecutive unmatched detection frames tolerated

  void validate() const;  // throws std::invalid_argument naming the field
};

enum class Phase { Search, Align, Range, Approach, Pick, Deposit, Done };

const char* phase_name(Phase p);

// Everything the state machine needs besides its own state.
struct MissionContext {
  MissionConfig cfg;
  geom::CameraModel camera;
  control::PidGains gains_x;  // pixel-x -> rotation
  control::PidGains gains_y;  // pixel-y -> forward/backward
  kin::ArmGeometry arm;
  kin::ArmCalibration calibration;
  kin::WorkspaceBounds workspace;
};

struct TargetLock {
  geom::BoundingBox bbox;       // last matched detection
  int loss_ticks = 0;           // consecutive detection frames without a match
};

struct MissionState {
  Phase phase = Phase::Search;
  std::optional<TargetLock> lock;
  std::optional<kin::Vec3> target_arm_cm;  // last Range result
  control::PidState pid_x;
  control::PidState pid_y;
  geom::AlignmentError held_error;         // controller input between detections
  bool have_error = false;

  // Pick plan: remaining wire commands, sent one per ack (stop-and-wait).
  std::vector<wire::Command> plan;
  std::size_t plan_idx = 0;
  bool awaiting_ack = false;
  Phase plan_done_phase = Phase::Deposit;

  int grip_retries = 0;
  int picked = 0;
  std::vector<geom::BoundingBox> abandoned;  // targets given up on, skipped on re-detection
};

struct StepInput {
  const std::vector<Detection>* detections = nullptr;  // null when no frame this tick
  std::span<const wire::Ack> acks;
  double clock_s = 0.0;
  double dt_s = 0.05;
};

// Confidence/class gate, ordered best-first: confidence desc, then larger
// area, then leftmost x_min.
std::vector<Detection> filter_detections(const std::vector<Detection>& dets,
                                         const MissionConfig& cfg);

double bbox_iou(const geom::BoundingBox& a, const geom::BoundingBox& b);

// One control tick. Deterministic in (state, input, ctx); mutates state and
// returns the wire commands to transmit this tick.
std::vector<wire::Command> step(MissionState& state, const StepInput& input,
                                const MissionContext& ctx);

}  // namespace gcbot::mission
