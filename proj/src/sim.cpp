#include "gcbot/sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "gcbot/units.hpp"

namespace gcbot::sim {

namespace {

constexpr double kTimeEps = 1e-9;

struct Frame2 {
  double fx, fy;  // forward unit
  double rx, ry;  // right unit
};

Frame2 robot_frame(double heading_rad) {
  return {std::sin(heading_rad), std::cos(heading_rad),
          std::cos(heading_rad), -std::sin(heading_rad)};
}

}  // namespace

double ActuatorModel::base_speed_cm_s() const {
  const double no_load = 2.0 * kPi * wheel_radius_cm * motor_rpm / 60.0;
  return std::min(base_speed_cap_cm_s, no_load);
}

void ActuatorModel::validate() const {
  if (!(wheel_radius_cm > 0.0)) throw std::invalid_argument("actuator.wheel_radius_cm: must be > 0");
  if (!(motor_rpm > 0.0)) throw std::invalid_argument("actuator.motor_rpm: must be > 0");
  if (!(base_speed_cap_cm_s > 0.0))
    throw std::invalid_argument("actuator.base_speed_cap_cm_s: must be > 0");
  if (!(yaw_rate_rad_s > 0.0)) throw std::invalid_argument("actuator.yaw_rate_rad_s: must be > 0");
  if (!(servo_slew_deg_s > 0.0))
    throw std::invalid_argument("actuator.servo_slew_deg_s: must be > 0");
  if (command_latency_s < 0.0)
    throw std::invalid_argument("actuator.command_latency_s: must be >= 0");
}

void DetectorOracle::validate() const {
  if (pixel_noise_sigma_px < 0.0)
    throw std::invalid_argument("detector.pixel_noise_sigma_px: must be >= 0");
  if (!(miss_probability >= 0.0 && miss_probability < 1.0))
    throw std::invalid_argument("detector.miss_probability: must be in [0, 1)");
  if (!(confidence_mean >= 0.0 && confidence_mean <= 1.0))
    throw std::invalid_argument("detector.confidence_mean: must be in [0, 1]");
  if (confidence_sigma < 0.0)
    throw std::invalid_argument("detector.confidence_sigma: must be >= 0");
}

std::mt19937_64 make_stream(std::uint64_t seed, std::string_view label) {
  std::vector<std::uint32_t> words{static_cast<std::uint32_t>(seed),
                                   static_cast<std::uint32_t>(seed >> 32)};
  for (unsigned char c : label) words.push_back(c);
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

DetectorStreams make_detector_streams(std::uint64_t seed) {
  return {make_stream(seed, "detector.noise"), make_stream(seed, "detector.confidence"),
          make_stream(seed, "detector.miss")};
}

kin::Vec3 object_in_arm_frame(const WorldState& w, const SimObject& obj) {
  const Frame2 f = robot_frame(w.heading_rad);
  const double dx = obj.x_cm - w.robot_x_cm;
  const double dy = obj.y_cm - w.robot_y_cm;
  return {dx * f.rx + dy * f.ry, dx * f.fx + dy * f.fy, obj.diameter_mm / 10.0 / 2.0};
}

std::optional<geom::BoundingBox> project_object(const WorldState& w, const SimObject& obj,
                                                const geom::CameraModel& cam) {
  const Frame2 f = robot_frame(w.heading_rad);
  const double cam_x = w.robot_x_cm - f.fx * cam.arm_base_offset_cm;
  const double cam_y = w.robot_y_cm - f.fy * cam.arm_base_offset_cm;
  const double dx = obj.x_cm - cam_x;
  const double dy = obj.y_cm - cam_y;
  const double forward = dx * f.fx + dy * f.fy;
  const double lateral = dx * f.rx + dy * f.ry;
  if (forward <= 0.0) return std::nullopt;

  const double h = cam.mount_height_cm;
  const double focal = cam.focal_px();
  const geom::PixelPoint center = geom::frame_center(cam);
  const double psi = std::atan2(forward, h);  // contact ray angle from vertical
  const double v_contact = center.y + focal * std::tan(psi - cam.tilt_angle_rad);
  const double axis_depth = forward * std::sin(cam.tilt_angle_rad) + h * std::cos(cam.tilt_angle_rad);
  const double u_contact = center.x + focal * lateral / axis_depth;

  if (u_contact < 0.0 || u_contact > cam.image_width_px) return std::nullopt;
  if (v_contact < 0.0 || v_contact > cam.image_height_px) return std::nullopt;

  const double size_px = focal * (obj.diameter_mm / 10.0) / axis_depth;
  return geom::BoundingBox{u_contact - size_px / 2.0, v_contact - size_px,
                           u_contact + size_px / 2.0, v_contact};
}

std::vector<mission::Detection> render_detections(const WorldState& w,
                                                  const geom::CameraModel& cam,
                                                  const DetectorOracle& oracle,
                                                  DetectorStreams& rng) {
  std::vector<mission::Detection> out;
  for (const auto& obj : w.objects) {
    if (obj.picked) continue;
    const auto box = project_object(w, obj, cam);
    if (!box) continue;

    if (oracle.miss_probability > 0.0) {
      std::uniform_real_distribution<double> miss(0.0, 1.0);
      if (miss(rng.miss) < oracle.miss_probability) continue;
    }

    geom::BoundingBox noisy = *box;
    if (oracle.pixel_noise_sigma_px > 0.0) {
      std::normal_distribution<double> jitter(0.0, oracle.pixel_noise_sigma_px);
      noisy.x_min += jitter(rng.noise);
      noisy.y_min += jitter(rng.noise);
      noisy.x_max += jitter(rng.noise);
      noisy.y_max += jitter(rng.noise);
      // Noise cannot be allowed to produce a degenerate box.
      if (noisy.x_max - noisy.x_min < 0.5) {
        const double cx = (noisy.x_min + noisy.x_max) / 2.0;
        noisy.x_min = cx - 0.25;
        noisy.x_max = cx + 0.25;
      }
      if (noisy.y_max - noisy.y_min < 0.5) {
        const double cy = (noisy.y_min + noisy.y_max) / 2.0;
        noisy.y_min = cy - 0.25;
        noisy.y_max = cy + 0.25;
      }
    }

    double confidence = oracle.confidence_mean;
    if (oracle.confidence_sigma > 0.0) {
      std::normal_distribution<double> conf(oracle.confidence_mean, oracle.confidence_sigma);
      confidence = conf(rng.confidence);
    }
    confidence = std::clamp(confidence, 0.0, 1.0);

    out.push_back({obj.class_label, confidence, noisy});
  }
  return out;
}

CommandOutcome apply_command(WorldState& w, const wire::Command& c, const ActuatorModel& model,
                             const kin::ArmGeometry& arm, const kin::ArmCalibration& cal,
                             double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("apply_command: dt must be > 0");

  if (const auto* m = std::get_if<wire::MoveCmd>(&c)) {
    const double frac = m->speed / 255.0;
    const Frame2 f = robot_frame(w.heading_rad);
    const double step = model.base_speed_cm_s() * frac * dt;
    switch (m->dir) {
      case wire::MoveDir::F:
        w.robot_x_cm += f.fx * step;
        w.robot_y_cm += f.fy * step;
        break;
      case wire::MoveDir::B:
        w.robot_x_cm -= f.fx * step;
        w.robot_y_cm -= f.fy * step;
        break;
      case wire::MoveDir::L:
        w.robot_x_cm -= f.rx * step;
        w.robot_y_cm -= f.ry * step;
        break;
      case wire::MoveDir::R:
        w.robot_x_cm += f.rx * step;
        w.robot_y_cm += f.ry * step;
        break;
      case wire::MoveDir::CW:
        w.heading_rad += model.yaw_rate_rad_s * frac * dt;
        break;
      case wire::MoveDir::CC:
        w.heading_rad -= model.yaw_rate_rad_s * frac * dt;
        break;
    }
    return {false, wire::Ack{0}};
  }
  if (std::holds_alternative<wire::StopCmd>(c)) {
    return {false, wire::Ack{0}};
  }
  if (const auto* a = std::get_if<wire::ArmToCmd>(&c)) {
    const kin::Vec3 target{a->x_mm / 10.0, a->y_mm / 10.0, a->z_mm / 10.0};
    const auto ik = kin::inverse_kinematics(arm, cal, target);
    if (!ik.ok()) return {false, wire::Ack{wire::kErrUnreachable}};
    w.servo_target.base_yaw_deg = ik.angles.base_yaw_deg;
    w.servo_target.shoulder_deg = ik.angles.shoulder_deg;
    w.servo_target.elbow_deg = ik.angles.elbow_deg;
    w.servo_target.wrist_roll_deg = ik.angles.wrist_roll_deg;
    // gripper target untouched: it belongs to GRP
    return {true, wire::Ack{0}};
  }
  if (const auto* g = std::get_if<wire::GripCmd>(&c)) {
    w.servo_target.gripper_deg = g->action == wire::GripAction::Open ? 180.0 : 0.0;
    return {true, wire::Ack{0}};
  }
  // Home
  w.servo_target = kin::JointAngles{};  // 90/90/90/90, gripper open
  return {true, wire::Ack{0}};
}

namespace {

double slew_toward(double pos, double target, double max_step) {
  const double diff = target - pos;
  if (std::abs(diff) <= max_step) return target;
  return pos + (diff > 0.0 ? max_step : -max_step);
}

}  // namespace

void advance(WorldState& w, const ActuatorModel& model, double dt) {
  const double step = model.servo_slew_deg_s * dt;
  w.servo_pos.base_yaw_deg = slew_toward(w.servo_pos.base_yaw_deg, w.servo_target.base_yaw_deg, step);
  w.servo_pos.shoulder_deg = slew_toward(w.servo_pos.shoulder_deg, w.servo_target.shoulder_deg, step);
  w.servo_pos.elbow_deg = slew_toward(w.servo_pos.elbow_deg, w.servo_target.elbow_deg, step);
  w.servo_pos.wrist_roll_deg =
      slew_toward(w.servo_pos.wrist_roll_deg, w.servo_target.wrist_roll_deg, step);
  w.servo_pos.gripper_deg = slew_toward(w.servo_pos.gripper_deg, w.servo_target.gripper_deg, step);
  w.time_s += dt;
}

bool servos_settled(const WorldState& w) {
  return w.servo_pos == w.servo_target;
}

const char* miss_reason_name(MissReason r) {
  switch (r) {
    case MissReason::TooFar: return "too_far";
    case MissReason::Aperture: return "aperture";
    case MissReason::Torque: return "torque";
  }
  return "?";
}

PickResolution resolve_pick(WorldState& w, const kin::ArmGeometry& arm,
                            const kin::ArmCalibration& cal, const kin::JointAngles& q,
                            double aperture_before_mm, const kin::GripperModel& gripper,
                            const kin::LinkMasses& masses, const kin::ArmServoSpecs& specs,
                            double safety_factor, double tolerance_cm) {
  const kin::Vec3 tip = kin::forward_kinematics(arm, cal, q);

  PickResolution res;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < w.objects.size(); ++i) {
    if (w.objects[i].picked) continue;
    const kin::Vec3 p = object_in_arm_frame(w, w.objects[i]);
    const double dist = std::hypot(tip.x - p.x, tip.y - p.y);
    if (dist < best) {
      best = dist;
      res.object_index = i;
      res.had_candidate = true;
    }
  }
  res.tip_offset_cm = best;
  if (!res.had_candidate || best > tolerance_cm) {
    res.reason = MissReason::TooFar;
    return res;
  }

  SimObject& obj = w.objects[res.object_index];
  if (aperture_before_mm < obj.diameter_mm) {
    res.reason = MissReason::Aperture;
    return res;
  }
  const auto torque = kin::static_torque_check(arm, cal, q, obj.mass_g, masses, specs, safety_factor);
  if (!torque.ok) {
    res.reason = MissReason::Torque;
    return res;
  }

  res.success = true;
  obj.picked = true;
  w.held_object = res.object_index;
  // Jaws rest on the object rather than fully closing.
  const double hold_deg =
      std::clamp(obj.diameter_mm / gripper.max_aperture_mm * 180.0, 0.0, 180.0);
  w.servo_pos.gripper_deg = hold_deg;
  w.servo_target.gripper_deg = hold_deg;
  return res;
}

void ScenarioConfig::validate() const {
  camera.validate();
  arm_geometry.validate();
  calibration.validate();
  link_masses.validate();
  servos.yaw.validate();
  servos.shoulder.validate();
  servos.elbow.validate();
  servos.wrist.validate();
  servos.gripper.validate();
  if (!(safety_factor > 0.0)) throw std::invalid_argument("arm.safety_factor: must be > 0");
  gripper.validate();
  gains_x.validate();
  gains_y.validate();
  mission.validate();
  actuator.validate();
  workspace.validate();
  detector.validate();
  for (const auto& o : objects) {
    if (!(o.diameter_mm > 0.0)) throw std::invalid_argument("objects[].diameter_mm: must be > 0");
    if (o.mass_g < 0.0) throw std::invalid_argument("objects[].mass_g: must be >= 0");
    if (o.class_label.empty()) throw std::invalid_argument("objects[].class: must not be empty");
  }
  if (!(time_budget_s > 0.0)) throw std::invalid_argument("time_budget_s: must be > 0");
  if (!(pick_tolerance_cm > 0.0)) throw std::invalid_argument("pick_tolerance_cm: must be > 0");
  if (!kin::inverse_kinematics(arm_geometry, calibration, mission.bin_pose_cm).ok())
    throw std::invalid_argument("mission.bin_pose_cm: not reachable by the arm");
}

namespace {

std::string command_payload(const wire::Command& c) {
  std::string line = wire::encode(c);
  return line.substr(0, line.rfind('*'));  // drop "*HH\n" for logs
}

struct PendingExec {
  double ready_s;
  wire::Command cmd;
};

struct PendingCompletion {
  wire::Command cmd;
  double aperture_before_mm;
};

}  // namespace

RunResult run_scenario(const ScenarioConfig& cfg, std::uint64_t seed, const RunOptions& opts) {
  cfg.validate();

  RunResult result;
  WorldState w;
  for (const auto& o : cfg.objects)
    w.objects.push_back({o.class_label, o.x_cm, o.y_cm, o.diameter_mm, o.mass_g, false});

  DetectorStreams det_rng = make_detector_streams(seed);
  std::mt19937_64 chunk_rng = make_stream(seed, "link.chunking");

  mission::MissionContext mctx{cfg.mission, cfg.camera, cfg.gains_x, cfg.gains_y,
                               cfg.arm_geometry, cfg.calibration, cfg.workspace};
  mission::MissionState ms;

  wire::LoopbackLink cmd_link;   // planner -> actuator
  wire::LoopbackLink ack_link;   // actuator -> planner
  wire::FrameSplitter cmd_split;
  wire::FrameSplitter ack_split;

  std::deque<PendingExec> exec_queue;
  std::optional<PendingCompletion> completion;
  std::vector<wire::Ack> acks_for_mission;
  std::vector<wire::Ack> actuator_acks;

  const double dt = cfg.mission.control_period_s;
  double next_detection_s = 0.0;
  std::size_t replay_idx = 0;

  Report& rep = result.report;
  rep.seed = seed;
  rep.objects_total = static_cast<int>(w.objects.size());

  while (w.time_s < cfg.time_budget_s - kTimeEps && ms.phase != mission::Phase::Done) {
    // Detection cadence.
    std::vector<mission::Detection> frame;
    bool have_frame = false;
    if (w.time_s >= next_detection_s - kTimeEps) {
      if (opts.replay_log != nullptr) {
        frame.clear();
        while (replay_idx < opts.replay_log->size() &&
               (*opts.replay_log)[replay_idx].t_s <= w.time_s + dt / 2.0) {
          frame = (*opts.replay_log)[replay_idx].detections;
          replay_idx += 1;
        }
      } else {
        frame = render_detections(w, cfg.camera, cfg.detector, det_rng);
      }
      have_frame = true;
      if (opts.record_detections) result.recorded.push_back({w.time_s, frame});
      next_detection_s += cfg.mission.detection_period_s;
    }

    // Mission tick.
    mission::StepInput in;
    in.detections = have_frame ? &frame : nullptr;
    in.acks = acks_for_mission;
    in.clock_s = w.time_s;
    in.dt_s = dt;
    const auto commands = mission::step(ms, in, mctx);
    acks_for_mission.clear();

    // Planner -> actuator, through the wire unless disabled.
    std::string sent_log;
    for (const auto& cmd : commands) {
      rep.frames_sent += 1;
      if (!sent_log.empty()) sent_log += '+';
      sent_log += command_payload(cmd);

      if (opts.wire_enabled) {
        cmd_link.send(wire::encode(cmd));
        while (!cmd_link.empty()) {
          const std::string chunk = cmd_link.recv_chunk(chunk_rng);
          for (auto& item : cmd_split.push(chunk)) {
            if (const auto* line = std::get_if<std::string>(&item)) {
              const auto decoded = wire::decode(*line);
              if (const auto* c = std::get_if<wire::Command>(&decoded)) {
                exec_queue.push_back({w.time_s + cfg.actuator.command_latency_s, *c});
              } else {
                rep.decode_errors += 1;
                actuator_acks.push_back(wire::Ack{std::get<wire::WireError>(decoded).code});
              }
            } else {
              rep.decode_errors += 1;
              actuator_acks.push_back(wire::Ack{std::get<wire::WireError>(item).code});
            }
          }
        }
      } else {
        exec_queue.push_back({w.time_s + cfg.actuator.command_latency_s, cmd});
      }
    }

    // Actuator executes whatever is due.
    while (!exec_queue.empty() && exec_queue.front().ready_s <= w.time_s + kTimeEps) {
      const wire::Command cmd = exec_queue.front().cmd;
      exec_queue.pop_front();
      const double aperture_before =
          kin::gripper_aperture(w.servo_pos.gripper_deg, cfg.gripper);
      const auto outcome =
          apply_command(w, cmd, cfg.actuator, cfg.arm_geometry, cfg.calibration, dt);
      if (outcome.pending) {
        completion = PendingCompletion{cmd, aperture_before};
      } else {
        actuator_acks.push_back(outcome.ack);
      }
    }

    advance(w, cfg.actuator, dt);

    // Completion acks for servo motions that just settled.
    if (completion && servos_settled(w)) {
      wire::Ack ack{0};
      const auto* grip = std::get_if<wire::GripCmd>(&completion->cmd);
      if (grip != nullptr && grip->action == wire::GripAction::Close) {
        const auto res =
            resolve_pick(w, cfg.arm_geometry, cfg.calibration, w.servo_pos,
                         completion->aperture_before_mm, cfg.gripper, cfg.link_masses,
                         cfg.servos, cfg.safety_factor, cfg.pick_tolerance_cm);
        rep.attempts += 1;
        rep.attempt_log.push_back({w.time_s, res.success,
                                   res.success ? "" : miss_reason_name(res.reason),
                                   res.tip_offset_cm});
        if (res.success) rep.picked += 1;
        ack = res.success ? wire::Ack{0} : wire::Ack{wire::kErrUnreachable};
      } else if (grip != nullptr && grip->action == wire::GripAction::Open) {
        if (w.held_object) {
          w.bin_count += 1;
          w.held_object.reset();
        }
      }
      completion.reset();
      actuator_acks.push_back(ack);
    }

    // Actuator -> planner ack channel.
    for (const auto& ack : actuator_acks) {
      if (opts.wire_enabled) {
        ack_link.send(wire::encode_ack(ack));
        while (!ack_link.empty()) {
          const std::string chunk = ack_link.recv_chunk(chunk_rng);
          for (auto& item : ack_split.push(chunk)) {
            if (const auto* line = std::get_if<std::string>(&item)) {
              const auto decoded = wire::decode_ack(*line);
              if (const auto* a = std::get_if<wire::Ack>(&decoded)) {
                acks_for_mission.push_back(*a);
                rep.acks_received += 1;
              } else {
                rep.decode_errors += 1;
              }
            } else {
              rep.decode_errors += 1;
            }
          }
        }
      } else {
        acks_for_mission.push_back(ack);
        rep.acks_received += 1;
      }
    }
    actuator_acks.clear();

    // Trajectory row, one per control tick.
    TrajectoryRow row;
    row.t_s = w.time_s;
    row.x_cm = w.robot_x_cm;
    row.y_cm = w.robot_y_cm;
    row.heading_rad = w.heading_rad;
    row.state = mission::phase_name(ms.phase);
    row.command = sent_log.empty() ? "-" : sent_log;
    for (const auto& o : w.objects) row.object_picked.push_back(o.picked);
    result.trajectory.push_back(std::move(row));
    rep.ticks += 1;
  }

  rep.sim_duration_s = w.time_s;
  rep.final_state = mission::phase_name(ms.phase);
  rep.bin_count = w.bin_count;
  return result;
}

}  // namespace gcbot::sim
