#include "gcbot/mission.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gcbot::mission {

void MissionConfig::validate() const {
  if (!(confidence_threshold >= 0.0 && confidence_threshold <= 1.0))
    throw std::invalid_argument("mission.confidence_threshold: must be in [0, 1]");
  if (!(detection_period_s > 0.0))
    throw std::invalid_argument("mission.detection_period_s: must be > 0");
  if (!(control_period_s > 0.0))
    throw std::invalid_argument("mission.control_period_s: must be > 0");
  if (deadband_px < 0.0) throw std::invalid_argument("mission.deadband_px: must be >= 0");
  if (pick_target < 0) throw std::invalid_argument("mission.pick_target: must be >= 0");
  if (scan_speed < 1 || scan_speed > 255)
    throw std::invalid_argument("mission.scan_speed: must be in [1, 255]");
  if (!(approach_speed_max > 0.0 && approach_speed_max <= 1.0))
    throw std::invalid_argument("mission.approach_speed_max: must be in (0, 1]");
  if (max_grip_retries < 0) throw std::invalid_argument("mission.max_grip_retries: must be >= 0");
  if (!(lock_min_iou > 0.0 && lock_min_iou <= 1.0))
    throw std::invalid_argument("mission.lock_min_iou: must be in (0, 1]");
  if (max_loss_ticks < 0) throw std::invalid_argument("mission.max_loss_ticks: must be >= 0");
}

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::Search: return "Search";
    case Phase::Align: return "Align";
    case Phase::Range: return "Range";
    case Phase::Approach: return "Approach";
    case Phase::Pick: return "Pick";
    case Phase::Deposit: return "Deposit";
    case Phase::Done: return "Done";
  }
  return "?";
}

std::vector<Detection> filter_detections(const std::vector<Detection>& dets,
                                         const MissionConfig& cfg) {
  std::vector<Detection> kept;
  for (const auto& d : dets) {
    const bool targeted = std::find(cfg.target_classes.begin(), cfg.target_classes.end(),
                                    d.class_label) != cfg.target_classes.end();
    if (targeted && d.confidence >= cfg.confidence_threshold) kept.push_back(d);
  }
  std::stable_sort(kept.begin(), kept.end(), [](const Detection& a, const Detection& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.bbox.area() != b.bbox.area()) return a.bbox.area() > b.bbox.area();
    return a.bbox.x_min < b.bbox.x_min;
  });
  return kept;
}

double bbox_iou(const geom::BoundingBox& a, const geom::BoundingBox& b) {
  const double ix = std::max(0.0, std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min));
  const double iy = std::max(0.0, std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min));
  const double inter = ix * iy;
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

namespace {

wire::Command motion_to_wire(const control::Motion& m) {
  if (m.kind == control::MotionKind::Stop) return wire::StopCmd{};
  const int speed = static_cast<int>(std::clamp(std::lround(m.magnitude * 255.0), 1L, 255L));
  wire::MoveDir dir = wire::MoveDir::F;
  switch (m.kind) {
    case control::MotionKind::Forward: dir = wire::MoveDir::F; break;
    case control::MotionKind::Backward: dir = wire::MoveDir::B; break;
    case control::MotionKind::StrafeLeft: dir = wire::MoveDir::L; break;
    case control::MotionKind::StrafeRight: dir = wire::MoveDir::R; break;
    case control::MotionKind::RotateCW: dir = wire::MoveDir::CW; break;
    case control::MotionKind::RotateCCW: dir = wire::MoveDir::CC; break;
    case control::MotionKind::Stop: break;
  }
  return wire::MoveCmd{dir, speed};
}

wire::ArmToCmd arm_to_mm(const kin::Vec3& p_cm) {
  return {static_cast<std::int32_t>(std::llround(p_cm.x * 10.0)),
          static_cast<std::int32_t>(std::llround(p_cm.y * 10.0)),
          static_cast<std::int32_t>(std::llround(p_cm.z * 10.0))};
}

geom::PixelPoint bbox_bottom_center(const geom::BoundingBox& b) {
  return {(b.x_min + b.x_max) / 2.0, b.y_max};
}

void unlock(MissionState& s) {
  s.lock.reset();
  s.target_arm_cm.reset();
  s.pid_x = control::reset(s.pid_x);
  s.pid_y = control::reset(s.pid_y);
  s.have_error = false;
  s.plan.clear();
  s.plan_idx = 0;
  s.awaiting_ack = false;
}

// Arm-frame grasp target for the locked bbox, or nothing when the ray misses
// the ground.
std::optional<kin::Vec3> range_target(const MissionState& s, const MissionContext& ctx) {
  const auto ground = geom::pixel_to_ground(ctx.camera, bbox_bottom_center(s.lock->bbox));
  if (!ground) return std::nullopt;
  const auto arm = geom::camera_to_arm_frame(ground->forward_cm, ground->lateral_cm, ctx.camera);
  return kin::Vec3{arm.x_cm, arm.y_cm, ctx.cfg.grasp_z_cm};
}

void enter_pick(MissionState& s, const MissionContext& ctx) {
  s.phase = Phase::Pick;
  s.plan = {wire::Command{arm_to_mm(*s.target_arm_cm)},
            wire::Command{wire::GripCmd{wire::GripAction::Close}},
            wire::Command{arm_to_mm(ctx.cfg.bin_pose_cm)},
            wire::Command{wire::GripCmd{wire::GripAction::Open}},
            wire::Command{wire::HomeCmd{}}};
  s.plan_idx = 0;
  s.awaiting_ack = false;
  s.plan_done_phase = Phase::Deposit;
}

void handle_pick_failure(MissionState& s, const MissionContext& ctx) {
  s.grip_retries += 1;
  const bool abandon = s.grip_retries > ctx.cfg.max_grip_retries;
  const bool grabbed_nothing =
      std::holds_alternative<wire::GripCmd>(s.plan[s.plan_idx]);  // failed at the close step

  if (grabbed_nothing) {
    // Reopen and rehome before moving the base again.
    s.plan = {wire::Command{wire::GripCmd{wire::GripAction::Open}}, wire::Command{wire::HomeCmd{}}};
    s.plan_idx = 0;
    s.plan_done_phase = abandon ? Phase::Search : Phase::Approach;
  } else {
    s.plan.clear();
    s.plan_idx = 0;
    s.phase = abandon ? Phase::Search : Phase::Approach;
  }
  if (abandon) {
    if (s.lock) s.abandoned.push_back(s.lock->bbox);
    s.grip_retries = 0;
    if (s.plan.empty()) unlock(s);
    // with a recovery plan pending, the unlock happens when the plan drains
  }
  s.awaiting_ack = false;
}

void finish_plan(MissionState& s) {
  const Phase next = s.plan_done_phase;
  s.plan.clear();
  s.plan_idx = 0;
  s.awaiting_ack = false;
  if (next == Phase::Search) {
    unlock(s);
    s.phase = Phase::Search;
    s.grip_retries = 0;
  } else {
    s.phase = next;
  }
}

}  // namespace

std::vector<wire::Command> step(MissionState& s, const StepInput& input,
                                const MissionContext& ctx) {
  std::vector<wire::Command> out;
  const Phase entry_phase = s.phase;

  // 1. Acks drive the stop-and-wait pick plan; everywhere else they are
  //    bookkeeping only.
  for (const auto& ack : input.acks) {
    if (s.phase != Phase::Pick || !s.awaiting_ack) continue;
    if (ack.ok()) {
      s.awaiting_ack = false;
      s.plan_idx += 1;
      if (s.plan_idx >= s.plan.size()) finish_plan(s);
    } else if (ack.code == wire::kErrUnreachable) {
      handle_pick_failure(s, ctx);
    } else {
      s.awaiting_ack = false;  // transport-level error: resend the element
    }
  }

  // 2. Fresh detection frame: gate, match the lock, or acquire one.
  if (input.detections != nullptr) {
    std::vector<Detection> accepted = filter_detections(*input.detections, ctx.cfg);
    std::erase_if(accepted, [&](const Detection& d) {
      for (const auto& dead : s.abandoned)
        if (bbox_iou(d.bbox, dead) >= ctx.cfg.lock_min_iou) return true;
      return false;
    });

    if (s.lock && (s.phase == Phase::Align || s.phase == Phase::Range ||
                   s.phase == Phase::Approach)) {
      const Detection* best = nullptr;
      double best_iou = 0.0;
      for (const auto& d : accepted) {
        const double iou = bbox_iou(d.bbox, s.lock->bbox);
        if (iou > best_iou) {
          best_iou = iou;
          best = &d;
        }
      }
      if (best != nullptr && best_iou >= ctx.cfg.lock_min_iou) {
        s.lock->bbox = best->bbox;
        s.lock->loss_ticks = 0;
        s.held_error = geom::alignment_error(geom::frame_center(ctx.camera),
                                             geom::bbox_center(s.lock->bbox));
        s.have_error = true;
        if (s.phase == Phase::Approach) {
          if (auto t = range_target(s, ctx)) {
            s.target_arm_cm = *t;
            if (kin::in_workspace(*t, ctx.workspace)) enter_pick(s, ctx);
          }
        }
      } else {
        s.lock->loss_ticks += 1;
        if (s.lock->loss_ticks > ctx.cfg.max_loss_ticks) {
          unlock(s);
          s.phase = Phase::Search;
        }
      }
    }

    if (s.phase == Phase::Search && !accepted.empty()) {
      s.lock = TargetLock{accepted.front().bbox, 0};
      s.pid_x = control::PidState{};
      s.pid_y = control::PidState{};
      s.held_error = geom::alignment_error(geom::frame_center(ctx.camera),
                                           geom::bbox_center(s.lock->bbox));
      s.have_error = true;
      s.phase = Phase::Align;
    }
  }

  // 3. Per-phase action.
  switch (s.phase) {
    case Phase::Search:
      out.push_back(wire::MoveCmd{wire::MoveDir::CW, ctx.cfg.scan_speed});
      break;

    case Phase::Align: {
      if (!s.have_error) break;
      // Camera rows grow toward farther ground points, while the sign table
      // wants negative vertical control for "target ahead": negate dy.
      const double ex = s.held_error.dx;
      const double ey = -s.held_error.dy;
      const auto px = control::pid_step(ctx.gains_x, s.pid_x, ex, input.dt_s);
      const auto py = control::pid_step(ctx.gains_y, s.pid_y, ey, input.dt_s);
      s.pid_x = px.state;
      s.pid_y = py.state;
      const auto motions =
          control::align_command(px.control, py.control, ctx.cfg.deadband_px, ex, ey);
      bool stopped = false;
      for (const auto& m : motions) {
        out.push_back(motion_to_wire(m));
        if (m.kind == control::MotionKind::Stop) stopped = true;
      }
      if (stopped) s.phase = Phase::Range;
      break;
    }

    case Phase::Range: {
      if (!s.lock) {
        s.phase = Phase::Search;
        break;
      }
      if (auto t = range_target(s, ctx)) {
        s.target_arm_cm = *t;
        if (kin::in_workspace(*t, ctx.workspace)) {
          enter_pick(s, ctx);
        } else {
          s.phase = Phase::Approach;
        }
      } else {
        s.phase = Phase::Approach;
      }
      break;
    }

    case Phase::Approach: {
      if (!s.target_arm_cm) break;
      const double y = s.target_arm_cm->y;
      if (y < ctx.workspace.y_min_cm) {
        out.push_back(wire::MoveCmd{wire::MoveDir::B, 40});
      } else {
        const double remaining = y - ctx.workspace.y_max_cm;
        const double u = std::clamp(remaining / 50.0, 0.1, ctx.cfg.approach_speed_max);
        out.push_back(wire::MoveCmd{wire::MoveDir::F,
                                    static_cast<int>(std::clamp(std::lround(u * 255.0), 1L, 255L))});
      }
      break;
    }

    case Phase::Pick:
      if (!s.awaiting_ack && s.plan_idx < s.plan.size()) {
        out.push_back(s.plan[s.plan_idx]);
        s.awaiting_ack = true;
      }
      break;

    case Phase::Deposit:
      // Entered via an ack mid-step: hold one tick so the phase is observable.
      if (entry_phase != Phase::Deposit) break;
      s.picked += 1;
      s.grip_retries = 0;
      unlock(s);
      s.phase = s.picked >= ctx.cfg.pick_target ? Phase::Done : Phase::Search;
      break;

    case Phase::Done:
      break;
  }

  return out;
}

}  // namespace gcbot::mission
