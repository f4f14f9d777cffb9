#include "gcbot/config_io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "gcbot/units.hpp"

namespace gcbot::cfgio {

namespace {

using nlohmann::json;

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError("scenario: '" + path + "' must be an object");
}

void check_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  expect_object(j, path);
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key()))
      throw ConfigError("scenario: unknown key '" + path + (path.empty() ? "" : ".") + item.key() + "'");
  }
}

double num_or(const json& j, const char* key, double def, const std::string& path) {
  if (!j.contains(key)) return def;
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError("scenario: '" + path + "." + key + "' must be a number");
  return v.get<double>();
}

int int_or(const json& j, const char* key, int def, const std::string& path) {
  if (!j.contains(key)) return def;
  const auto& v = j.at(key);
  if (!v.is_number_integer())
    throw ConfigError("scenario: '" + path + "." + key + "' must be an integer");
  return v.get<int>();
}

std::vector<double> num_array(const json& j, const char* key, std::size_t n,
                              std::vector<double> def, const std::string& path) {
  if (!j.contains(key)) return def;
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != n)
    throw ConfigError("scenario: '" + path + "." + key + "' must be an array of " +
                      std::to_string(n) + " numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number())
      throw ConfigError("scenario: '" + path + "." + key + "' must contain only numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

kin::JointCalibration calibration_from(const json& j, const std::string& path) {
  check_keys(j, path, {"scale", "offset_deg"});
  kin::JointCalibration c;
  c.scale = num_or(j, "scale", c.scale, path);
  c.offset_deg = num_or(j, "offset_deg", c.offset_deg, path);
  return c;
}

kin::ServoSpec servo_from(const json& j, const kin::ServoSpec& def, const std::string& path) {
  check_keys(j, path, {"stall_torque_kg_cm", "preferred_min_deg", "preferred_max_deg",
                       "position_offset_cm", "resolution_deg"});
  kin::ServoSpec s = def;
  s.stall_torque_kg_cm = num_or(j, "stall_torque_kg_cm", s.stall_torque_kg_cm, path);
  s.preferred_min_deg = num_or(j, "preferred_min_deg", s.preferred_min_deg, path);
  s.preferred_max_deg = num_or(j, "preferred_max_deg", s.preferred_max_deg, path);
  s.position_offset_cm = num_or(j, "position_offset_cm", s.position_offset_cm, path);
  s.resolution_deg = num_or(j, "resolution_deg", s.resolution_deg, path);
  return s;
}

control::PidGains gains_from(const json& j, const control::PidGains& def, const std::string& path) {
  check_keys(j, path, {"kp", "ki", "kd", "integral_limit"});
  control::PidGains g = def;
  g.kp = num_or(j, "kp", g.kp, path);
  g.ki = num_or(j, "ki", g.ki, path);
  g.kd = num_or(j, "kd", g.kd, path);
  g.integral_limit = num_or(j, "integral_limit", g.integral_limit, path);
  return g;
}

json calibration_json(const kin::JointCalibration& c) {
  return {{"scale", c.scale}, {"offset_deg", c.offset_deg}};
}

json servo_json(const kin::ServoSpec& s) {
  return {{"stall_torque_kg_cm", s.stall_torque_kg_cm},
          {"preferred_min_deg", s.preferred_min_deg},
          {"preferred_max_deg", s.preferred_max_deg},
          {"position_offset_cm", s.position_offset_cm},
          {"resolution_deg", s.resolution_deg}};
}

json gains_json(const control::PidGains& g) {
  return {{"kp", g.kp}, {"ki", g.ki}, {"kd", g.kd}, {"integral_limit", g.integral_limit}};
}

}  // namespace

sim::ScenarioConfig scenario_from_json(const json& j) {
  sim::ScenarioConfig cfg;
  check_keys(j, "", {"camera", "arm", "controller", "mission", "actuator", "workspace",
                     "detector", "objects", "time_budget_s", "pick_tolerance_cm"});

  if (j.contains("camera")) {
    const auto& c = j.at("camera");
    check_keys(c, "camera", {"half_view_angle_deg", "tilt_angle_deg", "mount_height_cm",
                             "image_width_px", "image_height_px", "arm_base_offset_cm"});
    cfg.camera.half_view_angle_rad =
        deg2rad(num_or(c, "half_view_angle_deg", rad2deg(cfg.camera.half_view_angle_rad), "camera"));
    cfg.camera.tilt_angle_rad =
        deg2rad(num_or(c, "tilt_angle_deg", rad2deg(cfg.camera.tilt_angle_rad), "camera"));
    cfg.camera.mount_height_cm = num_or(c, "mount_height_cm", cfg.camera.mount_height_cm, "camera");
    cfg.camera.image_width_px = num_or(c, "image_width_px", cfg.camera.image_width_px, "camera");
    cfg.camera.image_height_px = num_or(c, "image_height_px", cfg.camera.image_height_px, "camera");
    cfg.camera.arm_base_offset_cm =
        num_or(c, "arm_base_offset_cm", cfg.camera.arm_base_offset_cm, "camera");
  }

  if (j.contains("arm")) {
    const auto& a = j.at("arm");
    check_keys(a, "arm", {"geometry", "calibration", "link_masses_g", "servos", "safety_factor",
                          "gripper"});
    if (a.contains("geometry")) {
      const auto& g = a.at("geometry");
      check_keys(g, "arm.geometry",
                 {"shoulder_height_cm", "upper_len_cm", "fore_len_cm", "wrist_offset_cm"});
      cfg.arm_geometry.shoulder_height_cm =
          num_or(g, "shoulder_height_cm", cfg.arm_geometry.shoulder_height_cm, "arm.geometry");
      cfg.arm_geometry.upper_len_cm =
          num_or(g, "upper_len_cm", cfg.arm_geometry.upper_len_cm, "arm.geometry");
      cfg.arm_geometry.fore_len_cm =
          num_or(g, "fore_len_cm", cfg.arm_geometry.fore_len_cm, "arm.geometry");
      cfg.arm_geometry.wrist_offset_cm =
          num_or(g, "wrist_offset_cm", cfg.arm_geometry.wrist_offset_cm, "arm.geometry");
    }
    if (a.contains("calibration")) {
      const auto& c = a.at("calibration");
      check_keys(c, "arm.calibration", {"yaw", "shoulder", "elbow"});
      if (c.contains("yaw")) cfg.calibration.yaw = calibration_from(c.at("yaw"), "arm.calibration.yaw");
      if (c.contains("shoulder"))
        cfg.calibration.shoulder = calibration_from(c.at("shoulder"), "arm.calibration.shoulder");
      if (c.contains("elbow"))
        cfg.calibration.elbow = calibration_from(c.at("elbow"), "arm.calibration.elbow");
    }
    if (a.contains("link_masses_g")) {
      const auto& m = a.at("link_masses_g");
      check_keys(m, "arm.link_masses_g", {"upper", "fore"});
      cfg.link_masses.upper_g = num_or(m, "upper", cfg.link_masses.upper_g, "arm.link_masses_g");
      cfg.link_masses.fore_g = num_or(m, "fore", cfg.link_masses.fore_g, "arm.link_masses_g");
    }
    if (a.contains("servos")) {
      const auto& s = a.at("servos");
      check_keys(s, "arm.servos", {"yaw", "shoulder", "elbow", "wrist", "gripper"});
      if (s.contains("yaw")) cfg.servos.yaw = servo_from(s.at("yaw"), cfg.servos.yaw, "arm.servos.yaw");
      if (s.contains("shoulder"))
        cfg.servos.shoulder = servo_from(s.at("shoulder"), cfg.servos.shoulder, "arm.servos.shoulder");
      if (s.contains("elbow"))
        cfg.servos.elbow = servo_from(s.at("elbow"), cfg.servos.elbow, "arm.servos.elbow");
      if (s.contains("wrist"))
        cfg.servos.wrist = servo_from(s.at("wrist"), cfg.servos.wrist, "arm.servos.wrist");
      if (s.contains("gripper"))
        cfg.servos.gripper = servo_from(s.at("gripper"), cfg.servos.gripper, "arm.servos.gripper");
    }
    cfg.safety_factor = num_or(a, "safety_factor", cfg.safety_factor, "arm");
    if (a.contains("gripper")) {
      const auto& g = a.at("gripper");
      check_keys(g, "arm.gripper", {"screw_pitch_mm_per_rev", "max_aperture_mm"});
      cfg.gripper.screw_pitch_mm_per_rev =
          num_or(g, "screw_pitch_mm_per_rev", cfg.gripper.screw_pitch_mm_per_rev, "arm.gripper");
      cfg.gripper.max_aperture_mm =
          num_or(g, "max_aperture_mm", cfg.gripper.max_aperture_mm, "arm.gripper");
    }
  }

  if (j.contains("controller")) {
    const auto& c = j.at("controller");
    check_keys(c, "controller", {"x", "y", "deadband_px"});
    if (c.contains("x")) cfg.gains_x = gains_from(c.at("x"), cfg.gains_x, "controller.x");
    if (c.contains("y")) cfg.gains_y = gains_from(c.at("y"), cfg.gains_y, "controller.y");
    cfg.mission.deadband_px = num_or(c, "deadband_px", cfg.mission.deadband_px, "controller");
  }

  if (j.contains("mission")) {
    const auto& m = j.at("mission");
    check_keys(m, "mission",
               {"confidence_threshold", "target_classes", "detection_period_s", "control_period_s",
                "pick_target", "bin_pose_cm", "grasp_z_cm", "scan_speed", "approach_speed_max",
                "max_grip_retries", "lock_min_iou", "max_loss_ticks"});
    cfg.mission.confidence_threshold =
        num_or(m, "confidence_threshold", cfg.mission.confidence_threshold, "mission");
    if (m.contains("target_classes")) {
      const auto& t = m.at("target_classes");
      if (!t.is_array()) throw ConfigError("scenario: 'mission.target_classes' must be an array");
      cfg.mission.target_classes.clear();
      for (const auto& e : t) {
        if (!e.is_string())
          throw ConfigError("scenario: 'mission.target_classes' must contain strings");
        cfg.mission.target_classes.push_back(e.get<std::string>());
      }
    }
    cfg.mission.detection_period_s =
        num_or(m, "detection_period_s", cfg.mission.detection_period_s, "mission");
    cfg.mission.control_period_s =
        num_or(m, "control_period_s", cfg.mission.control_period_s, "mission");
    cfg.mission.pick_target = int_or(m, "pick_target", cfg.mission.pick_target, "mission");
    const auto bin = num_array(m, "bin_pose_cm",
                               3, {cfg.mission.bin_pose_cm.x, cfg.mission.bin_pose_cm.y,
                                   cfg.mission.bin_pose_cm.z}, "mission");
    cfg.mission.bin_pose_cm = {bin[0], bin[1], bin[2]};
    cfg.mission.grasp_z_cm = num_or(m, "grasp_z_cm", cfg.mission.grasp_z_cm, "mission");
    cfg.mission.scan_speed = int_or(m, "scan_speed", cfg.mission.scan_speed, "mission");
    cfg.mission.approach_speed_max =
        num_or(m, "approach_speed_max", cfg.mission.approach_speed_max, "mission");
    cfg.mission.max_grip_retries =
        int_or(m, "max_grip_retries", cfg.mission.max_grip_retries, "mission");
    cfg.mission.lock_min_iou = num_or(m, "lock_min_iou", cfg.mission.lock_min_iou, "mission");
    cfg.mission.max_loss_ticks = int_or(m, "max_loss_ticks", cfg.mission.max_loss_ticks, "mission");
  }

  if (j.contains("actuator")) {
    const auto& a = j.at("actuator");
    check_keys(a, "actuator", {"wheel_radius_cm", "motor_rpm", "base_speed_cap_cm_s",
                               "yaw_rate_rad_s", "servo_slew_deg_s", "command_latency_s"});
    cfg.actuator.wheel_radius_cm = num_or(a, "wheel_radius_cm", cfg.actuator.wheel_radius_cm, "actuator");
    cfg.actuator.motor_rpm = num_or(a, "motor_rpm", cfg.actuator.motor_rpm, "actuator");
    cfg.actuator.base_speed_cap_cm_s =
        num_or(a, "base_speed_cap_cm_s", cfg.actuator.base_speed_cap_cm_s, "actuator");
    cfg.actuator.yaw_rate_rad_s = num_or(a, "yaw_rate_rad_s", cfg.actuator.yaw_rate_rad_s, "actuator");
    cfg.actuator.servo_slew_deg_s =
        num_or(a, "servo_slew_deg_s", cfg.actuator.servo_slew_deg_s, "actuator");
    cfg.actuator.command_latency_s =
        num_or(a, "command_latency_s", cfg.actuator.command_latency_s, "actuator");
  }

  if (j.contains("workspace")) {
    const auto& ws = j.at("workspace");
    check_keys(ws, "workspace", {"x_cm", "y_cm", "z_cm"});
    const auto x = num_array(ws, "x_cm", 2, {cfg.workspace.x_min_cm, cfg.workspace.x_max_cm}, "workspace");
    const auto y = num_array(ws, "y_cm", 2, {cfg.workspace.y_min_cm, cfg.workspace.y_max_cm}, "workspace");
    const auto z = num_array(ws, "z_cm", 2, {cfg.workspace.z_min_cm, cfg.workspace.z_max_cm}, "workspace");
    cfg.workspace = {x[0], x[1], y[0], y[1], z[0], z[1]};
  }

  if (j.contains("detector")) {
    const auto& d = j.at("detector");
    check_keys(d, "detector", {"pixel_noise_sigma_px", "miss_probability", "confidence_mean",
                               "confidence_sigma"});
    cfg.detector.pixel_noise_sigma_px =
        num_or(d, "pixel_noise_sigma_px", cfg.detector.pixel_noise_sigma_px, "detector");
    cfg.detector.miss_probability =
        num_or(d, "miss_probability", cfg.detector.miss_probability, "detector");
    cfg.detector.confidence_mean =
        num_or(d, "confidence_mean", cfg.detector.confidence_mean, "detector");
    cfg.detector.confidence_sigma =
        num_or(d, "confidence_sigma", cfg.detector.confidence_sigma, "detector");
  }

  if (j.contains("objects")) {
    const auto& objs = j.at("objects");
    if (!objs.is_array()) throw ConfigError("scenario: 'objects' must be an array");
    cfg.objects.clear();
    std::size_t i = 0;
    for (const auto& o : objs) {
      const std::string path = "objects[" + std::to_string(i) + "]";
      check_keys(o, path, {"class", "position_cm", "diameter_mm", "mass_g"});
      sim::ScenarioObject obj;
      if (o.contains("class")) {
        if (!o.at("class").is_string())
          throw ConfigError("scenario: '" + path + ".class' must be a string");
        obj.class_label = o.at("class").get<std::string>();
      }
      const auto pos = num_array(o, "position_cm", 2, {obj.x_cm, obj.y_cm}, path);
      obj.x_cm = pos[0];
      obj.y_cm = pos[1];
      obj.diameter_mm = num_or(o, "diameter_mm", obj.diameter_mm, path);
      obj.mass_g = num_or(o, "mass_g", obj.mass_g, path);
      cfg.objects.push_back(obj);
      ++i;
    }
  }

  cfg.time_budget_s = num_or(j, "time_budget_s", cfg.time_budget_s, "");
  cfg.pick_tolerance_cm = num_or(j, "pick_tolerance_cm", cfg.pick_tolerance_cm, "");

  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
  return cfg;
}

nlohmann::json scenario_to_json(const sim::ScenarioConfig& cfg) {
  json j;
  j["camera"] = {{"half_view_angle_deg", rad2deg(cfg.camera.half_view_angle_rad)},
                 {"tilt_angle_deg", rad2deg(cfg.camera.tilt_angle_rad)},
                 {"mount_height_cm", cfg.camera.mount_height_cm},
                 {"image_width_px", cfg.camera.image_width_px},
                 {"image_height_px", cfg.camera.image_height_px},
                 {"arm_base_offset_cm", cfg.camera.arm_base_offset_cm}};
  j["arm"] = {
      {"geometry",
       {{"shoulder_height_cm", cfg.arm_geometry.shoulder_height_cm},
        {"upper_len_cm", cfg.arm_geometry.upper_len_cm},
        {"fore_len_cm", cfg.arm_geometry.fore_len_cm},
        {"wrist_offset_cm", cfg.arm_geometry.wrist_offset_cm}}},
      {"calibration",
       {{"yaw", calibration_json(cfg.calibration.yaw)},
        {"shoulder", calibration_json(cfg.calibration.shoulder)},
        {"elbow", calibration_json(cfg.calibration.elbow)}}},
      {"link_masses_g", {{"upper", cfg.link_masses.upper_g}, {"fore", cfg.link_masses.fore_g}}},
      {"servos",
       {{"yaw", servo_json(cfg.servos.yaw)},
        {"shoulder", servo_json(cfg.servos.shoulder)},
        {"elbow", servo_json(cfg.servos.elbow)},
        {"wrist", servo_json(cfg.servos.wrist)},
        {"gripper", servo_json(cfg.servos.gripper)}}},
      {"safety_factor", cfg.safety_factor},
      {"gripper",
       {{"screw_pitch_mm_per_rev", cfg.gripper.screw_pitch_mm_per_rev},
        {"max_aperture_mm", cfg.gripper.max_aperture_mm}}}};
  j["controller"] = {{"x", gains_json(cfg.gains_x)},
                     {"y", gains_json(cfg.gains_y)},
                     {"deadband_px", cfg.mission.deadband_px}};
  j["mission"] = {{"confidence_threshold", cfg.mission.confidence_threshold},
                  {"target_classes", cfg.mission.target_classes},
                  {"detection_period_s", cfg.mission.detection_period_s},
                  {"control_period_s", cfg.mission.control_period_s},
                  {"pick_target", cfg.mission.pick_target},
                  {"bin_pose_cm",
                   {cfg.mission.bin_pose_cm.x, cfg.mission.bin_pose_cm.y, cfg.mission.bin_pose_cm.z}},
                  {"grasp_z_cm", cfg.mission.grasp_z_cm},
                  {"scan_speed", cfg.mission.scan_speed},
                  {"approach_speed_max", cfg.mission.approach_speed_max},
                  {"max_grip_retries", cfg.mission.max_grip_retries},
                  {"lock_min_iou", cfg.mission.lock_min_iou},
                  {"max_loss_ticks", cfg.mission.max_loss_ticks}};
  j["actuator"] = {{"wheel_radius_cm", cfg.actuator.wheel_radius_cm},
                   {"motor_rpm", cfg.actuator.motor_rpm},
                   {"base_speed_cap_cm_s", cfg.actuator.base_speed_cap_cm_s},
                   {"yaw_rate_rad_s", cfg.actuator.yaw_rate_rad_s},
                   {"servo_slew_deg_s", cfg.actuator.servo_slew_deg_s},
                   {"command_latency_s", cfg.actuator.command_latency_s}};
  j["workspace"] = {{"x_cm", {cfg.workspace.x_min_cm, cfg.workspace.x_max_cm}},
                    {"y_cm", {cfg.workspace.y_min_cm, cfg.workspace.y_max_cm}},
                    {"z_cm", {cfg.workspace.z_min_cm, cfg.workspace.z_max_cm}}};
  j["detector"] = {{"pixel_noise_sigma_px", cfg.detector.pixel_noise_sigma_px},
                   {"miss_probability", cfg.detector.miss_probability},
                   {"confidence_mean", cfg.detector.confidence_mean},
                   {"confidence_sigma", cfg.detector.confidence_sigma}};
  j["objects"] = json::array();
  for (const auto& o : cfg.objects) {
    j["objects"].push_back({{"class", o.class_label},
                            {"position_cm", {o.x_cm, o.y_cm}},
                            {"diameter_mm", o.diameter_mm},
                            {"mass_g", o.mass_g}});
  }
  j["time_budget_s"] = cfg.time_budget_s;
  j["pick_tolerance_cm"] = cfg.pick_tolerance_cm;
  return j;
}

sim::ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("scenario: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("scenario: '" + path + "' is not valid JSON: " + e.what());
  }
  return scenario_from_json(j);
}

nlohmann::json report_to_json(const sim::Report& rep, const sim::ScenarioConfig& cfg,
                              bool replay_mode) {
  json attempts = json::array();
  for (const auto& a : rep.attempt_log) {
    attempts.push_back({{"t_s", a.t_s},
                        {"success", a.success},
                        {"miss_reason", a.miss_reason},
                        {"tip_offset_cm", a.tip_offset_cm}});
  }
  return {{"seed", rep.seed},
          {"mode", replay_mode ? "replay" : "live"},
          {"objects_total", rep.objects_total},
          {"picked", rep.picked},
          {"attempts", rep.attempts},
          {"attempt_log", attempts},
          {"sim_duration_s", rep.sim_duration_s},
          {"ticks", rep.ticks},
          {"final_state", rep.final_state},
          {"bin_count", rep.bin_count},
          {"frames_sent", rep.frames_sent},
          {"acks_received", rep.acks_received},
          {"decode_errors", rep.decode_errors},
          {"config", scenario_to_json(cfg)}};
}

std::string trajectory_csv(const std::vector<sim::TrajectoryRow>& rows, std::size_t object_count) {
  std::ostringstream out;
  out << "time_s,x_cm,y_cm,heading_rad,state,command";
  for (std::size_t i = 0; i < object_count; ++i) out << ",obj" << i << "_picked";
  out << '\n';
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f,%.6f", r.t_s, r.x_cm, r.y_cm, r.heading_rad);
    out << buf << ',' << r.state << ',' << r.command;
    for (bool p : r.object_picked) out << ',' << (p ? 1 : 0);
    out << '\n';
  }
  return out.str();
}

std::string detections_to_jsonl(const std::vector<sim::DetectionFrame>& frames) {
  std::ostringstream out;
  for (const auto& f : frames) {
    json dets = json::array();
    for (const auto& d : f.detections) {
      dets.push_back({{"class", d.class_label},
                      {"confidence", d.confidence},
                      {"bbox", {d.bbox.x_min, d.bbox.y_min, d.bbox.x_max, d.bbox.y_max}}});
    }
    out << json{{"t", f.t_s}, {"detections", dets}}.dump() << '\n';
  }
  return out.str();
}

std::vector<sim::DetectionFrame> detections_from_jsonl(const std::string& text) {
  std::vector<sim::DetectionFrame> frames;
  std::istringstream in(text);
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = "detections log line " + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception&) {
      throw ConfigError(where + ": not valid JSON");
    }
    if (!j.is_object() || !j.contains("t") || !j.at("t").is_number())
      throw ConfigError(where + ": missing numeric 't'");
    if (!j.contains("detections") || !j.at("detections").is_array())
      throw ConfigError(where + ": missing array 'detections'");
    sim::DetectionFrame frame;
    frame.t_s = j.at("t").get<double>();
    for (const auto& d : j.at("detections")) {
      if (!d.is_object() || !d.contains("class") || !d.at("class").is_string())
        throw ConfigError(where + ": detection missing string 'class'");
      if (!d.contains("confidence") || !d.at("confidence").is_number())
        throw ConfigError(where + ": detection missing numeric 'confidence'");
      if (!d.contains("bbox") || !d.at("bbox").is_array() || d.at("bbox").size() != 4)
        throw ConfigError(where + ": detection missing 4-element 'bbox'");
      mission::Detection det;
      det.class_label = d.at("class").get<std::string>();
      det.confidence = d.at("confidence").get<double>();
      const auto& b = d.at("bbox");
      for (const auto& e : b)
        if (!e.is_number()) throw ConfigError(where + ": 'bbox' must contain numbers");
      det.bbox = {b[0].get<double>(), b[1].get<double>(), b[2].get<double>(), b[3].get<double>()};
      if (!(det.bbox.x_min < det.bbox.x_max) || !(det.bbox.y_min < det.bbox.y_max))
        throw ConfigError(where + ": 'bbox' must satisfy min < max");
      frame.detections.push_back(std::move(det));
    }
    frames.push_back(std::move(frame));
  }
  return frames;
}

std::vector<sim::DetectionFrame> load_detection_log(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("detections log: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return detections_from_jsonl(buf.str());
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << content;
}

}  // namespace gcbot::cfgio
