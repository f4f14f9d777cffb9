#include "gcbot/cli.hpp"

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <random>
#include <string>

#include "gcbot/config_io.hpp"
#include "gcbot/kinematics.hpp"
#include "gcbot/protocol.hpp"
#include "gcbot/sim.hpp"

namespace gcbot::cli {

namespace {

std::string default_traj_path(const std::string& out_path) {
  const auto dot = out_path.rfind(".json");
  if (dot != std::string::npos && dot == out_path.size() - 5)
    return out_path.substr(0, dot) + ".traj.csv";
  return out_path + ".traj.csv";
}

int run_impl(const sim::ScenarioConfig& cfg, std::uint64_t seed, const std::string& out_path,
             std::string traj_path, const std::string& record_path, bool replay_mode,
             const std::vector<sim::DetectionFrame>* log) {
  sim::RunOptions opts;
  opts.record_detections = !record_path.empty();
  opts.replay_log = log;

  const auto wall_start = std::chrono::steady_clock::now();
  const auto result = sim::run_scenario(cfg, seed, opts);
  const double wall_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();

  cfgio::write_text_file(out_path, cfgio::report_to_json(result.report, cfg, replay_mode).dump(2) + "\n");
  if (traj_path.empty()) traj_path = default_traj_path(out_path);
  cfgio::write_text_file(traj_path, cfgio::trajectory_csv(result.trajectory, cfg.objects.size()));
  if (!record_path.empty())
    cfgio::write_text_file(record_path, cfgio::detections_to_jsonl(result.recorded));

  std::fprintf(stderr, "picked %d/%d in %.2f sim seconds (%ld ticks, %.3f wall seconds), final state %s\n",
               result.report.picked, result.report.objects_total, result.report.sim_duration_s,
               result.report.ticks, wall_s, result.report.final_state.c_str());
  return 0;
}

}  // namespace

int run(const std::string& scenario_path, std::uint64_t seed, const std::string& out_path,
        const std::string& traj_path, const std::string& record_path) {
  try {
    const auto cfg = cfgio::load_scenario(scenario_path);
    return run_impl(cfg, seed, out_path, traj_path, record_path, false, nullptr);
  } catch (const cfgio::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}

int ik_check(double x_cm, double y_cm, double z_cm, const std::string& scenario_path) {
  kin::ArmGeometry geom;
  kin::ArmCalibration cal;
  if (!scenario_path.empty()) {
    try {
      const auto cfg = cfgio::load_scenario(scenario_path);
      geom = cfg.arm_geometry;
      cal = cfg.calibration;
    } catch (const cfgio::ConfigError& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 2;
    }
  }

  const kin::Vec3 target{x_cm, y_cm, z_cm};
  const auto ik = kin::inverse_kinematics(geom, cal, target);
  if (!ik.ok()) {
    std::fprintf(stderr, "unreachable: (%g, %g, %g) %s\n", x_cm, y_cm, z_cm,
                 ik.status == kin::IkStatus::ServoLimit ? "(servo limit)" : "(outside reach)");
    return 1;
  }
  const kin::Vec3 fk = kin::forward_kinematics(geom, cal, ik.angles);
  const double residual =
      std::sqrt((fk.x - target.x) * (fk.x - target.x) + (fk.y - target.y) * (fk.y - target.y) +
                (fk.z - target.z) * (fk.z - target.z));
  std::printf("base_yaw_deg %.4f\nshoulder_deg %.4f\nelbow_deg %.4f\nwrist_roll_deg %.4f\n"
              "fk_residual_cm %.3e\n",
              ik.angles.base_yaw_deg, ik.angles.shoulder_deg, ik.angles.elbow_deg,
              ik.angles.wrist_roll_deg, residual);
  return 0;
}

int replay(const std::string& log_path, const std::string& scenario_path,
           const std::string& out_path, const std::string& traj_path) {
  try {
    const auto cfg = cfgio::load_scenario(scenario_path);
    const auto log = cfgio::load_detection_log(log_path);
    return run_impl(cfg, 0, out_path, traj_path, "", true, &log);
  } catch (const cfgio::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}

int proto_fuzz(long iterations, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> byte(0, 255);
  std::uniform_int_distribution<int> len(0, 80);

  long commands = 0, errors = 0;
  for (long i = 0; i < iterations; ++i) {
    std::string line;
    const int n = len(rng);
    line.reserve(n);
    for (int k = 0; k < n; ++k) line += static_cast<char>(byte(rng));
    if (i % 3 == 0) line += '\n';  // bias a fraction toward completed lines
    const auto result = wire::decode(line);
    if (std::holds_alternative<wire::Command>(result)) ++commands;
    else ++errors;
  }

  // Mutation pass: every frame with one flipped bit must be rejected.
  const wire::Command samples[] = {
      wire::StopCmd{}, wire::MoveCmd{wire::MoveDir::CW, 200},
      wire::ArmToCmd{-200, 460, 50}, wire::GripCmd{wire::GripAction::Close}, wire::HomeCmd{}};
  long undetected = 0;
  for (const auto& cmd : samples) {
    const std::string frame = wire::encode(cmd);
    for (std::size_t bytepos = 0; bytepos < frame.size(); ++bytepos) {
      for (int bit = 0; bit < 8; ++bit) {
        std::string mutated = frame;
        mutated[bytepos] = static_cast<char>(mutated[bytepos] ^ (1 << bit));
        if (std::holds_alternative<wire::Command>(wire::decode(mutated))) ++undetected;
      }
    }
  }

  std::printf("fuzz: %ld inputs, %ld decoded, %ld rejected, %ld undetected bit flips\n",
              iterations, commands, errors, undetected);
  return undetected == 0 ? 0 : 1;
}

}  // namespace gcbot::cli
