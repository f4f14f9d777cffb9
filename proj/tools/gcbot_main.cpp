#include <cstdint>
#include <string>

#include <CLI11.hpp>

#include "gcbot/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"gcbot: control stack and desk simulator for a garbage-collecting robot"};
  app.require_subcommand(1);

  std::string scenario_path, out_path = "report.json", traj_path, record_path, log_path;
  std::uint64_t seed = 1;
  double x = 0, y = 0, z = 0;
  long iterations = 1000000;

  auto* run = app.add_subcommand("run", "run a scenario and write the report");
  run->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  run->add_option("--seed", seed, "simulation seed");
  run->add_option("--out", out_path, "report JSON output path");
  run->add_option("--traj", traj_path, "trajectory CSV output path (default: <out>.traj.csv)");
  run->add_option("--record-detections", record_path, "write the detector stream as JSONL");

  auto* ik = app.add_subcommand("ik-check", "solve IK for a target and print the residual");
  ik->add_option("--x", x, "target x, cm")->required();
  ik->add_option("--y", y, "target y, cm")->required();
  ik->add_option("--z", z, "target z, cm")->required();
  ik->add_option("--scenario", scenario_path, "scenario JSON for arm geometry (optional)");

  auto* rep = app.add_subcommand("replay", "drive the mission from a recorded detection log");
  rep->add_option("--log", log_path, "detections JSONL file")->required();
  rep->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  rep->add_option("--out", out_path, "report JSON output path");
  rep->add_option("--traj", traj_path, "trajectory CSV output path");

  auto* fuzz = app.add_subcommand("proto-fuzz", "decoder robustness harness");
  fuzz->add_option("--iterations", iterations, "random inputs to try");
  fuzz->add_option("--seed", seed, "fuzzer seed");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return gcbot::cli::run(scenario_path, seed, out_path, traj_path, record_path);
  if (ik->parsed()) return gcbot::cli::ik_check(x, y, z, scenario_path);
  if (rep->parsed()) return gcbot::cli::replay(log_path, scenario_path, out_path, traj_path);
  if (fuzz->parsed()) return gcbot::cli::proto_fuzz(iterations, seed);
  return 2;
}
