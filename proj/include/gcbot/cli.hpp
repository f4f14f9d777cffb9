#pragma once

#include <cstdint>
#include <string>

namespace gcbot::cli {

// Exit codes: 0 success, 1 domain failure (unreachable target, fuzz
// violation), 2 configuration/input error.

// Runs a scenario and writes the report JSON plus the trajectory CSV
// (defaults to <out> with a .traj.csv suffix). record_path, when nonempty,
// captures the detector stream as a replayable JSONL log.
int run(const std::string& scenario_path, std::uint64_t seed, const std::string& out_path,
        const std::string& traj_path = "", const std::string& record_path = "");

// Prints the IK solution and the FK round-trip residual for a target.
int ik_check(double x_cm, double y_cm, double z_cm, const std::string& scenario_path = "");

// Re-runs the mission with detections taken from a recorded log.
int replay(const std::string& log_path, const std::string& scenario_path,
           const std::string& out_path, const std::string& traj_path = "");

// Decoder robustness harness: random lines, mutated valid frames, random
// re-chunkings. Returns 1 if any invariant is violated.
int proto_fuzz(long iterations, std::uint64_t seed);

}  // namespace gcbot::cli
