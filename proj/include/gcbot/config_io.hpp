#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gcbot/sim.hpp"

namespace gcbot::cfgio {

// Scenario files are JSON with a fixed schema: unknown keys are rejected
// (catches typos), missing keys fall back to the documented defaults.
// Angles are degrees in files, radians in memory.

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

sim::ScenarioConfig scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const sim::ScenarioConfig& cfg);

// Throws ConfigError on unreadable files or schema violations, naming the
// offending field.
sim::ScenarioConfig load_scenario(const std::string& path);

nlohmann::json report_to_json(const sim::Report& rep, const sim::ScenarioConfig& cfg,
                              bool replay_mode);

std::string trajectory_csv(const std::vector<sim::TrajectoryRow>& rows, std::size_t object_count);

// Detection logs: one JSON record per line,
//   {"t": <s>, "detections": [{"class": .., "confidence": .., "bbox": [x0,y0,x1,y1]}, ..]}
std::string detections_to_jsonl(const std::vector<sim::DetectionFrame>& frames);
std::vector<sim::DetectionFrame> detections_from_jsonl(const std::string& text);
std::vector<sim::DetectionFrame> load_detection_log(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace gcbot::cfgio
