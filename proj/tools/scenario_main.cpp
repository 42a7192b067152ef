// Copyright 2026 The v2i-twin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "v2i/app/config.hpp"
#include "v2i/app/process.hpp"
#include "v2i/app/report_log.hpp"
#include "v2i/error.hpp"
#include "v2i/safety/expectation.hpp"
#include "v2i/scene/scenario.hpp"
#include "v2i/scene/scene_log.hpp"

namespace {

using namespace v2i;

nlohmann::ordered_json transitions_json(const std::vector<safety::StateTransition>& ts) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& t : ts) {
    out.push_back({{"frame_index", t.frame_index},
                   {"from", safety::to_string(t.from)},
                   {"to", safety::to_string(t.to)}});
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  v2i::app::init_logging();
  std::string spec_path, out_dir, config;
  CLI::App cli{"Writes deterministic scene-log fixtures for a scenario spec"};
  cli.add_option("--spec", spec_path, "scenario spec JSON")->required();
  cli.add_option("--out", out_dir, "output directory")->required();
  cli.add_option("--config", config, "JSON config (intrinsics, tracker)")->check(CLI::ExistingFile);
  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return cli.exit(e) == 0 ? app::kExitOk : app::kExitConfig;
  }

  scene::ScenarioSpec spec;
  app::AgentConfig cfg;
  try {
    if (!config.empty()) cfg = app::load_agent_config(config);
    spec = scene::load_scenario_spec(spec_path);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return app::kExitConfig;
  }

  try {
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    const auto frames = scene::generate_scenario(spec, cfg.intrinsics);
    scene::write_log(frames, dir / "scene.jsonl");

    safety::Tracker tracker(cfg.tracker, cfg.intrinsics);
    std::vector<safety::SafetyReport> reports;
    app::ReportLogWriter writer(dir / "expected_report.jsonl");
    for (const auto& f : frames) {
      reports.push_back(tracker.update(f));
      writer.write(reports.back());
    }
    writer.flush();

    nlohmann::ordered_json summary = {
        {"scenario", spec.name},
        {"fps", spec.fps},
        {"frames", frames.size()},
        {"collision_frame", !frames.empty() && frames.back().collision_with
                                ? nlohmann::ordered_json(frames.back().frame_index)
                                : nlohmann::ordered_json()},
        {"predicted_transitions",
         transitions_json(safety::transitions(safety::predicted_states(spec, cfg.tracker)))},
        {"tracker_transitions", transitions_json(safety::transitions(reports))}};
    std::ofstream out(dir / "expected_transitions.json");
    out << summary.dump(2) << '\n';
    if (!out) throw Error(Errc::kIo, "cannot write " + (dir / "expected_transitions.json").string());
    spdlog::info("{}: {} frames written to {}", spec.name, frames.size(), dir.string());
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return app::kExitRuntime;
  }
  return app::kExitOk;
}
