// Copyright 2026 The EMR Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// emr command line: run, gen-synthetic, validate-config, print-config.
#include <cstdio>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "emr/emr.h"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;

int report(emr_status s) {
  if (s == EMR_OK) return 0;
  std::fprintf(stderr, "emr: %s\n", emr_last_error());
  return s == EMR_E_IO ? kExitIo : kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed-reality capture, keying, transport and fusion pipeline"};
  app.require_subcommand(1);

  std::string config_path, policy, adversary, out_dir, metrics_path;
  std::optional<std::uint64_t> seed;
  bool wall_clock = false;
  auto* run = app.add_subcommand("run", "Process a frame sequence end to end");
  run->add_option("--config", config_path, "Config file")->required();
  run->add_option("--seed", seed, "Override the run seed");
  run->add_option("--policy", policy, "Encoding policy")->check(CLI::IsMember({"qoe", "qos", "balance"}));
  run->add_option("--adversary", adversary, "Adversary on the link")
      ->check(CLI::IsMember({"tamper", "replay", "impersonate", "none"}));
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--metrics", metrics_path, "Metrics CSV path");
  run->add_flag("--wall-clock", wall_clock, "Report measured stage time in ms_total");

  std::string gen_dir;
  int gen_frames = 100;
  std::uint64_t gen_seed = 1;
  auto* gen = app.add_subcommand("gen-synthetic", "Write the moving-square test sequence");
  gen->add_option("--out", gen_dir, "Output directory")->required();
  gen->add_option("--frames", gen_frames, "Frame count")->check(CLI::NonNegativeNumber);
  gen->add_option("--seed", gen_seed, "Noise seed");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate-config", "Check a config file");
  validate->add_option("path", validate_path, "Config file")->required();

  auto* print = app.add_subcommand("print-config", "Print a config template with every key and default");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (*run) {
    emr_run_options o{};
    o.config_path = config_path.c_str();
    o.has_seed = seed.has_value();
    o.seed = seed.value_or(0);
    o.policy = policy.empty() ? nullptr : policy.c_str();
    o.adversary = adversary.empty() ? nullptr : adversary.c_str();
    o.out_dir = out_dir.empty() ? nullptr : out_dir.c_str();
    o.metrics_path = metrics_path.empty() ? nullptr : metrics_path.c_str();
    o.wall_clock = wall_clock ? 1 : 0;
    emr_run_summary summary{};
    if (int rc = report(emr_pipeline_run(&o, &summary))) return rc;
    std::printf("frames=%zu outputs=%zu dropped=%zu alarms=%zu\n", summary.frames, summary.outputs_written,
                summary.dropped, summary.alarms);
    return 0;
  }
  if (*gen) return report(emr_generate_synthetic(gen_dir.c_str(), gen_frames, gen_seed));
  if (*validate) {
    emr_buffer* warnings = nullptr;
    if (int rc = report(emr_config_validate(validate_path.c_str(), &warnings))) return rc;
    std::fwrite(emr_buffer_data(warnings), 1, emr_buffer_size(warnings), stderr);
    emr_buffer_free(warnings);
    std::printf("ok\n");
    return 0;
  }
  if (*print) {
    emr_buffer* text = nullptr;
    if (int rc = report(emr_config_template(&text))) return rc;
    std::fwrite(emr_buffer_data(text), 1, emr_buffer_size(text), stdout);
    emr_buffer_free(text);
  }
  return 0;
}
