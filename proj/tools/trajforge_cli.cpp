// SPDX-License-Identifier: Apache-2.0
// trajforge: gen | synth | mask | eval | all

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "trajforge/pipeline.hpp"

namespace {

struct Args {
  std::string config;
  std::string out;
  std::string mode;
  bool one_shot = false;
  int parallelism = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool sequential = false;
};

trajforge::Config resolve(const Args& a) {
  auto cfg = trajforge::load_config(a.config);
  trajforge::Overrides o;
  if (!a.out.empty()) o.out_dir = a.out;
  if (!a.mode.empty()) o.mode = trajforge::mask_mode_from_string(a.mode);
  o.one_shot = a.one_shot;
  if (a.parallelism != 0) o.parallelism = a.parallelism;
  if (a.seed_set) o.seed = a.seed;
  o.sequential = a.sequential;
  trajforge::apply(cfg, o);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthesize, filter, mask and evaluate agent trajectories"};
  app.require_subcommand(1);
  Args args;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", args.config, "TOML config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", args.out, "output directory (overrides [run].out_dir)");
    sub->add_option("--parallelism", args.parallelism, "concurrent episodes")->check(CLI::PositiveNumber);
    sub->add_option("--seed-override", args.seed, "replace every configured seed")
        ->each([&](const std::string&) { args.seed_set = true; });
    sub->add_flag("--one-shot", args.one_shot, "prepend the worked example to policy prompts");
    sub->add_option("--mode", args.mode, "masking of the reflected set")
        ->check(CLI::IsMember({"full", "partial_mask"}));
    sub->add_flag("--sequential", args.sequential, "mask: also write d1 and dr as separate sets");
  };
  auto* gen = app.add_subcommand("gen", "generate tasks and golden trajectories");
  auto* synth = app.add_subcommand("synth", "split, synthesize reflected trajectories, filter");
  auto* mask = app.add_subcommand("mask", "build the training JSONL");
  auto* eval = app.add_subcommand("eval", "evaluate the configured policy");
  auto* all = app.add_subcommand("all", "gen, synth, mask and eval in order");
  for (auto* sub : {gen, synth, mask, eval, all}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : trajforge::kExitConfig;
  }

  try {
    const auto cfg = resolve(args);
    auto& log = std::cerr;
    if (*gen) return trajforge::cmd_gen(cfg, log);
    if (*synth) return trajforge::cmd_synth(cfg, log);
    if (*mask) return trajforge::cmd_mask(cfg, log);
    if (*eval) return trajforge::cmd_eval(cfg, log);
    int rc = trajforge::cmd_gen(cfg, log);
    if (rc == 0) rc = trajforge::cmd_synth(cfg, log);
    if (rc == 0) rc = trajforge::cmd_mask(cfg, log);
    if (rc == 0) rc = trajforge::cmd_eval(cfg, log);
    return rc;
  } catch (const trajforge::Error& e) {
    std::cerr << "trajforge: " << trajforge::to_string(e.code()) << ": " << e.what() << "\n";
    return trajforge::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "trajforge: " << e.what() << "\n";
    return trajforge::kExitRuntime;
  }
}
