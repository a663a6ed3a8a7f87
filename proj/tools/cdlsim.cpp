// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The cdl-csi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// cdlsim: experiment runner for the common-dictionary CSI feedback simulator.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cdl/experiments.hpp"
#include "cdl/spec_file.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitParse = 3;

struct Flags {
  std::string spec;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string dict_in;
  std::string dict_out;
  std::optional<std::int64_t> frames;
};

std::optional<cdl::Preset> preset_of(const Flags& f) {
  if (f.preset.empty()) return std::nullopt;
  return cdl::parse_preset(f.preset);  // CLI11 already restricted the choices
}

// Flags override the file, which overrides the preset.
cdl::ExperimentSpec load(const Flags& f) {
  auto spec = cdl::load_spec_file(f.spec, preset_of(f));
  if (f.seed) spec.system.seed = *f.seed;
  if (!f.out.empty()) spec.output_dir = f.out;
  if (!f.dict_in.empty()) spec.dict_in = f.dict_in;
  if (!f.dict_out.empty()) spec.dict_out = f.dict_out;
  return spec;
}

int report_parse_error(const cdl::SpecParseError& e, const std::string& path) {
  std::cerr << path << ":" << e.line << ":" << e.column << ": error: " << e.what() << "\n";
  return kExitParse;
}

int cmd_validate(const Flags& f) {
  try {
    const auto spec = load(f);
    const auto problems = cdl::validate_spec(spec);
    for (const auto& p : problems) std::cout << f.spec << ": " << p << "\n";
    if (problems.empty()) std::cout << f.spec << ": ok\n";
    return problems.empty() ? 0 : kExitInvalid;
  } catch (const cdl::SpecParseError& e) {
    return report_parse_error(e, f.spec);
  }
}

int cmd_run(const Flags& f) {
  cdl::ExperimentSpec spec;
  try {
    spec = load(f);
  } catch (const cdl::SpecParseError& e) {
    return report_parse_error(e, f.spec);
  }
  const auto problems = cdl::validate_spec(spec);
  if (!problems.empty()) {
    for (const auto& p : problems) std::cerr << f.spec << ": invalid: " << p << "\n";
    return kExitInvalid;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    std::optional<cdl::Dictionary> supplied;
    if (!spec.dict_in.empty()) supplied = cdl::read_dictionary_file(spec.dict_in);
    const auto output = cdl::run_experiment(spec, supplied ? &*supplied : nullptr);
    auto files = cdl::write_experiment_outputs(spec, output);
    if (!spec.dict_out.empty()) {
      if (!output.common) throw cdl::Error("this experiment does not learn a common dictionary");
      cdl::write_dictionary_file(spec.dict_out, *output.common);
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ofstream manifest(std::filesystem::path(spec.output_dir) / "manifest.txt");
    manifest << cdl::manifest_text(spec) << "version=" << CDL_VERSION << "\n"
             << "wall_time_s=" << seconds << "\n";
    for (const auto& file : files) std::cout << "wrote " << (std::filesystem::path(spec.output_dir) / file).string() << "\n";
    std::cout << "wrote " << (std::filesystem::path(spec.output_dir) / "manifest.txt").string() << "\n";
  } catch (const cdl::ParameterError& e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}

int cmd_tables(const Flags& f) {
  cdl::ExperimentSpec spec =
      cdl::preset_spec(cdl::ExperimentId::AccountingTables, preset_of(f).value_or(cdl::Preset::Paper));
  try {
    if (!f.spec.empty()) spec = load(f);
  } catch (const cdl::SpecParseError& e) {
    return report_parse_error(e, f.spec);
  }
  spec.experiment = cdl::ExperimentId::AccountingTables;
  if (f.frames) spec.accounting_frames = *f.frames;
  if (!f.out.empty()) spec.output_dir = f.out;

  // The experiment renders each table as CSV; echo them to stdout as well.
  const auto output = cdl::run_experiment(spec);
  for (const auto& [name, text] : output.tables) std::cout << "# " << name << "\n" << text << "\n";
  for (const auto& file : cdl::write_experiment_outputs(spec, output))
    std::cout << "wrote " << (std::filesystem::path(spec.output_dir) / file).string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Common-dictionary CSI feedback simulator"};
  app.require_subcommand(1);
  Flags flags;

  auto add_common = [&](CLI::App* cmd, bool spec_required) {
    auto* opt = cmd->add_option("--spec", flags.spec, "Experiment spec file (YAML)");
    if (spec_required) opt->required()->check(CLI::ExistingFile);
    cmd->add_option("--preset", flags.preset, "Parameter preset")->check(CLI::IsMember({"paper", "desk"}));
    cmd->add_option("--seed", flags.seed, "Override the RNG seed");
    cmd->add_option("--out", flags.out, "Output directory");
  };

  auto* run = app.add_subcommand("run", "Run an experiment and write CSV outputs");
  add_common(run, true);
  run->add_option("--dict-out", flags.dict_out, "Write the learned common dictionary here");
  run->add_option("--dict-in", flags.dict_in, "Use this common dictionary instead of learning one")
      ->check(CLI::ExistingFile);

  auto* val = app.add_subcommand("validate", "Check a spec without running it");
  add_common(val, true);

  auto* tables = app.add_subcommand("tables", "Print and write the accounting tables");
  add_common(tables, false);
  tables->add_option("--frames", flags.frames, "N', frames for the CSI feedback ratio");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(flags);
    if (*val) return cmd_validate(flags);
    if (*tables) return cmd_tables(flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
