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

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cdl/experiments.hpp"

namespace cdl {

/// Raised for malformed spec files; carries a 1-based position.
struct SpecParseError : Error {
  SpecParseError(const std::string& what, int line, int column)
      : Error(what), line(line), column(column) {}
  int line;
  int column;
};

enum class Preset { Paper, Desk };

std::optional<Preset> parse_preset(const std::string& name);

/// Defaults for an experiment under a preset (system parameters, sweep grids).
ExperimentSpec preset_spec(ExperimentId id, Preset preset);

/// Reads a YAML spec. Keys given in the file override the preset named by
/// `preset:` in the file (or `fallback_preset`).
///
///   experiment: exp1_single_ue_compare
///   preset: desk
///   seed: 7
///   output: out/exp1
///   system: { tx_antennas: 16, subcarriers: 8, ... }
///   sweep:  { sparsities: [1, 2, 3, 4], subcarriers: [1] }
///   ber:    { compression_factors: [2, 4], sparsities: [7, 3], snr_db: [...], min_bits: 100000 }
///   accounting: { frames: 1024 }
ExperimentSpec load_spec_file(const std::string& path, std::optional<Preset> preset_override = std::nullopt);
ExperimentSpec parse_spec(const std::string& text, std::optional<Preset> preset_override = std::nullopt);

/// Every problem with the spec, deterministic order.
std::vector<std::string> validate_spec(const ExperimentSpec& spec);

/// Flat key=value echo of everything needed to re-run.
std::string manifest_text(const ExperimentSpec& spec);

/// Dictionary file: one ASCII header line "CDLDICT 1 <n> <kind> <id>" then
/// n*n (re, im) little-endian float64 pairs in row-major order.
void write_dictionary_file(const std::string& path, const Dictionary& dict);
Dictionary read_dictionary_file(const std::string& path);

}  // namespace cdl
