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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cdl/channel.hpp"
#include "cdl/config.hpp"
#include "cdl/link.hpp"
#include "cdl/protocol.hpp"
#include "cdl/sparsify.hpp"

namespace cdl {

enum class ExperimentId { SingleUeCompare, SubcarrierCompare, MultiUe, Ber, AccountingTables };

std::string to_string(ExperimentId id);
std::optional<ExperimentId> parse_experiment_id(const std::string& name);

struct ExperimentSpec {
  ExperimentId experiment = ExperimentId::SingleUeCompare;
  SystemConfig system;
  std::string output_dir = "out";

  std::vector<Index> sparsities{2, 4, 6, 8, 10, 12, 14, 16};
  std::vector<int> subcarriers{1};  // 1-based
  // Learn the dictionaries again at every swept sparsity; otherwise they are
  // learned once at system.sparsity.
  bool relearn_per_sparsity = true;

  std::vector<int> compression_factors{2, 4};
  std::vector<int> ber_sparsities{15, 7};  // one per compression factor
  std::vector<double> snr_db{-21, -18, -15, -12, -9, -6};
  std::uint64_t ber_min_bits = 100000;

  std::int64_t accounting_frames = 1024;

  std::string dict_in;
  std::string dict_out;
};

/// (experiment, dictionary, S or g, subcarrier, user, value); indices 1-based.
struct NmseRow {
  std::string experiment;
  std::string dictionary;
  double parameter = 0.0;
  int subcarrier = 1;
  int user = 1;
  double value = 0.0;
};

struct ExperimentOutput {
  std::vector<NmseRow> nmse;
  std::vector<BerCurve> ber;
  std::map<std::string, std::string> tables;  // file name -> CSV text
  std::optional<Dictionary> common;           // the learned CDL-OP dictionary
};

/// Dictionaries a single UE learns from frames 1..N.
struct SingleUeDictionaries {
  Dictionary dft;
  std::vector<Dictionary> ksvd;  // one per subcarrier
  Dictionary cdl_op;
  std::optional<Dictionary> cdl_ksvd;
};

SingleUeDictionaries learn_single_ue(const SystemConfig& config, const std::vector<ChannelRealization>& training,
                                     Index sparsity, bool with_cdl_ksvd);

/// Runs the experiment in memory. A supplied common dictionary replaces the
/// learned CDL-OP dictionary.
ExperimentOutput run_experiment(const ExperimentSpec& spec, const Dictionary* common_override = nullptr);

/// CSV: experiment,dictionary,param,subcarrier,user,value
std::string nmse_csv(const std::vector<NmseRow>& rows);
std::string ber_csv(const std::vector<BerCurve>& curves);

/// Writes nmse.csv / ber.csv / table CSVs into spec.output_dir and returns the
/// file names written.
std::vector<std::string> write_experiment_outputs(const ExperimentSpec& spec, const ExperimentOutput& output);

}  // namespace cdl
