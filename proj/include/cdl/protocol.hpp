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

#include <iosfwd>
#include <string>
#include <vector>

#include "cdl/channel.hpp"
#include "cdl/config.hpp"
#include "cdl/dictlearn.hpp"
#include "cdl/sparsify.hpp"

namespace cdl {

enum class Phase { Dft = 1, Ksvd = 2, Common = 3 };
enum class LearningMethod { CdlKsvd, CdlOp };
enum class LinkDirection { Uplink, Downlink };

std::string to_string(Phase phase);
std::string to_string(LearningMethod method);

/// One compressed vector fed back and reconstructed.
struct FeedbackRecord {
  int frame = 0;       // 1-based
  int user = 0;        // 0-based
  int subcarrier = 0;  // 0-based
  Phase phase = Phase::Dft;
  std::string dict_id;
  double nmse_num = 0.0;  // ||h_hat - h||^2
  double nmse_den = 0.0;  // ||h||^2
  Index payload = 0;      // N_g
};

struct DictionaryTransfer {
  int frame = 0;
  LinkDirection direction = LinkDirection::Uplink;
  int user = 0;
  int subcarrier = -1;  // -1 for the common dictionary
  std::string dict_id;
  Index payload_elements = 0;
};

struct ProtocolTrace {
  std::vector<FeedbackRecord> records;
  std::vector<DictionaryTransfer> transfers;
  int ksvd_learned_frame = 0;
  int common_learned_frame = 0;
  std::size_t precoder_updates = 0;

  double mean_nmse(Phase phase) const;
  std::size_t transfers_at(int frame, LinkDirection direction) const;
};

struct ProtocolOptions {
  LearningMethod method = LearningMethod::CdlOp;
  KsvdOptions ue_ksvd;  // per-subcarrier learning at the UEs
  KsvdOptions bs_ksvd;  // pooled learning at the BS (CDL-KSVD only)
  // CDL-KSVD at the BS starts from the DFT basis; when false it starts from
  // the first user's first-subcarrier K-SVD dictionary.
  bool bs_init_from_dft = true;

  static ProtocolOptions from_config(const SystemConfig& config, LearningMethod method);
};

/// Three-phase CDL feedback protocol for K users.
///
///   frames 1..N     DFT basis; UEs collect their true channel vectors and at
///                   frame N learn one K-SVD dictionary per subcarrier, then
///                   send all of them uplink once.
///   frames N+1..2N  per-subcarrier K-SVD dictionaries; the BS collects its
///                   reconstructions and their sparse codes and at frame 2N
///                   learns the common dictionary and sends it downlink.
///   frames > 2N     common dictionary for every user and subcarrier.
class CdlProtocol {
 public:
  CdlProtocol(SystemConfig config, ProtocolOptions options);

  /// Phase of the next frame to be processed.
  Phase phase() const;
  int frames_processed() const { return frame_; }

  /// Processes one frame; `channels[k]` is user k's realization.
  void step(const std::vector<ChannelRealization>& channels);

  const Dictionary& dictionary_for(int user, int subcarrier) const;
  const ProtocolTrace& trace() const { return trace_; }
  const MeasurementMatrix& measurement() const { return phi_; }
  const Dictionary& dft() const { return dft_; }
  const std::vector<Dictionary>& ksvd_dictionaries() const { return ksvd_; }
  const Dictionary& common() const;
  bool has_common() const { return has_common_; }

 private:
  std::size_t slot(int user, int subcarrier) const { return std::size_t(user) * std::size_t(config_.subcarriers) + std::size_t(subcarrier); }
  void learn_subcarrier_dictionaries();
  void learn_common_dictionary();

  SystemConfig config_;
  ProtocolOptions options_;
  MeasurementMatrix phi_;
  Dictionary dft_;
  std::vector<Dictionary> ksvd_;
  Dictionary common_;
  bool has_common_ = false;
  SensingCache bs_cache_;
  int frame_ = 0;

  // UE side: true vectors of phase 1, per (user, subcarrier).
  std::vector<std::vector<CVector>> ue_training_;
  // BS side: reconstructions and their codes of phase 2, per (user, subcarrier).
  std::vector<std::vector<CVector>> bs_channels_;
  std::vector<std::vector<CVector>> bs_codes_;

  ProtocolTrace trace_;
};

struct ProtocolResult {
  ProtocolTrace trace;
  MeasurementMatrix measurement;
  std::vector<Dictionary> ksvd;  // index user * N_c + subcarrier
  Dictionary common;
};

/// Runs frames 1..total_frames of every user through CdlProtocol.
ProtocolResult run_cdl_framework(const SystemConfig& config, const ChannelSource& source,
                                 const ProtocolOptions& options);

/// CSV columns: frame,user,subcarrier,phase,dict_id,nmse_num,nmse_den
void write_trace_csv(std::ostream& out, const ProtocolTrace& trace);

}  // namespace cdl
