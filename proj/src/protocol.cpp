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

#include "cdl/protocol.hpp"

#include <charconv>
#include <ostream>

namespace cdl {

std::string to_string(Phase phase) {
  switch (phase) {
    case Phase::Dft: return "dft";
    case Phase::Ksvd: return "ksvd";
    case Phase::Common: return "common";
  }
  return "?";
}

std::string to_string(LearningMethod method) { return method == LearningMethod::CdlOp ? "CDL-OP" : "CDL-KSVD"; }

double ProtocolTrace::mean_nmse(Phase phase) const {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& r : records) {
    if (r.phase != phase || r.nmse_den <= 0) continue;
    sum += r.nmse_num / r.nmse_den;
    ++count;
  }
  return count == 0 ? 0.0 : sum / double(count);
}

std::size_t ProtocolTrace::transfers_at(int frame, LinkDirection direction) const {
  std::size_t count = 0;
  for (const auto& t : transfers)
    if (t.frame == frame && t.direction == direction) ++count;
  return count;
}

ProtocolOptions ProtocolOptions::from_config(const SystemConfig& config, LearningMethod method) {
  ProtocolOptions o;
  o.method = method;
  o.ue_ksvd.sparsity = config.sparsity;
  o.bs_ksvd.sparsity = config.sparsity;
  return o;
}

CdlProtocol::CdlProtocol(SystemConfig config, ProtocolOptions options)
    : config_(std::move(config)), options_(std::move(options)) {
  if (config_.total_frames <= 2 * config_.training_frames)
    throw ParameterError("run_cdl_framework: total_frames must exceed 2N");
  const Index n = config_.vector_length();
  if (config_.sparsity < 1 || config_.sparsity >= n) throw ParameterError("protocol: sparsity must satisfy 1 <= S < n");
  phi_ = gaussian_measurement(Rng::derive_seed(config_.seed, {0x706869ULL}), config_.measurement_rows, n);
  dft_ = dft_dictionary(n);
  const std::size_t slots = std::size_t(config_.users) * std::size_t(config_.subcarriers);
  ue_training_.resize(slots);
  bs_channels_.resize(slots);
  bs_codes_.resize(slots);
}

Phase CdlProtocol::phase() const {
  const int next = frame_ + 1;
  if (next <= config_.training_frames) return Phase::Dft;
  if (next <= 2 * config_.training_frames) return Phase::Ksvd;
  return Phase::Common;
}

const Dictionary& CdlProtocol::common() const {
  if (!has_common_) throw ProtocolError("common dictionary has not been learned yet");
  return common_;
}

const Dictionary& CdlProtocol::dictionary_for(int user, int subcarrier) const {
  switch (phase()) {
    case Phase::Dft: return dft_;
    case Phase::Ksvd: return ksvd_.at(slot(user, subcarrier));
    case Phase::Common: return common();
  }
  return dft_;
}

void CdlProtocol::step(const std::vector<ChannelRealization>& channels) {
  if (channels.size() != std::size_t(config_.users)) throw ShapeError("protocol step: need one realization per user");
  if (frame_ >= config_.total_frames) throw ProtocolError("protocol step: all frames already processed");
  const Phase current = phase();
  const int frame = frame_ + 1;
  const Index sparsity = config_.sparsity;

  for (int k = 0; k < config_.users; ++k) {
    const auto& real = channels[std::size_t(k)];
    if (Index(real.fdchtf.size()) != config_.subcarriers) throw ShapeError("protocol step: wrong subcarrier count");
    for (int l = 0; l < config_.subcarriers; ++l) {
      const CVector h = real.vector(l);
      // UE side: the dictionary in force for this (user, subcarrier).
      const Dictionary& ue_dict = dictionary_for(k, l);
      CompressedFeedback fb = compress(h, phi_, ue_dict);
      fb.user = k;
      fb.subcarrier = l;
      fb.frame = frame;
      // BS side: the same registry, looked up independently by id.
      const Dictionary& bs_dict = dictionary_for(k, l);
      const Reconstruction rec = reconstruct(fb, phi_, bs_dict, sparsity, &bs_cache_);
      ++trace_.precoder_updates;

      FeedbackRecord r;
      r.frame = frame;
      r.user = k;
      r.subcarrier = l;
      r.phase = current;
      r.dict_id = bs_dict.id;
      r.nmse_num = (rec.channel - h).squaredNorm();
      r.nmse_den = h.squaredNorm();
      r.payload = fb.values.size();
      trace_.records.push_back(std::move(r));

      if (current == Phase::Dft) {
        ue_training_[slot(k, l)].push_back(h);
      } else if (current == Phase::Ksvd) {
        bs_channels_[slot(k, l)].push_back(rec.channel);
        bs_codes_[slot(k, l)].push_back(rec.codes.dense());
      }
    }
  }
  frame_ = frame;

  if (frame == config_.training_frames) learn_subcarrier_dictionaries();
  if (frame == 2 * config_.training_frames) learn_common_dictionary();
}

void CdlProtocol::learn_subcarrier_dictionaries() {
  const Index n = config_.vector_length();
  ksvd_.clear();
  ksvd_.reserve(ue_training_.size());
  for (int k = 0; k < config_.users; ++k)
    for (int l = 0; l < config_.subcarriers; ++l) {
      auto& columns = ue_training_[slot(k, l)];
      CMatrix training(n, Index(columns.size()));
      for (std::size_t j = 0; j < columns.size(); ++j) training.col(Index(j)) = columns[j];
      auto learned = ksvd(training, dft_.atoms, options_.ue_ksvd);
      ksvd_.push_back(ksvd_dictionary(std::move(learned.dictionary), k, l));
      columns.clear();

      DictionaryTransfer t;
      t.frame = config_.training_frames;
      t.direction = LinkDirection::Uplink;
      t.user = k;
      t.subcarrier = l;
      t.dict_id = ksvd_.back().id;
      t.payload_elements = n * n;
      trace_.transfers.push_back(std::move(t));
    }
  trace_.ksvd_learned_frame = config_.training_frames;
}

void CdlProtocol::learn_common_dictionary() {
  const Index n = config_.vector_length();
  Index total = 0;
  for (const auto& s : bs_channels_) total += Index(s.size());
  // User-major, then subcarrier, then frame.
  CMatrix channels(n, total);
  CMatrix codes(n, total);
  Index col = 0;
  for (int k = 0; k < config_.users; ++k)
    for (int l = 0; l < config_.subcarriers; ++l) {
      const auto s = slot(k, l);
      for (std::size_t j = 0; j < bs_channels_[s].size(); ++j, ++col) {
        channels.col(col) = bs_channels_[s][j];
        codes.col(col) = bs_codes_[s][j];
      }
    }

  if (options_.method == LearningMethod::CdlOp) {
    common_ = cdl_op(channels, codes);
  } else {
    TrainingSet set{channels, codes, TrainingSet::Provenance::ReconstructedAtBs};
    const CMatrix* init = options_.bs_init_from_dft ? nullptr : &ksvd_.front().atoms;
    common_ = cdl_ksvd(set, options_.bs_ksvd, nullptr, init);
  }
  has_common_ = true;
  bs_channels_.clear();
  bs_codes_.clear();
  trace_.common_learned_frame = 2 * config_.training_frames;

  for (int k = 0; k < config_.users; ++k) {
    DictionaryTransfer t;
    t.frame = 2 * config_.training_frames;
    t.direction = LinkDirection::Downlink;
    t.user = k;
    t.dict_id = common_.id;
    t.payload_elements = n * n;
    trace_.transfers.push_back(std::move(t));
  }
}

ProtocolResult run_cdl_framework(const SystemConfig& config, const ChannelSource& source,
                                 const ProtocolOptions& options) {
  CdlProtocol protocol(config, options);
  std::vector<std::vector<ChannelRealization>> per_user;
  per_user.reserve(std::size_t(config.users));
  for (int k = 0; k < config.users; ++k) per_user.push_back(source.frames(k, config.total_frames));

  std::vector<ChannelRealization> frame(std::size_t(config.users));
  for (int n = 0; n < config.total_frames; ++n) {
    for (int k = 0; k < config.users; ++k) frame[std::size_t(k)] = per_user[std::size_t(k)][std::size_t(n)];
    protocol.step(frame);
  }
  ProtocolResult out;
  out.trace = protocol.trace();
  out.measurement = protocol.measurement();
  out.ksvd = protocol.ksvd_dictionaries();
  out.common = protocol.common();
  return out;
}

namespace {

void put_double(std::ostream& out, double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.write(buf, res.ptr - buf);
}

}  // namespace

void write_trace_csv(std::ostream& out, const ProtocolTrace& trace) {
  out << "frame,user,subcarrier,phase,dict_id,nmse_num,nmse_den\n";
  for (const auto& r : trace.records) {
    out << r.frame << ',' << r.user + 1 << ',' << r.subcarrier + 1 << ',' << to_string(r.phase) << ',' << r.dict_id
        << ',';
    put_double(out, r.nmse_num);
    out << ',';
    put_double(out, r.nmse_den);
    out << '\n';
  }
}

}  // namespace cdl
