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

#include <catch_amalgamated.hpp>

#include <map>
#include <sstream>

#include "cdl/protocol.hpp"

using namespace cdl;

namespace {

SystemConfig tiny() {
  SystemConfig c = desk_preset();
  c.users = 2;
  c.velocities_kmh = {20.0, 40.0};
  c.tx_antennas = 4;
  c.subcarriers = 4;
  c.measurement_rows = 3;
  c.sparsity = 1;
  c.training_frames = 3;
  c.total_frames = 8;
  return c;
}

}  // namespace

TEST_CASE("Protocol bookkeeping on a tiny system") {
  const SystemConfig c = tiny();
  const auto result = run_cdl_framework(c, ChannelSource(c), ProtocolOptions::from_config(c, LearningMethod::CdlOp));
  const auto& t = result.trace;
  CHECK(t.records.size() == 8 * 2 * 4);
  CHECK(t.transfers_at(3, LinkDirection::Uplink) == 8);
  CHECK(t.transfers_at(6, LinkDirection::Downlink) == 2);
  CHECK(t.transfers.size() == 10);
  CHECK(t.ksvd_learned_frame == 3);
  CHECK(t.common_learned_frame == 6);
  CHECK(t.precoder_updates == t.records.size());
  for (const auto& tr : t.transfers) CHECK(tr.payload_elements == 16);
  CHECK(result.ksvd.size() == 8);
  CHECK(result.common.id == "common/op");
}

TEST_CASE("Every record uses the dictionary of its phase") {
  const SystemConfig c = tiny();
  for (auto method : {LearningMethod::CdlOp, LearningMethod::CdlKsvd}) {
    const auto t = run_cdl_framework(c, ChannelSource(c), ProtocolOptions::from_config(c, method)).trace;
    const std::string common = method == LearningMethod::CdlOp ? "common/op" : "common/ksvd";
    for (const auto& r : t.records) {
      if (r.frame <= 3) {
        CHECK(r.phase == Phase::Dft);
        CHECK(r.dict_id == "dft");
      } else if (r.frame <= 6) {
        CHECK(r.phase == Phase::Ksvd);
        CHECK(r.dict_id == "ksvd/u" + std::to_string(r.user + 1) + "/sc" + std::to_string(r.subcarrier + 1));
      } else {
        CHECK(r.phase == Phase::Common);
        CHECK(r.dict_id == common);
      }
    }
  }
}

TEST_CASE("Each slot sends one compressed vector per frame") {
  const SystemConfig c = tiny();
  const auto t = run_cdl_framework(c, ChannelSource(c), ProtocolOptions::from_config(c, LearningMethod::CdlOp)).trace;
  std::map<std::pair<int, int>, int> per_slot;
  for (const auto& r : t.records) {
    ++per_slot[{r.user, r.subcarrier}];
    CHECK(r.payload == c.measurement_rows);
    CHECK(r.nmse_num >= 0.0);
    CHECK(r.nmse_den > 0.0);
  }
  CHECK(per_slot.size() == 8);
  for (const auto& [slot, count] : per_slot) CHECK(count == c.total_frames);
}

TEST_CASE("Stepping the protocol by hand") {
  const SystemConfig c = tiny();
  CdlProtocol p(c, ProtocolOptions::from_config(c, LearningMethod::CdlOp));
  const ChannelSource src(c);
  const auto u0 = src.frames(0, c.total_frames);
  const auto u1 = src.frames(1, c.total_frames);

  CHECK(p.phase() == Phase::Dft);
  CHECK_FALSE(p.has_common());
  CHECK_THROWS_AS(p.common(), ProtocolError);
  CHECK_THROWS_AS(p.step({u0[0]}), ShapeError);
  for (int n = 0; n < c.total_frames; ++n) {
    if (n == 3) CHECK(p.phase() == Phase::Ksvd);
    if (n == 6) CHECK(p.phase() == Phase::Common);
    p.step({u0[std::size_t(n)], u1[std::size_t(n)]});
  }
  CHECK(p.has_common());
  CHECK(p.dictionary_for(1, 2).id == "common/op");
  CHECK_THROWS_AS(p.step({u0[0], u1[0]}), ProtocolError);

  SystemConfig short_run = c;
  short_run.total_frames = 6;
  CHECK_THROWS_AS(CdlProtocol(short_run, ProtocolOptions::from_config(short_run, LearningMethod::CdlOp)),
                  ParameterError);
}

// A seeded regression run at the default seed, not a general property: at
// S = 2 the CDL-OP phase can lose to DFT for other seeds.
TEST_CASE("Learned dictionaries lower the NMSE against the DFT phase") {
  SystemConfig c = desk_preset();
  c.tx_antennas = 16;
  c.subcarriers = 8;
  c.measurement_rows = 8;
  c.sparsity = 2;
  c.seed = 1;
  c.training_frames = 50;
  c.total_frames = 2 * c.training_frames + 100;
  for (auto method : {LearningMethod::CdlOp, LearningMethod::CdlKsvd}) {
    const auto t = run_cdl_framework(c, ChannelSource(c), ProtocolOptions::from_config(c, method)).trace;
    CHECK(t.mean_nmse(Phase::Common) < t.mean_nmse(Phase::Dft));
  }
}

TEST_CASE("Trace CSV layout") {
  ProtocolTrace t;
  FeedbackRecord r;
  r.frame = 7;
  r.user = 0;
  r.subcarrier = 2;
  r.phase = Phase::Common;
  r.dict_id = "common/op";
  r.nmse_num = 0.25;
  r.nmse_den = 2.0;
  t.records.push_back(r);
  std::ostringstream out;
  write_trace_csv(out, t);
  CHECK(out.str() == "frame,user,subcarrier,phase,dict_id,nmse_num,nmse_den\n7,1,3," + to_string(Phase::Common) +
                         ",common/op,0.25,2\n");
}
