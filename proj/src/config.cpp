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

#include "cdl/config.hpp"

#include <sstream>

namespace cdl {

double SystemConfig::velocity_kmh(int user) const {
  if (user < 0 || std::size_t(user) >= velocities_kmh.size()) throw ParameterError("no velocity configured for user");
  return velocities_kmh[std::size_t(user)];
}

std::vector<std::string> validate(const SystemConfig& c) {
  std::vector<std::string> out;
  auto positive = [&](int value, const char* name) {
    if (value < 1) out.push_back(std::string(name) + " must be a positive integer");
  };
  positive(c.tx_antennas, "tx_antennas");
  positive(c.rx_antennas, "rx_antennas");
  positive(c.subcarriers, "subcarriers");
  positive(c.taps, "taps");
  positive(c.users, "users");
  positive(c.sparsity, "sparsity");
  positive(c.measurement_rows, "measurement_rows");
  positive(c.training_frames, "training_frames");
  positive(c.test_vectors, "test_vectors");
  positive(c.total_frames, "total_frames");
  if (!out.empty()) return out;

  const Index n = c.vector_length();
  if (c.taps > c.subcarriers) out.push_back("taps L must not exceed subcarriers N_c (L <= N_c)");
  if (c.measurement_rows >= n) out.push_back("measurement_rows N_g must be smaller than N_r*N_t");
  if (c.measurement_rows <= 2 * c.sparsity) out.push_back("measurement_rows N_g must satisfy N_g > 2S");
  if (c.sparsity >= n) out.push_back("sparsity S must be smaller than N_r*N_t");
  if (c.velocities_kmh.size() != std::size_t(c.users)) out.push_back("velocities must list one speed per user");
  for (double v : c.velocities_kmh)
    if (v < 0) {
      out.push_back("velocities must be nonnegative");
      break;
    }
  if (!(c.carrier_freq > 0)) out.push_back("carrier_freq must be positive");
  if (!(c.bandwidth > 0)) out.push_back("bandwidth must be positive");
  if (!(c.spacing_wavelengths >= 0)) out.push_back("antenna spacing must be nonnegative");
  if (!(c.frame_interval > 0)) out.push_back("frame_interval must be positive");
  if (c.total_frames <= 2 * c.training_frames) out.push_back("total_frames must exceed 2N (three protocol phases)");
  return out;
}

void require_valid(const SystemConfig& config) {
  const auto problems = validate(config);
  if (problems.empty()) return;
  std::ostringstream msg;
  msg << "invalid configuration:";
  for (const auto& p : problems) msg << "\n  - " << p;
  throw ParameterError(msg.str());
}

SystemConfig paper_preset() {
  SystemConfig c;
  c.tx_antennas = 64;
  c.rx_antennas = 1;
  c.subcarriers = 32;
  c.taps = 4;
  c.users = 1;
  c.sparsity = 8;
  c.measurement_rows = 32;
  c.velocities_kmh = {20.0};
  c.training_frames = 50;
  c.test_vectors = 500;
  c.total_frames = 2 * c.training_frames + c.test_vectors;
  return c;
}

SystemConfig desk_preset() {
  SystemConfig c = paper_preset();
  c.tx_antennas = 16;
  c.subcarriers = 8;
  c.sparsity = 3;
  c.measurement_rows = 8;
  c.training_frames = 20;
  c.test_vectors = 100;
  c.total_frames = 2 * c.training_frames + c.test_vectors;
  return c;
}

}  // namespace cdl
