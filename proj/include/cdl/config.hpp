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
#include <string>
#include <vector>

#include "cdl/types.hpp"

namespace cdl {

inline constexpr double kSpeedOfLight = 299792458.0;

/// Scalar parameters of one simulation. Antenna spacing is stored in
/// wavelengths so that changing the carrier keeps the array geometry.
struct SystemConfig {
  int tx_antennas = 64;
  int rx_antennas = 1;
  int subcarriers = 32;
  int taps = 4;
  int users = 1;
  int sparsity = 8;
  int measurement_rows = 32;
  double carrier_freq = 2e9;
  double bandwidth = 20e6;
  double spacing_wavelengths = 1.0 / 15.0;
  std::vector<double> velocities_kmh{20.0};
  double frame_interval = 10e-3;
  int training_frames = 50;
  int test_vectors = 500;
  int total_frames = 600;
  std::uint64_t seed = 1;

  Index vector_length() const { return Index(rx_antennas) * tx_antennas; }
  double wavelength() const { return kSpeedOfLight / carrier_freq; }
  double antenna_spacing() const { return spacing_wavelengths * wavelength(); }
  /// g = N_r N_t / N_g.
  double compression_factor() const { return double(vector_length()) / measurement_rows; }
  double velocity_kmh(int user) const;
};

/// Every violated invariant, one message each, in a fixed order. Empty when
/// the configuration is usable.
std::vector<std::string> validate(const SystemConfig& config);

/// Throws ParameterError listing all violations.
void require_valid(const SystemConfig& config);

/// Paper-scale defaults (N_t = 64, N_c = 32, N = 50, P = 500).
SystemConfig paper_preset();
/// Small variant that runs in seconds.
SystemConfig desk_preset();

}  // namespace cdl
