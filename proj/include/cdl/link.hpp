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
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cdl/coding.hpp"
#include "cdl/types.hpp"

namespace cdl {

/// Diagonal phase-conjugating precoder weights conj(h_i) / |h_i|. Zero
/// entries get weight 1 and set *flagged.
CVector precoder_weights(const CVector& h, bool* flagged = nullptr);
inline Eigen::DiagonalMatrix<Complex, Eigen::Dynamic> precoder(const CVector& h, bool* flagged = nullptr) {
  return Eigen::DiagonalMatrix<Complex, Eigen::Dynamic>(precoder_weights(h, flagged));
}

struct BerPoint {
  double snr_db = 0.0;
  std::uint64_t bit_errors = 0;
  std::uint64_t bits = 0;
  double ber() const { return bits == 0 ? 0.0 : double(bit_errors) / double(bits); }
  /// Binomial standard error of ber().
  double std_error() const;
};

struct BerCurve {
  std::string precoder_source;  // "true" or "cdl_op"
  double compression_factor = 1.0;
  std::vector<BerPoint> points;
};

struct LinkOptions {
  std::vector<double> snr_db;
  std::uint64_t min_bits = 100000;
  // With early_stop, a point ends once it has min_errors errors and every
  // channel has been used for at least one block.
  std::uint64_t min_errors = 200;
  std::size_t block_bits = 1024;
  std::uint64_t seed = 1;
  bool early_stop = false;
};

/// Coded single-stream downlink over one subcarrier.
///
/// Per block b the true channel h = truths[b mod P] and the precoder is built
/// from estimates[b mod P]. Bits are encoded, 16-PSK modulated and sent as
/// x = s W 1 / sqrt(N_t), so y = h^T W 1 s / sqrt(N_t) + n with
/// n ~ CN(0, 10^(-snr/10)). The receiver knows the effective scalar gain,
/// equalizes, hard-demodulates and Viterbi-decodes. Bits and noise depend only
/// on (seed, snr index, block), so curves with different precoders share
/// them.
BerCurve ber_link_sim(std::span<const CVector> truths, std::span<const CVector> estimates, const LinkOptions& options,
                      std::string precoder_source, double compression_factor);

/// CSV: precoder_source,g,snr_db,bit_errors,bits,ber
void write_ber_csv(std::ostream& out, std::span<const BerCurve> curves);

}  // namespace cdl
