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

#include "cdl/link.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "cdl/rng.hpp"

namespace cdl {

CVector precoder_weights(const CVector& h, bool* flagged) {
  CVector w(h.size());
  bool zero = false;
  for (Index i = 0; i < h.size(); ++i) {
    const double mag = std::abs(h(i));
    if (mag == 0.0) {
      w(i) = 1.0;
      zero = true;
    } else {
      w(i) = std::conj(h(i)) / mag;
    }
  }
  if (flagged != nullptr) *flagged = zero;
  return w;
}

double BerPoint::std_error() const {
  if (bits == 0) return 0.0;
  const double p = ber();
  return std::sqrt(p * (1.0 - p) / double(bits));
}

BerCurve ber_link_sim(std::span<const CVector> truths, std::span<const CVector> estimates, const LinkOptions& options,
                      std::string precoder_source, double compression_factor) {
  if (truths.empty() || truths.size() != estimates.size())
    throw ShapeError("ber_link_sim: need matching, non-empty true and estimated channel lists");
  if (options.block_bits == 0) throw ParameterError("ber_link_sim: block_bits must be positive");

  BerCurve curve;
  curve.precoder_source = std::move(precoder_source);
  curve.compression_factor = compression_factor;

  // Effective scalar gain of every channel pair, a = h^T W 1 / sqrt(N_t).
  std::vector<Complex> gains(truths.size());
  for (std::size_t p = 0; p < truths.size(); ++p) {
    if (truths[p].size() != estimates[p].size()) throw ShapeError("ber_link_sim: channel length mismatch");
    const CVector w = precoder_weights(estimates[p]);
    gains[p] = truths[p].cwiseProduct(w).sum() / std::sqrt(double(truths[p].size()));
  }

  const std::size_t info = options.block_bits;
  const std::size_t coded_len = 2 * (info + 2);
  const std::size_t padded = (coded_len + 3) / 4 * 4;

  for (std::size_t i = 0; i < options.snr_db.size(); ++i) {
    BerPoint point;
    point.snr_db = options.snr_db[i];
    const double noise_var = std::pow(10.0, -point.snr_db / 10.0);
    for (std::uint64_t block = 0;; ++block) {
      if (point.bits >= options.min_bits) break;
      if (options.early_stop && block >= gains.size() && point.bit_errors >= options.min_errors) break;

      Rng rng = Rng::stream(options.seed, {0x626572ULL, std::uint64_t(i), block});
      Bits bits(info);
      for (auto& b : bits) b = std::uint8_t(rng.bit());
      Bits coded = conv_encode(bits);
      coded.resize(padded, 0);
      const CVector symbols = psk16_modulate(coded);

      const Complex a = gains[std::size_t(block % gains.size())];
      CVector equalized(symbols.size());
      for (Index k = 0; k < symbols.size(); ++k) {
        const Complex y = a * symbols(k) + rng.complex_normal(noise_var);
        equalized(k) = a == Complex(0.0) ? y : y / a;
      }
      Bits hard = psk16_demodulate(equalized);
      hard.resize(coded_len);
      const Bits decoded = viterbi_decode(hard);
      for (std::size_t b = 0; b < info; ++b) point.bit_errors += decoded[b] != bits[b];
      point.bits += info;
    }
    curve.points.push_back(point);
  }
  return curve;
}

void write_ber_csv(std::ostream& out, std::span<const BerCurve> curves) {
  out << "precoder_source,g,snr_db,bit_errors,bits,ber\n";
  char buf[64];
  auto num = [&](double v) {
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.write(buf, res.ptr - buf);
  };
  for (const auto& c : curves)
    for (const auto& p : c.points) {
      out << c.precoder_source << ',';
      num(c.compression_factor);
      out << ',';
      num(p.snr_db);
      out << ',' << p.bit_errors << ',' << p.bits << ',';
      num(p.ber());
      out << '\n';
    }
}

}  // namespace cdl
