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

#include <bit>
#include <limits>
#include <numbers>

#include "cdl/coding.hpp"
#include "cdl/rng.hpp"

using namespace cdl;

namespace {

Bits random_bits(Rng& rng, std::size_t n) {
  Bits b(n);
  for (auto& x : b) x = std::uint8_t(rng.bit());
  return b;
}

int hamming(const Bits& a, const Bits& b) {
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

}  // namespace

TEST_CASE("Encoder matches a hand trace") {
  // Generators 101 and 111, outputs in that order.
  CHECK(conv_encode(Bits{1}) == Bits{1, 1, 0, 1, 1, 1});
  CHECK(conv_encode(Bits{1}, false) == Bits{1, 1});
  // 1,1,0: (1,1) (1,0) (1,0) then tail (1,1) (0,0)... traced below.
  //   u=1 s=00 -> 1,1   s=10
  //   u=1 s=10 -> 1,0   s=11
  //   u=0 s=11 -> 1,0   s=01
  //   u=0 s=01 -> 1,1   s=00
  //   u=0 s=00 -> 0,0
  CHECK(conv_encode(Bits{1, 1, 0}) == Bits{1, 1, 1, 0, 1, 0, 1, 1, 0, 0});
  CHECK(conv_encode(Bits{}).size() == 4);
}

TEST_CASE("Encoder is linear over GF(2)") {
  Rng rng = Rng::stream(1, {});
  for (int t = 0; t < 20; ++t) {
    const Bits a = random_bits(rng, 40), b = random_bits(rng, 40);
    Bits sum(40);
    for (std::size_t i = 0; i < 40; ++i) sum[i] = a[i] ^ b[i];
    const Bits ea = conv_encode(a), eb = conv_encode(b), es = conv_encode(sum);
    for (std::size_t i = 0; i < es.size(); ++i) CHECK(es[i] == (ea[i] ^ eb[i]));
  }
}

TEST_CASE("Viterbi inverts the encoder and corrects isolated errors") {
  Rng rng = Rng::stream(2, {});
  const Bits info = random_bits(rng, 200);
  const Bits coded = conv_encode(info);
  CHECK(viterbi_decode(coded) == info);
  for (std::size_t pos = 0; pos < coded.size(); pos += 7) {
    Bits noisy = coded;
    noisy[pos] ^= 1;
    CHECK(viterbi_decode(noisy) == info);
  }
  CHECK(viterbi_decode(Bits{}).empty());
  CHECK_THROWS_AS(viterbi_decode(Bits{1, 0, 1}), FramingError);
  CHECK_THROWS_AS(viterbi_decode(Bits{1, 1}), FramingError);
}

TEST_CASE("Viterbi is maximum likelihood on short blocks") {
  Rng rng = Rng::stream(3, {});
  for (std::size_t k = 1; k <= 10; ++k)
    for (int rep = 0; rep < 10; ++rep) {
      Bits rx = conv_encode(random_bits(rng, k));
      for (auto& b : rx)
        if (rng.uniform() < 0.15) b ^= 1;
      int best = std::numeric_limits<int>::max();
      for (std::uint32_t w = 0; w < (1u << k); ++w) {
        Bits cand(k);
        for (std::size_t i = 0; i < k; ++i) cand[i] = std::uint8_t((w >> i) & 1u);
        best = std::min(best, hamming(conv_encode(cand), rx));
      }
      CHECK(hamming(conv_encode(viterbi_decode(rx)), rx) == best);
    }
}

TEST_CASE("16-PSK uses a Gray map") {
  for (unsigned m = 0; m < 16; ++m) CHECK(std::popcount(psk16_label(m) ^ psk16_label((m + 1) % 16)) == 1);
  // Label 0000 sits at angle 0; label 0001 one step round the circle.
  const CVector s = psk16_modulate(Bits{0, 0, 0, 0, 0, 0, 0, 1});
  CHECK(std::abs(s(0) - Complex(1.0, 0.0)) < 1e-12);
  CHECK(std::abs(s(1) - std::polar(1.0, 2.0 * std::numbers::pi / 16.0)) < 1e-12);
  CHECK((s.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(psk16_modulate(Bits{1, 0, 1}), FramingError);
}

TEST_CASE("16-PSK round trip and small rotations") {
  Rng rng = Rng::stream(4, {});
  const Bits bits = random_bits(rng, 256);
  const CVector s = psk16_modulate(bits);
  CHECK(psk16_demodulate(s) == bits);
  // Rotations under half a sector are harmless.
  CHECK(psk16_demodulate(s * std::polar(1.0, 0.9 * std::numbers::pi / 16.0)) == bits);
  // A full sector shifts every symbol to a neighbour: one bit per symbol.
  CHECK(hamming(psk16_demodulate(s * std::polar(1.0, 2.0 * std::numbers::pi / 16.0)), bits) == 64);
}
