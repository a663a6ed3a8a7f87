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

#include "cdl/coding.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace cdl {

namespace {

// State = (s1 << 1) | s2 with s1 the most recent input.
constexpr int kStates = 4;

struct Branch {
  int next;
  std::uint8_t out0;  // generator 101
  std::uint8_t out1;  // generator 111
};

constexpr Branch branch(int state, int input) {
  const int s1 = (state >> 1) & 1;
  const int s2 = state & 1;
  return {(input << 1) | s1, std::uint8_t(input ^ s2), std::uint8_t(input ^ s1 ^ s2)};
}

}  // namespace

Bits conv_encode(std::span<const std::uint8_t> bits, bool terminate) {
  Bits out;
  out.reserve(2 * (bits.size() + 2));
  int state = 0;
  auto push = [&](int u) {
    const Branch b = branch(state, u & 1);
    out.push_back(b.out0);
    out.push_back(b.out1);
    state = b.next;
  };
  for (auto u : bits) push(u);
  if (terminate) {
    push(0);
    push(0);
  }
  return out;
}

Bits viterbi_decode(std::span<const std::uint8_t> coded) {
  if (coded.size() % 2 != 0) throw FramingError("viterbi_decode: coded length must be a multiple of 2");
  const std::size_t steps = coded.size() / 2;
  if (steps == 0) return {};
  if (steps < 2) throw FramingError("viterbi_decode: stream too short to hold the tail");
  constexpr int kInf = std::numeric_limits<int>::max() / 2;

  std::array<int, kStates> metric{0, kInf, kInf, kInf};
  // Survivor decisions: predecessor state for each (step, state).
  std::vector<std::array<std::int8_t, kStates>> from(steps);
  std::vector<std::array<std::uint8_t, kStates>> input(steps);

  for (std::size_t t = 0; t < steps; ++t) {
    const int r0 = coded[2 * t] & 1;
    const int r1 = coded[2 * t + 1] & 1;
    std::array<int, kStates> next;
    next.fill(kInf);
    for (int s = 0; s < kStates; ++s) {
      if (metric[std::size_t(s)] >= kInf) continue;
      // Tail steps carry only zero inputs.
      const int max_input = t + 2 >= steps ? 0 : 1;
      for (int u = 0; u <= max_input; ++u) {
        const Branch b = branch(s, u);
        const int m = metric[std::size_t(s)] + (b.out0 != r0) + (b.out1 != r1);
        // Strict comparison keeps the lower-numbered predecessor on ties.
        if (m < next[std::size_t(b.next)]) {
          next[std::size_t(b.next)] = m;
          from[t][std::size_t(b.next)] = std::int8_t(s);
          input[t][std::size_t(b.next)] = std::uint8_t(u);
        }
      }
    }
    metric = next;
  }

  Bits decoded(steps);
  int state = 0;  // terminated trellis ends in state 0
  for (std::size_t t = steps; t-- > 0;) {
    decoded[t] = input[t][std::size_t(state)];
    state = from[t][std::size_t(state)];
  }
  decoded.resize(steps - 2);
  return decoded;
}

CVector psk16_modulate(std::span<const std::uint8_t> bits) {
  if (bits.size() % 4 != 0) throw FramingError("psk16_modulate: bit count must be a multiple of 4");
  // label -> point index
  std::array<unsigned, 16> point{};
  for (unsigned m = 0; m < 16; ++m) point[psk16_label(m)] = m;
  CVector out(Index(bits.size() / 4));
  for (Index k = 0; k < out.size(); ++k) {
    unsigned label = 0;
    for (int b = 0; b < 4; ++b) label = (label << 1) | (bits[std::size_t(4 * k + b)] & 1u);
    out(k) = std::polar(1.0, 2.0 * std::numbers::pi * double(point[label]) / 16.0);
  }
  return out;
}

Bits psk16_demodulate(const CVector& symbols) {
  Bits out;
  out.reserve(std::size_t(symbols.size()) * 4);
  for (Index k = 0; k < symbols.size(); ++k) {
    const double angle = std::arg(symbols(k));
    long m = std::lround(angle / (2.0 * std::numbers::pi / 16.0));
    m = ((m % 16) + 16) % 16;
    const unsigned label = psk16_label(unsigned(m));
    for (int b = 3; b >= 0; --b) out.push_back(std::uint8_t((label >> b) & 1u));
  }
  return out;
}

}  // namespace cdl
