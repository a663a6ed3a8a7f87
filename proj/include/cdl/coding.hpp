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
#include <span>
#include <vector>

#include "cdl/types.hpp"

namespace cdl {

using Bits = std::vector<std::uint8_t>;

/// Rate-1/2, constraint length 3 feedforward encoder with generators
/// (101, 111) = octal (5, 7). Each input bit yields the pair
/// (u ^ s2, u ^ s1 ^ s2), where s1 is the previous input and s2 the one
/// before. Two zero tail bits are appended when `terminate` is set.
Bits conv_encode(std::span<const std::uint8_t> bits, bool terminate = true);

/// Hard-decision Viterbi decoder for conv_encode's terminated output.
/// Returns the information bits (tail removed). Odd length raises
/// FramingError.
Bits viterbi_decode(std::span<const std::uint8_t> coded);

/// Gray-mapped unit-energy 16-PSK. Four bits per symbol, first bit is the
/// most significant of the label; point m sits at angle 2 pi m / 16 and
/// carries label m ^ (m >> 1).
CVector psk16_modulate(std::span<const std::uint8_t> bits);
Bits psk16_demodulate(const CVector& symbols);

/// Label of constellation point m.
inline unsigned psk16_label(unsigned m) { return m ^ (m >> 1); }

}  // namespace cdl
