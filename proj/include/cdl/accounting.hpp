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
#include <string>

#include <boost/rational.hpp>

#include "cdl/config.hpp"

namespace cdl {

using Rational = boost::rational<std::int64_t>;

/// Elements saved by storing one common dictionary instead of N_c
/// per-subcarrier dictionaries, for every user: K (N_c - 1) (N_r N_t)^2.
std::int64_t memory_savings(std::int64_t users, std::int64_t subcarriers, std::int64_t vector_length);
std::int64_t memory_savings(const SystemConfig& config);

/// Single-UE uplink dictionary traffic.
struct DictionaryFeedback {
  std::int64_t per_subcarrier = 0;  // N_c (N_r N_t)^2
  std::int64_t common = 0;          // (N_r N_t)^2
  std::int64_t saved = 0;           // difference
  Rational reduction_factor;        // common / per_subcarrier = 1 / N_c
};

DictionaryFeedback dictionary_feedback(std::int64_t subcarriers, std::int64_t vector_length);

/// CSI feedback over N' frames with and without a dictionary-based codec.
struct CsiFeedback {
  Rational uncompressed;  // N' N_c N_r N_t
  Rational compressed;    // (N_r N_t)^2 + N' N_c N_r N_t / g
  Rational ratio;         // compressed / uncompressed
};

CsiFeedback csi_feedback_ratio(std::int64_t subcarriers, std::int64_t vector_length, std::int64_t frames,
                               Rational compression_factor);

enum class FlopMethod { CdlOp, CdlKsvdMin, CdlKsvdMax };
enum class SvdVariant { GolubReinsch, Chan };

std::string to_string(FlopMethod method);
std::string to_string(SvdVariant variant);

/// Dictionary-learning cost in floating point operations.
///   CDL-OP            full SVD of an n x n matrix: 21 n^3 (GR) or 26 n^3 (Chan)
///   CDL-KSVD (min)    one partial SVD of an n x N_c' matrix:
///                     14 n N_c'^2 + 9 N_c'^3 (GR) or 6 n N_c'^2 + 20 N_c'^3 (Chan)
///   CDL-KSVD (max)    n such updates
/// `nonzeros` is N_c', the number of training columns using the atom; it must
/// lie in [0, training_columns].
std::int64_t flops_estimate(FlopMethod method, SvdVariant variant, std::int64_t n, std::int64_t training_columns,
                            std::int64_t nonzeros);

/// Rounds to `digits` significant digits and prints in the compact form used
/// by the report tables (5.505e+06 style for large values).
std::string format_significant(double value, int digits);

/// Plain decimal rounding to `decimals` places.
std::string format_fixed(double value, int decimals);

inline double to_double(const Rational& r) { return double(r.numerator()) / double(r.denominator()); }
std::string to_string(const Rational& r);

/// CSV tables. Columns:
///   flops:              method,svd,n,training_columns,nonzeros,flops
///   dictionary feedback: n_t,n_r,n_c,t_ksvd,t_com,t_saved,upsilon
///   csi feedback:       g,n_c,n_t,n_r,frames,gamma_u,gamma_c,gamma,gamma_exact
void write_flops_table(std::ostream& out, std::int64_t n, std::int64_t training_columns, std::int64_t nonzeros);
void write_dictionary_feedback_table(std::ostream& out);
void write_csi_feedback_table(std::ostream& out, std::int64_t frames);
void write_memory_table(std::ostream& out, const SystemConfig& config);

}  // namespace cdl
