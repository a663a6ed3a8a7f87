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

#include "cdl/accounting.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "cdl/types.hpp"

namespace cdl {

std::int64_t memory_savings(std::int64_t users, std::int64_t subcarriers, std::int64_t vector_length) {
  if (users < 0 || subcarriers < 1 || vector_length < 0) throw ParameterError("memory_savings: bad dimensions");
  return users * (subcarriers - 1) * vector_length * vector_length;
}

std::int64_t memory_savings(const SystemConfig& config) {
  return memory_savings(config.users, config.subcarriers, config.vector_length());
}

DictionaryFeedback dictionary_feedback(std::int64_t subcarriers, std::int64_t vector_length) {
  if (subcarriers < 1 || vector_length < 1) throw ParameterError("dictionary_feedback: bad dimensions");
  DictionaryFeedback f;
  f.common = vector_length * vector_length;
  f.per_subcarrier = subcarriers * f.common;
  f.saved = f.per_subcarrier - f.common;
  f.reduction_factor = Rational(f.common, f.per_subcarrier);
  return f;
}

CsiFeedback csi_feedback_ratio(std::int64_t subcarriers, std::int64_t vector_length, std::int64_t frames,
                               Rational compression_factor) {
  if (frames < 1) throw ParameterError("csi_feedback_ratio: N' must be at least 1");
  if (compression_factor < Rational(1)) throw ParameterError("csi_feedback_ratio: g must be at least 1");
  if (subcarriers < 1 || vector_length < 1) throw ParameterError("csi_feedback_ratio: bad dimensions");
  CsiFeedback f;
  const std::int64_t per_frame = subcarriers * vector_length;
  f.uncompressed = Rational(frames * per_frame);
  f.compressed = Rational(vector_length * vector_length) + Rational(frames * per_frame) / compression_factor;
  f.ratio = f.compressed / f.uncompressed;
  return f;
}

std::string to_string(FlopMethod method) {
  switch (method) {
    case FlopMethod::CdlOp: return "CDL-OP";
    case FlopMethod::CdlKsvdMin: return "CDL-KSVD (min)";
    case FlopMethod::CdlKsvdMax: return "CDL-KSVD (max)";
  }
  return "?";
}

std::string to_string(SvdVariant variant) { return variant == SvdVariant::GolubReinsch ? "GR-SVD" : "Chan-SVD"; }

std::int64_t flops_estimate(FlopMethod method, SvdVariant variant, std::int64_t n, std::int64_t training_columns,
                            std::int64_t nonzeros) {
  if (n < 1) throw ParameterError("flops_estimate: n must be positive");
  if (nonzeros < 0 || nonzeros > training_columns)
    throw ParameterError("flops_estimate: N_c' must lie in [0, M']");
  const bool gr = variant == SvdVariant::GolubReinsch;
  if (method == FlopMethod::CdlOp) return (gr ? 21 : 26) * n * n * n;
  const std::int64_t m = nonzeros;
  const std::int64_t column = gr ? 14 * n * m * m + 9 * m * m * m : 6 * n * m * m + 20 * m * m * m;
  return method == FlopMethod::CdlKsvdMin ? column : n * column;
}

std::string format_significant(double value, int digits) {
  if (value == 0.0) return "0";
  const int exponent = int(std::floor(std::log10(std::abs(value))));
  const double scale = std::pow(10.0, double(digits - 1 - exponent));
  const double rounded = std::round(value * scale) / scale;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, rounded);
  return buf;
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

void write_flops_table(std::ostream& out, std::int64_t n, std::int64_t training_columns, std::int64_t nonzeros) {
  out << "method,svd,n,training_columns,nonzeros,flops\n";
  for (auto method : {FlopMethod::CdlOp, FlopMethod::CdlKsvdMin, FlopMethod::CdlKsvdMax})
    for (auto variant : {SvdVariant::GolubReinsch, SvdVariant::Chan}) {
      out << to_string(method) << ',' << to_string(variant) << ',' << n << ',' << training_columns << ','
          << nonzeros << ',' << flops_estimate(method, variant, n, training_columns, nonzeros) << '\n';
    }
}

void write_dictionary_feedback_table(std::ostream& out) {
  out << "n_t,n_r,n_c,t_ksvd,t_com,t_saved,upsilon\n";
  const std::int64_t n_t = 64, n_r = 1;
  for (std::int64_t n_c : {4, 32}) {
    const auto f = dictionary_feedback(n_c, n_t * n_r);
    out << n_t << ',' << n_r << ',' << n_c << ',' << f.per_subcarrier << ',' << f.common << ',' << f.saved << ','
        << to_string(f.reduction_factor) << '\n';
  }
}

void write_csi_feedback_table(std::ostream& out, std::int64_t frames) {
  out << "g,n_c,n_t,n_r,frames,gamma_u,gamma_c,gamma,gamma_exact\n";
  struct Row {
    std::int64_t g, n_c, n_t, n_r;
  };
  for (const Row& row : {Row{2, 32, 64, 1}, Row{2, 64, 64, 2}, Row{4, 32, 64, 1}, Row{4, 64, 64, 2}}) {
    const auto f = csi_feedback_ratio(row.n_c, row.n_t * row.n_r, frames, Rational(row.g));
    out << row.g << ',' << row.n_c << ',' << row.n_t << ',' << row.n_r << ',' << frames << ','
        << to_string(f.uncompressed) << ',' << to_string(f.compressed) << ',' << format_fixed(to_double(f.ratio), 3)
        << ',' << to_string(f.ratio) << '\n';
  }
}

void write_memory_table(std::ostream& out, const SystemConfig& config) {
  out << "users,n_c,n_t,n_r,delta_saved\n";
  out << config.users << ',' << config.subcarriers << ',' << config.tx_antennas << ',' << config.rx_antennas << ','
      << memory_savings(config) << '\n';
}

}  // namespace cdl
