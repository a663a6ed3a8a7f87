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

#include "cdl/sparsify.hpp"

#include <cmath>
#include <numbers>

namespace cdl {

Dictionary dft_dictionary(Index n) {
  if (n < 1) throw ParameterError("dft_dictionary: n must be at least 1");
  Dictionary d;
  d.atoms.resize(n, n);
  const double scale = 1.0 / std::sqrt(double(n));
  for (Index v = 0; v < n; ++v)
    for (Index u = 0; u < n; ++u) {
      const double angle = -2.0 * std::numbers::pi * double((u * v) % n) / double(n);
      d.atoms(u, v) = std::polar(scale, angle);
    }
  d.kind = DictionaryKind::Dft;
  d.id = "dft";
  return d;
}

Dictionary ksvd_dictionary(CMatrix atoms, int user, int subcarrier) {
  Dictionary d;
  d.atoms = std::move(atoms);
  d.kind = DictionaryKind::Ksvd;
  d.user = user;
  d.subcarrier = subcarrier;
  d.id = "ksvd/u" + std::to_string(user + 1) + "/sc" + std::to_string(subcarrier + 1);
  return d;
}

Dictionary common_dictionary(CMatrix atoms, CommonMethod method) {
  Dictionary d;
  d.atoms = std::move(atoms);
  d.kind = DictionaryKind::Common;
  d.method = method;
  d.id = method == CommonMethod::Op ? "common/op" : "common/ksvd";
  return d;
}

std::string to_string(DictionaryKind kind) {
  switch (kind) {
    case DictionaryKind::Dft: return "dft";
    case DictionaryKind::Ksvd: return "ksvd";
    case DictionaryKind::Common: return "common";
  }
  return "?";
}

std::string to_string(CommonMethod method) { return method == CommonMethod::Op ? "op" : "ksvd"; }

MeasurementMatrix gaussian_measurement(std::uint64_t seed, Index rows, Index n, std::optional<Index> sparsity) {
  if (rows < 1 || n < 1) throw ParameterError("gaussian_measurement: dimensions must be positive");
  if (rows >= n) throw ParameterError("gaussian_measurement: N_g must be smaller than n");
  if (sparsity && rows <= 2 * *sparsity)
    throw ParameterError("gaussian_measurement: N_g must satisfy N_g > 2S for sparse recovery");
  Rng rng(seed);
  MeasurementMatrix m;
  m.seed = seed;
  m.phi = rng.complex_normal_matrix(rows, n, 1.0 / double(rows));
  return m;
}

const CMatrix& SensingCache::get(const MeasurementMatrix& phi, const Dictionary& dict) {
  auto key = std::make_pair(phi.seed, dict.id);
  auto it = cache_.find(key);
  if (it == cache_.end()) it = cache_.emplace(std::move(key), phi.phi * dict.atoms).first;
  return it->second;
}

CompressedFeedback compress(const CVector& h, const MeasurementMatrix& phi, const Dictionary& dict) {
  if (h.size() != phi.cols()) throw ShapeError("compress: channel vector length does not match Phi");
  CompressedFeedback fb;
  fb.values = phi.phi * h;
  fb.dictionary_id = dict.id;
  fb.measurement_seed = phi.seed;
  return fb;
}

Reconstruction reconstruct(const CompressedFeedback& fb, const MeasurementMatrix& phi, const Dictionary& dict,
                           Index sparsity, SensingCache* cache) {
  if (fb.dictionary_id != dict.id)
    throw ProtocolError("reconstruct: feedback was compressed for '" + fb.dictionary_id + "' but BS holds '" +
                        dict.id + "'");
  if (fb.measurement_seed != phi.seed) throw ProtocolError("reconstruct: measurement matrix seed mismatch");
  if (fb.values.size() != phi.rows()) throw ShapeError("reconstruct: feedback length does not match Phi");
  Reconstruction out;
  if (cache != nullptr) {
    out.codes = omp(cache->get(phi, dict), fb.values, sparsity);
  } else {
    const CMatrix theta = phi.phi * dict.atoms;
    out.codes = omp(theta, fb.values, sparsity);
  }
  CVector h = CVector::Zero(dict.size());
  for (std::size_t i = 0; i < out.codes.support.size(); ++i)
    h += dict.atoms.col(out.codes.support[i]) * out.codes.values(Index(i));
  out.channel = std::move(h);
  return out;
}

}  // namespace cdl
