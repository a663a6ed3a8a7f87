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

#include "cdl/metrics.hpp"

#include <limits>

namespace cdl {

NmseResult nmse(std::span<const CVector> estimates, std::span<const CVector> truths) {
  if (estimates.size() != truths.size()) throw ShapeError("nmse: estimate and truth lists differ in length");
  if (truths.empty()) throw ParameterError("nmse: need at least one vector");
  NmseResult r;
  double sum = 0.0;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    if (estimates[i].size() != truths[i].size()) throw ShapeError("nmse: vector length mismatch");
    const double den = truths[i].squaredNorm();
    if (den == 0.0) {
      ++r.skipped;
      continue;
    }
    sum += (estimates[i] - truths[i]).squaredNorm() / den;
    ++r.used;
  }
  r.value = r.used == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / double(r.used);
  return r;
}

std::vector<SweepEntry> nmse_sweep(std::span<const NamedDictionary> dictionaries, std::span<const CVector> tests,
                                   std::span<const Index> sparsities, const MeasurementMatrix& phi) {
  std::vector<SweepEntry> out;
  SensingCache cache;
  for (const auto& named : dictionaries) {
    if (named.dictionary == nullptr || named.dictionary->size() != phi.cols())
      throw ShapeError("nmse_sweep: dictionary size does not match the measurement matrix");
    for (Index s : sparsities) {
      std::vector<CVector> estimates;
      estimates.reserve(tests.size());
      for (const auto& h : tests) {
        const auto fb = compress(h, phi, *named.dictionary);
        estimates.push_back(reconstruct(fb, phi, *named.dictionary, s, &cache).channel);
      }
      out.push_back({named.label, s, nmse(estimates, tests).value});
    }
  }
  return out;
}

}  // namespace cdl
