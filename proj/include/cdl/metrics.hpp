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

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cdl/sparsify.hpp"
#include "cdl/types.hpp"

namespace cdl {

struct NmseResult {
  double value = 0.0;
  std::size_t used = 0;
  std::size_t skipped = 0;  // truth vectors with zero norm
};

/// (1/P) sum ||h_hat - h||^2 / ||h||^2. Zero-norm truths are skipped and
/// counted; if every truth is zero the value is NaN.
NmseResult nmse(std::span<const CVector> estimates, std::span<const CVector> truths);

struct SweepEntry {
  std::string dictionary;  // label, e.g. "DFT", "CDL-OP"
  Index sparsity = 0;
  double nmse = 0.0;
};

struct NamedDictionary {
  std::string label;
  const Dictionary* dictionary = nullptr;
};

/// Compress and reconstruct every test vector with every dictionary at every
/// sparsity. Rows are ordered dictionary-major, then sparsity.
std::vector<SweepEntry> nmse_sweep(std::span<const NamedDictionary> dictionaries, std::span<const CVector> tests,
                                   std::span<const Index> sparsities, const MeasurementMatrix& phi);

}  // namespace cdl
