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

#include "cdl/dictlearn.hpp"

namespace cdl {

Dictionary cdl_ksvd(const TrainingSet& training, const KsvdOptions& options, LearnReport* report, const CMatrix* init) {
  const Index n = training.channels.rows();
  const CMatrix start = init != nullptr ? *init : dft_dictionary(n).atoms;
  auto result = ksvd(training.channels, start, options);
  if (report != nullptr) *report = result.report;
  return common_dictionary(std::move(result.dictionary), CommonMethod::Ksvd);
}

Dictionary cdl_op(const CMatrix& training, const CMatrix& codes, bool* rank_deficient) {
  auto result = procrustes(training, codes);
  if (rank_deficient != nullptr) *rank_deficient = result.rank_deficient;
  return common_dictionary(std::move(result.dictionary), CommonMethod::Op);
}

}  // namespace cdl
