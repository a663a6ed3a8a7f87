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

#include "cdl/dictlearn.hpp"

using namespace cdl;

namespace {

CMatrix random_unitary(Rng& rng, Index n) {
  Eigen::HouseholderQR<CMatrix> qr(rng.complex_normal_matrix(n, n));
  return qr.householderQ() * CMatrix::Identity(n, n);
}

CMatrix sparse_codes(Rng& rng, Index n, Index m, Index s) {
  CMatrix x = CMatrix::Zero(n, m);
  for (Index j = 0; j < m; ++j)
    for (Index placed = 0; placed < s;) {
      const Index i = Index(rng.uniform() * double(n)) % n;
      if (x(i, j) != Complex(0.0)) continue;
      x(i, j) = rng.complex_normal();
      ++placed;
    }
  return x;
}

bool non_increasing(const std::vector<double>& t) {
  for (std::size_t i = 1; i < t.size(); ++i)
    if (t[i] > t[i - 1] * (1.0 + 1e-9) + 1e-12) return false;
  return true;
}

}  // namespace

TEST_CASE("Objective equals the element-wise sum of squared errors") {
  Rng rng = Rng::stream(1, {});
  const CMatrix h = rng.complex_normal_matrix(4, 7);
  const CMatrix d = rng.complex_normal_matrix(4, 4);
  const CMatrix x = rng.complex_normal_matrix(4, 7);
  double sum = 0.0;
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 7; ++j) {
      Complex e = h(i, j);
      for (Index k = 0; k < 4; ++k) e -= d(i, k) * x(k, j);
      sum += std::norm(e);
    }
  CHECK(std::abs(objective(h, d, x) - sum) < 1e-10 * sum);
}

TEST_CASE("K-SVD fits rank-one data with a single atom") {
  Rng rng = Rng::stream(2, {});
  const CVector u = rng.complex_normal_matrix(5, 1);
  const CMatrix coeff = rng.complex_normal_matrix(1, 30);
  const CMatrix h = u * coeff;
  KsvdOptions opt;
  opt.sparsity = 1;
  const auto r = ksvd(h, dft_dictionary(5).atoms, opt);
  CHECK(r.report.objective_trace.back() <= 1e-20 * h.squaredNorm());
  CHECK(r.report.converged);
  for (Index j = 0; j < 30; ++j) CHECK((r.codes.col(j).array() != Complex(0.0)).count() <= 1);
}

TEST_CASE("K-SVD recovers a planted unitary dictionary") {
  Rng rng = Rng::stream(5, {});
  const Index n = 8;
  const CMatrix truth = random_unitary(rng, n);
  const CMatrix h = truth * sparse_codes(rng, n, 200, 2);
  KsvdOptions opt;
  opt.sparsity = 2;
  const auto r = ksvd(h, dft_dictionary(n).atoms, opt);
  CHECK(r.report.objective_trace.back() <= 1e-6 * h.squaredNorm());
  CHECK(non_increasing(r.report.objective_trace));
  // Every true atom appears among the learned atoms up to a phase.
  const Eigen::MatrixXd overlap = (truth.adjoint() * r.dictionary).cwiseAbs();
  for (Index k = 0; k < n; ++k) CHECK(overlap.row(k).maxCoeff() > 1.0 - 1e-6);
  // Atoms are unit norm and codes respect the sparsity.
  CHECK((r.dictionary.colwise().norm().array() - 1.0).abs().maxCoeff() < 1e-12);
  for (Index j = 0; j < h.cols(); ++j) CHECK((r.codes.col(j).array() != Complex(0.0)).count() <= 2);
}

TEST_CASE("K-SVD objective never increases") {
  for (std::uint64_t t = 0; t < 8; ++t) {
    Rng rng = Rng::stream(6, {t});
    const Index n = 4 + Index(t % 4);
    KsvdOptions opt;
    opt.sparsity = 1 + Index(t % 3);
    opt.tol = 0.0;
    opt.max_iters = 25;
    opt.replace_unused = t % 2 == 1;
    const auto r = ksvd(rng.complex_normal_matrix(n, 60), dft_dictionary(n).atoms, opt);
    CHECK(non_increasing(r.report.objective_trace));
    CHECK(r.report.iterations == int(r.report.objective_trace.size()));
  }
}

TEST_CASE("K-SVD is deterministic and validates its arguments") {
  Rng rng = Rng::stream(7, {});
  const CMatrix h = rng.complex_normal_matrix(6, 40);
  KsvdOptions opt;
  opt.sparsity = 2;
  const auto a = ksvd(h, dft_dictionary(6).atoms, opt);
  const auto b = ksvd(h, dft_dictionary(6).atoms, opt);
  CHECK((a.dictionary - b.dictionary).norm() == 0.0);

  opt.sparsity = 6;
  CHECK_THROWS_AS(ksvd(h, dft_dictionary(6).atoms, opt), ParameterError);
  opt.sparsity = 0;
  CHECK_THROWS_AS(ksvd(h, dft_dictionary(6).atoms, opt), ParameterError);
  opt.sparsity = 2;
  CHECK_THROWS_AS(ksvd(h, dft_dictionary(5).atoms, opt), ShapeError);
}

TEST_CASE("Pooled CDL-KSVD starts from the DFT basis by default") {
  Rng rng = Rng::stream(8, {});
  TrainingSet set;
  set.channels = rng.complex_normal_matrix(6, 50);
  KsvdOptions opt;
  opt.sparsity = 2;
  LearnReport report;
  const auto d = cdl_ksvd(set, opt, &report);
  const CMatrix dft = dft_dictionary(6).atoms;
  const auto direct = ksvd(set.channels, dft, opt);
  CHECK(d.id == "common/ksvd");
  CHECK((d.atoms - direct.dictionary).norm() == 0.0);
  CHECK(report.objective_trace == direct.report.objective_trace);
}

TEST_CASE("Procrustes recovers an exact rotation") {
  Rng rng = Rng::stream(9, {});
  const CMatrix q = random_unitary(rng, 5);
  const CMatrix x = rng.complex_normal_matrix(5, 30);
  bool deficient = true;
  const auto d = cdl_op(q * x, x, &deficient);
  CHECK((d.atoms - q).norm() < 1e-10);
  CHECK_FALSE(deficient);
  CHECK(d.id == "common/op");
}

TEST_CASE("Procrustes beats random unitaries and meets the trace identity") {
  for (std::uint64_t t = 0; t < 10; ++t) {
    Rng rng = Rng::stream(10, {t});
    const CMatrix h = rng.complex_normal_matrix(6, 40);
    const CMatrix x = rng.complex_normal_matrix(6, 40);
    const auto r = procrustes(h, x);
    CHECK((r.dictionary.adjoint() * r.dictionary - CMatrix::Identity(6, 6)).norm() < 1e-10);
    const double obj = (h - r.dictionary * x).squaredNorm();
    const double identity = h.squaredNorm() + x.squaredNorm() - 2.0 * r.singular_values.sum();
    CHECK(std::abs(obj - identity) <= 1e-8 * identity);
    for (int k = 0; k < 100; ++k) CHECK(obj <= (h - random_unitary(rng, 6) * x).squaredNorm());
  }
}

TEST_CASE("Procrustes works on real data and flags rank deficiency") {
  Rng rng = Rng::stream(11, {});
  RMatrix h(4, 20), x(4, 20);
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 20; ++j) {
      h(i, j) = rng.normal();
      x(i, j) = rng.normal();
    }
  const auto r = procrustes(h, x);
  CHECK((r.dictionary.transpose() * r.dictionary - RMatrix::Identity(4, 4)).norm() < 1e-10);

  CMatrix codes = rng.complex_normal_matrix(4, 20);
  codes.row(3).setZero();
  bool deficient = false;
  const auto d = cdl_op(rng.complex_normal_matrix(4, 20), codes, &deficient);
  CHECK(deficient);
  CHECK((d.atoms.adjoint() * d.atoms - CMatrix::Identity(4, 4)).norm() < 1e-10);
  CHECK_THROWS_AS(cdl_op(CMatrix(4, 20), CMatrix(4, 19)), ShapeError);
}
