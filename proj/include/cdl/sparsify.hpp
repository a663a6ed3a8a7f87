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

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "cdl/rng.hpp"
#include "cdl/types.hpp"

namespace cdl {

enum class DictionaryKind { Dft, Ksvd, Common };
enum class CommonMethod { Ksvd, Op };

/// Square sparsifying basis with unit-norm columns.
struct Dictionary {
  CMatrix atoms;
  DictionaryKind kind = DictionaryKind::Dft;
  CommonMethod method = CommonMethod::Op;  // meaningful for kind == Common
  int user = -1;                           // meaningful for kind == Ksvd
  int subcarrier = -1;
  std::string id;

  Index size() const { return atoms.rows(); }
};

/// Unitary DFT basis, Psi[u, v] = exp(-j 2 pi u v / n) / sqrt(n).
Dictionary dft_dictionary(Index n);

Dictionary ksvd_dictionary(CMatrix atoms, int user, int subcarrier);
Dictionary common_dictionary(CMatrix atoms, CommonMethod method);
std::string to_string(DictionaryKind kind);
std::string to_string(CommonMethod method);

/// Gaussian sensing matrix with i.i.d. CN(0, 1/N_g) entries.
struct MeasurementMatrix {
  CMatrix phi;
  std::uint64_t seed = 0;

  Index rows() const { return phi.rows(); }
  Index cols() const { return phi.cols(); }
};

/// When sparsity is given, rows must exceed 2 * sparsity.
MeasurementMatrix gaussian_measurement(std::uint64_t seed, Index rows, Index n,
                                       std::optional<Index> sparsity = std::nullopt);

/// Theta = Phi Psi, keyed by dictionary id. Not thread safe; one per owner.
class SensingCache {
 public:
  const CMatrix& get(const MeasurementMatrix& phi, const Dictionary& dict);
  std::size_t size() const { return cache_.size(); }

 private:
  std::map<std::pair<std::uint64_t, std::string>, CMatrix> cache_;
};

template <typename Scalar>
struct SparseVector {
  std::vector<Index> support;  // strictly increasing
  Vector<Scalar> values;       // aligned with support
  Index length = 0;
  double residual_norm = 0.0;
  bool degenerate = false;

  Vector<Scalar> dense() const {
    Vector<Scalar> out = Vector<Scalar>::Zero(length);
    for (std::size_t i = 0; i < support.size(); ++i) out(support[i]) = values(Index(i));
    return out;
  }
};

struct OmpOptions {
  Index sparsity = 1;
  double residual_tol = 1e-6;
  double rank_tol = 1e-10;
};

/// Orthogonal matching pursuit.
///
/// Each iteration picks the column with the largest normalized correlation
/// |<r, a_j>| / ||a_j|| (ties to the lowest index), re-solves least squares on
/// the whole support and updates the residual. Stops at `sparsity` atoms or
/// when ||r|| <= residual_tol * ||y||. A numerically rank-deficient support is
/// solved by minimum-norm pseudo-inverse and marked degenerate.
template <typename DerivedA, typename DerivedY>
SparseVector<typename DerivedA::Scalar> omp(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedY>& y,
                                            const OmpOptions& options) {
  using Scalar = typename DerivedA::Scalar;
  using Real = RealOf<Scalar>;
  if (y.size() != a.rows()) throw ShapeError("omp: observation length does not match sensing matrix rows");
  if (options.sparsity < 1) throw ParameterError("omp: sparsity must be at least 1");

  const Index n = a.cols();
  Vector<Real> col_norms = a.colwise().norm().transpose();
  if (n == 0 || col_norms.minCoeff() <= Real(0)) throw ParameterError("omp: sensing matrix has a zero column");

  SparseVector<Scalar> result;
  result.length = n;
  const Vector<Scalar> obs = y;
  const Real y_norm = obs.norm();
  Vector<Scalar> residual = obs;
  result.residual_norm = double(y_norm);
  if (y_norm == Real(0)) {
    result.values.resize(0);
    return result;
  }

  const Index max_atoms = std::min(options.sparsity, n);
  std::vector<Index> chosen;
  std::vector<char> taken(std::size_t(n), 0);
  Vector<Scalar> coeffs;
  Matrix<Scalar> sub(a.rows(), 0);

  while (Index(chosen.size()) < max_atoms) {
    if (double(residual.norm()) <= options.residual_tol * double(y_norm)) break;
    const Vector<Scalar> corr = a.adjoint() * residual;
    Index best = -1;
    Real best_score = -1;
    for (Index j = 0; j < n; ++j) {
      if (taken[std::size_t(j)]) continue;
      const Real score = std::abs(corr(j)) / col_norms(j);
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    if (best < 0) break;
    taken[std::size_t(best)] = 1;
    chosen.push_back(best);
    sub.conservativeResize(Eigen::NoChange, Index(chosen.size()));
    sub.col(sub.cols() - 1) = a.col(best);

    Eigen::ColPivHouseholderQR<Matrix<Scalar>> qr(sub);
    qr.setThreshold(Real(options.rank_tol));
    if (qr.rank() == sub.cols()) {
      coeffs = qr.solve(obs);
    } else {
      result.degenerate = true;
      Eigen::CompleteOrthogonalDecomposition<Matrix<Scalar>> cod(sub);
      cod.setThreshold(Real(options.rank_tol));
      coeffs = cod.solve(obs);
    }
    residual = obs - sub * coeffs;
  }

  std::vector<std::size_t> order(chosen.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return chosen[l] < chosen[r]; });
  result.support.resize(chosen.size());
  result.values.resize(Index(chosen.size()));
  for (std::size_t i = 0; i < order.size(); ++i) {
    result.support[i] = chosen[order[i]];
    result.values(Index(i)) = coeffs(Index(order[i]));
  }
  result.residual_norm = double(residual.norm());
  return result;
}

template <typename DerivedA, typename DerivedY>
SparseVector<typename DerivedA::Scalar> omp(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedY>& y,
                                            Index sparsity, double residual_tol = 1e-6) {
  OmpOptions options;
  options.sparsity = sparsity;
  options.residual_tol = residual_tol;
  return omp(a, y, options);
}

/// Sparse representation of h in the basis itself (h ~ Psi x).
inline SparseVector<Complex> sparse_code(const CVector& h, const Dictionary& dict, Index sparsity) {
  return omp(dict.atoms, h, sparsity);
}

/// What a UE sends uplink for one subcarrier of one frame.
struct CompressedFeedback {
  CVector values;
  std::string dictionary_id;
  std::uint64_t measurement_seed = 0;
  int user = 0;
  int subcarrier = 0;
  int frame = 0;
};

/// h_c = Phi h. Tags the feedback with the dictionary in force.
CompressedFeedback compress(const CVector& h, const MeasurementMatrix& phi, const Dictionary& dict);

struct Reconstruction {
  CVector channel;               // Psi * codes
  SparseVector<Complex> codes;  // sparse coefficients in Psi
};

/// OMP on Theta = Phi Psi, then maps the coefficients back through Psi.
Reconstruction reconstruct(const CompressedFeedback& fb, const MeasurementMatrix& phi, const Dictionary& dict,
                           Index sparsity, SensingCache* cache = nullptr);

}  // namespace cdl
