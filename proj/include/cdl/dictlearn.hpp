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

#include <cmath>
#include <vector>

#include "cdl/sparsify.hpp"
#include "cdl/types.hpp"

namespace cdl {

/// ||H - Psi X||_F^2
template <typename DH, typename DP, typename DX>
double objective(const Eigen::MatrixBase<DH>& training, const Eigen::MatrixBase<DP>& dict,
                 const Eigen::MatrixBase<DX>& codes) {
  if (dict.rows() != training.rows() || dict.cols() != codes.rows() || codes.cols() != training.cols())
    throw ShapeError("objective: shape mismatch between training set, dictionary and codes");
  return double((training - dict * codes).squaredNorm());
}

/// Rotates v so that its largest-magnitude entry is real and nonnegative.
/// Returns the applied unit-modulus factor.
template <typename Derived>
typename Derived::Scalar canonicalize_phase(Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  const Scalar pivot = v(arg);
  const auto mag = std::abs(pivot);
  if (mag == 0) return Scalar(1);
  const Scalar factor = Eigen::numext::conj(pivot) / mag;
  v *= factor;
  return factor;
}

struct LearnReport {
  std::vector<double> objective_trace;  // after each full iteration
  int iterations = 0;
  int atoms_replaced = 0;
  bool converged = false;
};

struct KsvdOptions {
  Index sparsity = 1;
  int max_iters = 50;
  double tol = 1e-4;  // relative objective decrease
  // Re-seed atoms unused for three consecutive iterations with the
  // worst-represented training column. Off by default.
  bool replace_unused = false;
};

template <typename Scalar>
struct KsvdResult {
  Matrix<Scalar> dictionary;
  Matrix<Scalar> codes;
  LearnReport report;
};

namespace detail {

template <typename Scalar>
Matrix<Scalar> sparse_code_all(const Matrix<Scalar>& training, const Matrix<Scalar>& dict, Index sparsity,
                               const Matrix<Scalar>* previous) {
  Matrix<Scalar> codes = Matrix<Scalar>::Zero(dict.cols(), training.cols());
  for (Index j = 0; j < training.cols(); ++j) {
    const auto code = omp(dict, training.col(j), sparsity).dense();
    // Keep the previous code when OMP's greedy choice is worse for the updated
    // dictionary; this keeps the objective monotone.
    if (previous != nullptr) {
      const double fresh = double((training.col(j) - dict * code).squaredNorm());
      const double kept = double((training.col(j) - dict * previous->col(j)).squaredNorm());
      if (kept < fresh) {
        codes.col(j) = previous->col(j);
        continue;
      }
    }
    codes.col(j) = code;
  }
  return codes;
}

}  // namespace detail

/// K-SVD: alternate OMP sparse coding of every training column with a
/// rank-1 update of each used atom against its restricted residual.
///
/// Atoms that no column uses are left as they are unless
/// options.replace_unused is set. The dominant singular pair is
/// phase-canonicalized so results are reproducible.
template <typename DH, typename DP>
KsvdResult<typename DH::Scalar> ksvd(const Eigen::MatrixBase<DH>& training, const Eigen::MatrixBase<DP>& init,
                                     const KsvdOptions& options) {
  using Scalar = typename DH::Scalar;
  const Index n = training.rows();
  if (init.rows() != n || init.cols() != n) throw ShapeError("ksvd: initial dictionary must be n x n");
  if (options.sparsity < 1 || options.sparsity >= n) throw ParameterError("ksvd: sparsity must satisfy 1 <= S < n");
  if (options.max_iters < 1) throw ParameterError("ksvd: max_iters must be positive");

  const Matrix<Scalar> data = training;
  KsvdResult<Scalar> out;
  out.dictionary = init;
  for (Index k = 0; k < n; ++k) {
    const auto norm = out.dictionary.col(k).norm();
    if (norm == 0) throw ParameterError("ksvd: initial dictionary has a zero column");
    out.dictionary.col(k) /= norm;
  }
  const double data_energy = double(data.squaredNorm());
  std::vector<int> idle(std::size_t(n), 0);

  for (int iter = 0; iter < options.max_iters; ++iter) {
    out.codes = detail::sparse_code_all<Scalar>(data, out.dictionary, options.sparsity,
                                                iter == 0 ? nullptr : &out.codes);
    Matrix<Scalar> residual = data - out.dictionary * out.codes;

    for (Index k = 0; k < n; ++k) {
      std::vector<Index> users;
      for (Index j = 0; j < data.cols(); ++j)
        if (out.codes(k, j) != Scalar(0)) users.push_back(j);

      if (users.empty()) {
        ++idle[std::size_t(k)];
        if (options.replace_unused && idle[std::size_t(k)] >= 3 && data_energy > 0) {
          Index worst = 0;
          residual.colwise().squaredNorm().maxCoeff(&worst);
          const auto norm = data.col(worst).norm();
          if (norm > 0) {
            out.dictionary.col(k) = data.col(worst) / norm;
            ++out.report.atoms_replaced;
          }
          idle[std::size_t(k)] = 0;
        }
        continue;
      }
      idle[std::size_t(k)] = 0;

      const Index m = Index(users.size());
      Matrix<Scalar> restricted(n, m);
      for (Index c = 0; c < m; ++c) {
        const Index j = users[std::size_t(c)];
        restricted.col(c) = residual.col(j) + out.dictionary.col(k) * out.codes(k, j);
      }
      Eigen::BDCSVD<Matrix<Scalar>> svd(restricted, Eigen::ComputeThinU | Eigen::ComputeThinV);
      Vector<Scalar> atom = svd.matrixU().col(0);
      Vector<Scalar> right = svd.matrixV().col(0);
      const auto sigma = svd.singularValues()(0);
      if (sigma == 0) continue;
      const Scalar phase = canonicalize_phase(atom);
      right *= phase;
      out.dictionary.col(k) = atom;
      for (Index c = 0; c < m; ++c) {
        const Index j = users[std::size_t(c)];
        const Scalar value = sigma * Eigen::numext::conj(right(c));
        out.codes(k, j) = value;
        residual.col(j) = restricted.col(c) - atom * value;
      }
    }

    const double obj = double(residual.squaredNorm());
    out.report.objective_trace.push_back(obj);
    out.report.iterations = iter + 1;
    if (obj <= 1e-28 * std::max(data_energy, 1e-300)) {
      out.report.converged = true;
      break;
    }
    if (out.report.objective_trace.size() >= 2) {
      const double prev = out.report.objective_trace[out.report.objective_trace.size() - 2];
      if (prev > 0 && (prev - obj) / prev < options.tol) {
        out.report.converged = true;
        break;
      }
    }
  }
  return out;
}

/// Columns ordered user-major, then subcarrier, then frame.
struct TrainingSet {
  enum class Provenance { TrueChannels, ReconstructedAtBs };

  CMatrix channels;  // n x M'
  CMatrix codes;     // n x M', at most S nonzeros per column (may be empty)
  Provenance provenance = Provenance::TrueChannels;
};

/// K-SVD on the pooled training matrix. The initial dictionary defaults to
/// the DFT basis.
Dictionary cdl_ksvd(const TrainingSet& training, const KsvdOptions& options, LearnReport* report = nullptr,
                    const CMatrix* init = nullptr);

template <typename Scalar>
struct ProcrustesResult {
  Matrix<Scalar> dictionary;
  Vector<RealOf<Scalar>> singular_values;
  bool rank_deficient = false;
};

/// Unitary minimizer of ||H - Psi X||_F: with C = X H^H = U S V^H the
/// solution is Psi = V U^H.
template <typename DH, typename DX>
ProcrustesResult<typename DH::Scalar> procrustes(const Eigen::MatrixBase<DH>& training,
                                                 const Eigen::MatrixBase<DX>& codes) {
  using Scalar = typename DH::Scalar;
  if (training.rows() != codes.rows() || training.cols() != codes.cols())
    throw ShapeError("cdl_op: training set and codes must have the same shape");
  const Matrix<Scalar> c = codes * training.adjoint();
  Eigen::JacobiSVD<Matrix<Scalar>> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix<Scalar> u = svd.matrixU();
  Matrix<Scalar> v = svd.matrixV();
  for (Index k = 0; k < u.cols(); ++k) {
    auto col = u.col(k);
    const Scalar phase = canonicalize_phase(col);
    v.col(k) *= phase;
  }
  ProcrustesResult<Scalar> out;
  out.singular_values = svd.singularValues();
  const auto& sv = out.singular_values;
  out.rank_deficient = sv.size() == 0 || sv(sv.size() - 1) <= 1e-12 * std::max(sv(0), RealOf<Scalar>(1e-300));
  out.dictionary = v * u.adjoint();
  return out;
}

Dictionary cdl_op(const CMatrix& training, const CMatrix& codes, bool* rank_deficient = nullptr);

}  // namespace cdl
