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

#include <vector>

#include "cdl/config.hpp"
#include "cdl/rng.hpp"
#include "cdl/types.hpp"

namespace cdl {

/// Jakes spatial correlation of a uniform linear array,
/// r_uv = J0(2 pi |u - v| spacing / wavelength).
RMatrix jakes_correlation(Index count, double spacing, double wavelength);

/// Principal square root of a Hermitian PSD matrix. Eigenvalues below
/// -tol * lambda_max raise NotPsdError; the remaining negative ones are
/// clipped to zero.
template <typename Derived>
Matrix<typename Derived::Scalar> psd_sqrt(const Eigen::MatrixBase<Derived>& r, double tol = 1e-10) {
  using Scalar = typename Derived::Scalar;
  if (r.rows() != r.cols()) throw ShapeError("psd_sqrt: matrix is not square");
  Matrix<Scalar> herm = (r + r.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig(herm);
  auto values = eig.eigenvalues();
  const double largest = values.cwiseAbs().maxCoeff();
  for (Index i = 0; i < values.size(); ++i) {
    if (values(i) < -tol * largest) throw NotPsdError("psd_sqrt: matrix is not positive semidefinite");
    values(i) = values(i) > 0 ? std::sqrt(values(i)) : 0.0;
  }
  const auto& u = eig.eigenvectors();
  return u * values.asDiagonal() * u.adjoint();
}

/// Kronecker correlation model shared by all taps: R_BS for the base station
/// array and one R_UE per user, with their square roots.
struct CorrelationModel {
  RMatrix bs;
  RMatrix bs_sqrt;
  std::vector<RMatrix> ue;
  std::vector<RMatrix> ue_sqrt;

  static CorrelationModel jakes(const SystemConfig& config);
  static CorrelationModel identity(const SystemConfig& config);
};

using TapSet = std::vector<CMatrix>;

/// L independent taps, each (1/sqrt(tr R_UE)) R_UE^1/2 H R_BS^1/2 with H
/// i.i.d. CN(0, 1).
TapSet draw_correlated_taps(Rng& rng, const SystemConfig& config, int user, const CorrelationModel& corr);

/// H_l = sum_i taps[i] exp(-j 2 pi i l / N_c), l = 0 .. N_c - 1. The first
/// returned matrix is the first subcarrier.
std::vector<CMatrix> taps_to_fdchtf(const TapSet& taps, Index subcarriers);

/// One Gauss-Markov step: rho * taps + sqrt(1 - rho^2) * innovation.
TapSet evolve_frame(const TapSet& taps, double rho, const TapSet& innovation);

/// Maximum Doppler shift in Hz for a speed in km/h.
double doppler_frequency(double velocity_kmh, double carrier_freq);

/// Clarke autocorrelation J0(2 pi f_d tau) between consecutive frames.
double temporal_correlation(double doppler_hz, double frame_interval);

/// Column-stacking vec().
template <typename Derived>
Vector<typename Derived::Scalar> vectorize(const Eigen::MatrixBase<Derived>& m) {
  Matrix<typename Derived::Scalar> dense = m;
  return Eigen::Map<const Vector<typename Derived::Scalar>>(dense.data(), dense.size());
}

template <typename Derived>
Matrix<typename Derived::Scalar> devectorize(const Eigen::MatrixBase<Derived>& v, Index rows, Index cols) {
  if (v.size() != rows * cols) throw ShapeError("devectorize: length does not match rows * cols");
  Vector<typename Derived::Scalar> dense = v;
  return Eigen::Map<const Matrix<typename Derived::Scalar>>(dense.data(), rows, cols);
}

/// One user's channel at one frame.
struct ChannelRealization {
  int frame = 0;
  TapSet taps;
  std::vector<CMatrix> fdchtf;

  /// H_k = [H_1, ..., H_Nc], N_r x N_c N_t.
  CMatrix stacked() const;
  /// h_l = vec(H_l) for subcarrier index l (zero based).
  CVector vector(Index subcarrier) const { return vectorize(fdchtf.at(subcarrier)); }
  std::vector<CVector> vectors() const;
};

/// Deterministic generator of per-user frame sequences. Frame n of user k
/// draws its innovation from the stream (seed, k, n).
class ChannelSource {
 public:
  ChannelSource(SystemConfig config, CorrelationModel corr);
  explicit ChannelSource(const SystemConfig& config) : ChannelSource(config, CorrelationModel::jakes(config)) {}

  /// Frames 1 .. count for one user.
  std::vector<ChannelRealization> frames(int user, int count) const;

  double rho(int user) const;
  const SystemConfig& config() const { return config_; }
  const CorrelationModel& correlation() const { return corr_; }

 private:
  SystemConfig config_;
  CorrelationModel corr_;
};

/// Little-endian dump: int64 N_c, N_r, N_t, then H_k column-major as
/// (re, im) float64 pairs.
void write_channel_dump(const std::string& path, const ChannelRealization& realization);
CMatrix read_channel_dump(const std::string& path, Index* subcarriers = nullptr);

}  // namespace cdl
