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

#include "cdl/channel.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

namespace cdl {

RMatrix jakes_correlation(Index count, double spacing, double wavelength) {
  if (!(wavelength > 0)) throw ParameterError("jakes_correlation: wavelength must be positive");
  if (count < 1) throw ParameterError("jakes_correlation: antenna count must be at least 1");
  if (spacing < 0) throw ParameterError("jakes_correlation: spacing must be nonnegative");
  // Toeplitz: fill one row of lags and reuse it.
  RVector lag(count);
  for (Index k = 0; k < count; ++k)
    lag(k) = std::cyl_bessel_j(0.0, 2.0 * std::numbers::pi * double(k) * spacing / wavelength);
  RMatrix r(count, count);
  for (Index u = 0; u < count; ++u)
    for (Index v = 0; v < count; ++v) r(u, v) = lag(std::abs(u - v));
  return r;
}

CorrelationModel CorrelationModel::jakes(const SystemConfig& config) {
  CorrelationModel m;
  m.bs = jakes_correlation(config.tx_antennas, config.antenna_spacing(), config.wavelength());
  m.bs_sqrt = psd_sqrt(m.bs);
  const RMatrix ue = jakes_correlation(config.rx_antennas, config.antenna_spacing(), config.wavelength());
  const RMatrix ue_sqrt = psd_sqrt(ue);
  m.ue.assign(std::size_t(config.users), ue);
  m.ue_sqrt.assign(std::size_t(config.users), ue_sqrt);
  return m;
}

CorrelationModel CorrelationModel::identity(const SystemConfig& config) {
  CorrelationModel m;
  m.bs = RMatrix::Identity(config.tx_antennas, config.tx_antennas);
  m.bs_sqrt = m.bs;
  m.ue.assign(std::size_t(config.users), RMatrix::Identity(config.rx_antennas, config.rx_antennas));
  m.ue_sqrt = m.ue;
  return m;
}

TapSet draw_correlated_taps(Rng& rng, const SystemConfig& config, int user, const CorrelationModel& corr) {
  const auto& ue = corr.ue.at(std::size_t(user));
  const auto& ue_sqrt = corr.ue_sqrt.at(std::size_t(user));
  const double scale = 1.0 / std::sqrt(ue.trace());
  const CMatrix left = ue_sqrt.cast<Complex>() * scale;
  const CMatrix right = corr.bs_sqrt.cast<Complex>();
  TapSet taps;
  taps.reserve(std::size_t(config.taps));
  for (int i = 0; i < config.taps; ++i) {
    const CMatrix white = rng.complex_normal_matrix(config.rx_antennas, config.tx_antennas);
    taps.push_back(left * white * right);
  }
  return taps;
}

std::vector<CMatrix> taps_to_fdchtf(const TapSet& taps, Index subcarriers) {
  if (subcarriers < 1) throw ParameterError("taps_to_fdchtf: need at least one subcarrier");
  if (Index(taps.size()) > subcarriers) throw ParameterError("taps_to_fdchtf: more taps than subcarriers (L > N_c)");
  if (taps.empty()) throw ParameterError("taps_to_fdchtf: no taps");
  std::vector<CMatrix> out;
  out.reserve(std::size_t(subcarriers));
  for (Index l = 0; l < subcarriers; ++l) {
    CMatrix h = CMatrix::Zero(taps.front().rows(), taps.front().cols());
    for (std::size_t i = 0; i < taps.size(); ++i) {
      const double angle = -2.0 * std::numbers::pi * double((Index(i) * l) % subcarriers) / double(subcarriers);
      h += taps[i] * std::polar(1.0, angle);
    }
    out.push_back(std::move(h));
  }
  return out;
}

TapSet evolve_frame(const TapSet& taps, double rho, const TapSet& innovation) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw ParameterError("evolve_frame: rho must lie in [0, 1]");
  if (taps.size() != innovation.size()) throw ShapeError("evolve_frame: tap count mismatch");
  const double fresh = std::sqrt(1.0 - rho * rho);
  TapSet out;
  out.reserve(taps.size());
  for (std::size_t i = 0; i < taps.size(); ++i) out.push_back(rho * taps[i] + fresh * innovation[i]);
  return out;
}

double doppler_frequency(double velocity_kmh, double carrier_freq) {
  return velocity_kmh / 3.6 * carrier_freq / kSpeedOfLight;
}

double temporal_correlation(double doppler_hz, double frame_interval) {
  // J0 dips below zero past its first root; a Gauss-Markov step needs
  // rho >= 0, so fast users decorrelate completely.
  return std::max(0.0, std::cyl_bessel_j(0.0, 2.0 * std::numbers::pi * doppler_hz * frame_interval));
}

CMatrix ChannelRealization::stacked() const {
  if (fdchtf.empty()) return {};
  const Index rows = fdchtf.front().rows();
  const Index cols = fdchtf.front().cols();
  CMatrix out(rows, cols * Index(fdchtf.size()));
  for (std::size_t l = 0; l < fdchtf.size(); ++l) out.middleCols(Index(l) * cols, cols) = fdchtf[l];
  return out;
}

std::vector<CVector> ChannelRealization::vectors() const {
  std::vector<CVector> out;
  out.reserve(fdchtf.size());
  for (const auto& h : fdchtf) out.push_back(vectorize(h));
  return out;
}

ChannelSource::ChannelSource(SystemConfig config, CorrelationModel corr)
    : config_(std::move(config)), corr_(std::move(corr)) {}

double ChannelSource::rho(int user) const {
  return temporal_correlation(doppler_frequency(config_.velocity_kmh(user), config_.carrier_freq),
                              config_.frame_interval);
}

std::vector<ChannelRealization> ChannelSource::frames(int user, int count) const {
  std::vector<ChannelRealization> out;
  out.reserve(std::size_t(std::max(count, 0)));
  const double r = rho(user);
  TapSet taps;
  for (int n = 1; n <= count; ++n) {
    Rng rng = Rng::stream(config_.seed, {0x636861ULL, std::uint64_t(user), std::uint64_t(n)});
    TapSet draw = draw_correlated_taps(rng, config_, user, corr_);
    taps = n == 1 ? std::move(draw) : evolve_frame(taps, r, draw);
    ChannelRealization real;
    real.frame = n;
    real.taps = taps;
    real.fdchtf = taps_to_fdchtf(taps, config_.subcarriers);
    out.push_back(std::move(real));
  }
  return out;
}

namespace {

static_assert(std::endian::native == std::endian::little, "channel dumps assume a little-endian host");

void put_i64(std::ofstream& os, std::int64_t v) { os.write(reinterpret_cast<const char*>(&v), sizeof v); }
void put_f64(std::ofstream& os, double v) { os.write(reinterpret_cast<const char*>(&v), sizeof v); }

}  // namespace

void write_channel_dump(const std::string& path, const ChannelRealization& realization) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path + " for writing");
  const CMatrix h = realization.stacked();
  const std::int64_t nc = std::int64_t(realization.fdchtf.size());
  put_i64(os, nc);
  put_i64(os, h.rows());
  put_i64(os, nc == 0 ? 0 : h.cols() / nc);
  for (Index c = 0; c < h.cols(); ++c)
    for (Index r = 0; r < h.rows(); ++r) {
      put_f64(os, h(r, c).real());
      put_f64(os, h(r, c).imag());
    }
}

CMatrix read_channel_dump(const std::string& path, Index* subcarriers) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path);
  std::int64_t dims[3];
  is.read(reinterpret_cast<char*>(dims), sizeof dims);
  if (!is || dims[0] < 0 || dims[1] < 0 || dims[2] < 0) throw ShapeError("bad channel dump header");
  CMatrix h(dims[1], dims[0] * dims[2]);
  for (Index c = 0; c < h.cols(); ++c)
    for (Index r = 0; r < h.rows(); ++r) {
      double pair[2];
      is.read(reinterpret_cast<char*>(pair), sizeof pair);
      h(r, c) = {pair[0], pair[1]};
    }
  if (!is) throw ShapeError("truncated channel dump");
  if (subcarriers != nullptr) *subcarriers = dims[0];
  return h;
}

}  // namespace cdl
