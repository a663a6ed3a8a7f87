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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>

#include "cdl/channel.hpp"

using namespace cdl;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Power series for J0, independent of the library's Bessel routine.
double j0_series(double x) {
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    term *= -(x * x / 4.0) / (double(k) * double(k));
    sum += term;
  }
  return sum;
}

SystemConfig small_config() {
  SystemConfig c = desk_preset();
  c.tx_antennas = 4;
  c.subcarriers = 6;
  c.taps = 3;
  return c;
}

}  // namespace

TEST_CASE("Jakes correlation follows J0 of the antenna separation") {
  const double lambda = 0.15, d = lambda / 15.0;
  const RMatrix r = jakes_correlation(6, d, lambda);
  for (Index i = 0; i < 6; ++i)
    for (Index j = 0; j < 6; ++j)
      CHECK_THAT(r(i, j), WithinAbs(j0_series(2.0 * std::numbers::pi * d * double(std::abs(i - j)) / lambda), 1e-12));
  CHECK_THAT(r(0, 1), WithinAbs(0.956614, 1e-6));
  CHECK_THROWS_AS(jakes_correlation(4, d, 0.0), ParameterError);
}

TEST_CASE("psd_sqrt squares back and rejects indefinite input") {
  const RMatrix r = jakes_correlation(8, 0.01, 0.15);
  const RMatrix s = psd_sqrt(r);
  CHECK((s * s - r).norm() < 1e-8);
  CHECK((s - s.transpose()).norm() < 1e-12);

  RMatrix bad = RMatrix::Identity(3, 3);
  bad(2, 2) = -0.5;
  CHECK_THROWS_AS(psd_sqrt(bad), NotPsdError);
  CHECK_THROWS_AS(psd_sqrt(RMatrix(2, 3)), ShapeError);
}

TEST_CASE("Correlated taps have the target spatial covariance") {
  SystemConfig c = small_config();
  c.taps = 1;
  const auto corr = CorrelationModel::jakes(c);
  Rng rng = Rng::stream(17, {1});
  const int draws = 20000;
  CMatrix cov = CMatrix::Zero(c.tx_antennas, c.tx_antennas);
  for (int t = 0; t < draws; ++t) {
    const CVector h = draw_correlated_taps(rng, c, 0, corr).front().transpose();
    cov += h * h.adjoint();
  }
  cov /= double(draws);
  CHECK((cov - corr.bs.cast<Complex>()).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("FDCHTF matches a direct DFT over taps") {
  const SystemConfig c = small_config();
  Rng rng = Rng::stream(3, {});
  TapSet taps;
  for (int i = 0; i < c.taps; ++i) taps.push_back(rng.complex_normal_matrix(1, c.tx_antennas));
  const auto f = taps_to_fdchtf(taps, c.subcarriers);
  REQUIRE(f.size() == std::size_t(c.subcarriers));
  for (int l = 0; l < c.subcarriers; ++l) {
    CMatrix direct = CMatrix::Zero(1, c.tx_antennas);
    for (int i = 0; i < c.taps; ++i)
      direct += taps[std::size_t(i)] * std::polar(1.0, -2.0 * std::numbers::pi * i * l / c.subcarriers);
    CHECK((f[std::size_t(l)] - direct).norm() < 1e-12);
  }

  // Linear in the taps.
  TapSet other, mix;
  for (int i = 0; i < c.taps; ++i) other.push_back(rng.complex_normal_matrix(1, c.tx_antennas));
  const Complex a(0.3, -1.2), b(2.0, 0.5);
  for (int i = 0; i < c.taps; ++i) mix.push_back(a * taps[std::size_t(i)] + b * other[std::size_t(i)]);
  const auto fo = taps_to_fdchtf(other, c.subcarriers);
  const auto fm = taps_to_fdchtf(mix, c.subcarriers);
  for (int l = 0; l < c.subcarriers; ++l)
    CHECK((fm[std::size_t(l)] - a * f[std::size_t(l)] - b * fo[std::size_t(l)]).norm() < 1e-12);

  CHECK_THROWS_AS(taps_to_fdchtf(taps, 2), ParameterError);
  CHECK_THROWS(taps_to_fdchtf({}, 4));
}

TEST_CASE("Gauss-Markov evolution keeps the variance and respects its bounds") {
  SystemConfig c = small_config();
  c.taps = 1;
  const auto corr = CorrelationModel::identity(c);
  Rng rng = Rng::stream(5, {});
  const double rho = 0.8;
  double power = 0.0;
  const int draws = 20000;
  for (int t = 0; t < draws; ++t) {
    const auto prev = draw_correlated_taps(rng, c, 0, corr);
    const auto next = evolve_frame(prev, rho, draw_correlated_taps(rng, c, 0, corr));
    power += next.front().squaredNorm() / double(c.tx_antennas);
  }
  CHECK_THAT(power / draws, WithinAbs(1.0, 0.02));

  const auto taps = draw_correlated_taps(rng, c, 0, corr);
  const auto fresh = draw_correlated_taps(rng, c, 0, corr);
  CHECK((evolve_frame(taps, 1.0, fresh).front() - taps.front()).norm() == 0.0);
  CHECK((evolve_frame(taps, 0.0, fresh).front() - fresh.front()).norm() == 0.0);
  CHECK_THROWS_AS(evolve_frame(taps, 1.5, fresh), ParameterError);
  CHECK_THROWS_AS(evolve_frame(taps, -0.1, fresh), ParameterError);
}

TEST_CASE("Doppler and temporal correlation") {
  // 20 km/h at 2 GHz.
  CHECK_THAT(doppler_frequency(20.0, 2e9), WithinRel(20.0 / 3.6 * 2e9 / 299792458.0, 1e-12));
  CHECK_THAT(doppler_frequency(20.0, 2e9), WithinAbs(37.06, 0.01));
  const double fd = doppler_frequency(20.0, 2e9);
  CHECK_THAT(temporal_correlation(fd, 1e-3), WithinAbs(j0_series(2.0 * std::numbers::pi * fd * 1e-3), 1e-12));
  CHECK(temporal_correlation(0.0, 0.01) == 1.0);
  CHECK(temporal_correlation(60.0, 0.01) == 0.0);  // past the first root of J0
}

TEST_CASE("vec and devec are column-major inverses") {
  CMatrix m(2, 3);
  m << Complex(1, 0), Complex(2, 0), Complex(3, 0), Complex(4, 0), Complex(5, 0), Complex(6, 0);
  const CVector v = vectorize(m);
  CHECK(v(0) == Complex(1, 0));
  CHECK(v(1) == Complex(4, 0));
  CHECK(v(2) == Complex(2, 0));
  CHECK((devectorize(v, 2, 3) - m).norm() == 0.0);
  CHECK_THROWS_AS(devectorize(v, 4, 2), ShapeError);
}

TEST_CASE("Channel source is deterministic and prefix-stable") {
  SystemConfig c = small_config();
  c.users = 2;
  c.velocities_kmh = {5.0, 30.0};
  const ChannelSource src(c);
  const auto a = src.frames(1, 6);
  const auto b = src.frames(1, 3);
  for (std::size_t n = 0; n < b.size(); ++n) CHECK((a[n].stacked() - b[n].stacked()).norm() == 0.0);
  CHECK((src.frames(0, 1)[0].stacked() - a[0].stacked()).norm() > 0.0);
  CHECK(a[2].frame == 3);
  CHECK(a[0].vectors().size() == std::size_t(c.subcarriers));
  CHECK(a[0].stacked().cols() == Index(c.subcarriers) * c.tx_antennas);

  SystemConfig other = c;
  other.seed = c.seed + 1;
  CHECK((ChannelSource(other).frames(1, 1)[0].stacked() - a[0].stacked()).norm() > 0.0);
}

TEST_CASE("Channel dump round-trips") {
  const SystemConfig c = small_config();
  const auto frame = ChannelSource(c).frames(0, 1).front();
  const auto path = (std::filesystem::temp_directory_path() / "cdl_channel_dump.bin").string();
  write_channel_dump(path, frame);
  Index subcarriers = 0;
  const CMatrix back = read_channel_dump(path, &subcarriers);
  std::filesystem::remove(path);
  CHECK(subcarriers == c.subcarriers);
  CHECK((back - frame.stacked()).norm() == 0.0);
}
