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

#include <sstream>

#include "cdl/accounting.hpp"

using namespace cdl;

TEST_CASE("Dictionary feedback for one UE") {
  for (std::int64_t nc : {1, 4, 32, 64}) {
    const auto f = dictionary_feedback(nc, 64);
    CHECK(f.common == 4096);
    CHECK(f.per_subcarrier == nc * 4096);
    CHECK(f.saved == (nc - 1) * 4096);
    CHECK(f.reduction_factor == Rational(1, nc));
  }
  CHECK_THROWS_AS(dictionary_feedback(0, 64), ParameterError);
}

TEST_CASE("CSI feedback ratio") {
  // Hand computation for g = 2, N_c = 32, N_t = 64, N_r = 1, N' = 1024:
  // uncompressed 1024*32*64 = 2097152, compressed 4096 + 1048576 = 1052672.
  const auto f = csi_feedback_ratio(32, 64, 1024, Rational(2));
  CHECK(f.uncompressed == Rational(2097152));
  CHECK(f.compressed == Rational(1052672));
  CHECK(f.ratio == Rational(1052672, 2097152));
  CHECK(f.ratio == Rational(257, 512));
  CHECK(csi_feedback_ratio(32, 64, 1024, Rational(4)).ratio == Rational(129, 512));
  // Fractional compression factors stay exact.
  // g = 3/2: (16 + 128 * 2/3) / 128 = 19/24.
  CHECK(csi_feedback_ratio(4, 4, 8, Rational(3, 2)).ratio == Rational(19, 24));
  // The dictionary overhead fades with N'; the ratio tends to 1/g.
  CHECK(csi_feedback_ratio(32, 64, 1 << 20, Rational(2)).ratio > Rational(1, 2));
  CHECK(csi_feedback_ratio(32, 64, 1 << 20, Rational(2)).ratio < csi_feedback_ratio(32, 64, 1024, Rational(2)).ratio);
  CHECK_THROWS_AS(csi_feedback_ratio(32, 64, 0, Rational(2)), ParameterError);
  CHECK_THROWS_AS(csi_feedback_ratio(32, 64, 10, Rational(1, 2)), ParameterError);
}

TEST_CASE("Memory savings") {
  CHECK(memory_savings(1, 32, 64) == 31 * 4096);
  CHECK(memory_savings(3, 32, 64) == 3 * 31 * 4096);
  CHECK(memory_savings(2, 1, 64) == 0);
  SystemConfig c = paper_preset();
  c.users = 3;
  CHECK(memory_savings(c) == 3 * 31 * 4096);
}

TEST_CASE("FLOP estimates") {
  const std::int64_t n = 64, m = 1600, nz = 400;
  CHECK(flops_estimate(FlopMethod::CdlOp, SvdVariant::GolubReinsch, n, m, nz) == 21 * n * n * n);
  CHECK(flops_estimate(FlopMethod::CdlOp, SvdVariant::Chan, n, m, nz) == 26 * n * n * n);
  CHECK(flops_estimate(FlopMethod::CdlKsvdMin, SvdVariant::GolubReinsch, n, m, nz) == 719360000);
  CHECK(flops_estimate(FlopMethod::CdlKsvdMin, SvdVariant::Chan, n, m, nz) == 6 * n * nz * nz + 20 * nz * nz * nz);
  CHECK(flops_estimate(FlopMethod::CdlKsvdMax, SvdVariant::GolubReinsch, n, m, nz) == n * 719360000);
  CHECK(flops_estimate(FlopMethod::CdlKsvdMax, SvdVariant::Chan, n, m, nz) == 85852160000LL);
  CHECK_THROWS_AS(flops_estimate(FlopMethod::CdlOp, SvdVariant::Chan, n, 10, 20), ParameterError);
}

TEST_CASE("Number formatting") {
  CHECK(format_significant(5505024.0, 4) == "5.505e+06");
  CHECK(format_significant(719360000.0, 5) == "7.1936e+08");
  CHECK(format_significant(85852160000.0, 5) == "8.5852e+10");
  CHECK(format_fixed(257.0 / 512.0, 1) == "0.5");
  CHECK(format_fixed(129.0 / 512.0, 3) == "0.252");
  CHECK(to_string(Rational(6, 8)) == "3/4");
  CHECK(to_string(Rational(4096)) == "4096");
}

TEST_CASE("Table writers") {
  std::ostringstream t4, t5, t3;
  write_dictionary_feedback_table(t4);
  CHECK(t4.str() ==
        "n_t,n_r,n_c,t_ksvd,t_com,t_saved,upsilon\n"
        "64,1,4,16384,4096,12288,1/4\n"
        "64,1,32,131072,4096,126976,1/32\n");
  write_csi_feedback_table(t5, 1024);
  CHECK(t5.str().find("2,32,64,1,1024,2097152,1052672,0.502,257/512\n") != std::string::npos);
  CHECK(t5.str().find("4,64,64,2,1024,8388608,2113536,0.252,129/512\n") != std::string::npos);
  write_flops_table(t3, 64, 1600, 400);
  CHECK(t3.str().find("CDL-OP,GR-SVD,64,1600,400,5505024\n") != std::string::npos);
}
