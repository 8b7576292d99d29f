// Copyright 2026 The commnorm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "commnorm/commnorm.hpp"
#include "eigen_oracle.hpp"

namespace commnorm {
namespace {

TEST(ParseNorm, Tokens) {
  EXPECT_EQ(parse_norm("op"), NormSpec::op());
  EXPECT_EQ(parse_norm("schatten:inf"), NormSpec::op());
  EXPECT_EQ(parse_norm("tr"), NormSpec::schatten(1.0));
  EXPECT_EQ(parse_norm("fro"), NormSpec::schatten(2.0));
  EXPECT_EQ(parse_norm("schatten:3"), NormSpec::schatten(3.0));
  EXPECT_EQ(parse_norm("schatten:2.5"), NormSpec::schatten(2.5));
  EXPECT_EQ(parse_norm("kyfan:2"), NormSpec::kyfan(2));
}

TEST(ParseNorm, ErrorsNameTheToken) {
  for (const char* bad : {"schatten:0.5", "schatten:", "schatten:x", "kyfan:0", "kyfan:-1", "nuclear", "foo:1"}) {
    try {
      parse_norm(bad);
      ADD_FAILURE() << bad << " was accepted";
    } catch (const InputError& e) {
      const std::string token(bad);
      EXPECT_NE(std::string(e.what()).find(token.substr(token.find(':') + 1)), std::string::npos) << e.what();
    }
  }
}

TEST(ParseNorm, RoundTripsThroughToString) {
  for (const auto& s : default_norm_grid()) EXPECT_EQ(parse_norm(s.to_string()), s);
}

TEST(UiNorm, DiagonalExamples) {
  const CMat d = CMat::diag({3.0, -4.0, 0.0});
  EXPECT_NEAR(ui_norm(d, parse_norm("op")), 4.0, 1e-15);
  EXPECT_NEAR(ui_norm(d, parse_norm("tr")), 7.0, 1e-15);
  EXPECT_NEAR(ui_norm(d, parse_norm("kyfan:2")), 7.0, 1e-15);
  EXPECT_NEAR(ui_norm(d, parse_norm("fro")), 5.0, 1e-15);
  EXPECT_NEAR(ui_norm(d, parse_norm("schatten:3")), std::cbrt(91.0), 1e-14);
}

TEST(UiNorm, KyFanOrderAboveDimensionThrows) {
  EXPECT_THROW(ui_norm(CMat::identity(2), NormSpec::kyfan(3)), InputError);
}

TEST(UiNorm, MatchesEigenSingularValues) {
  SeededRng rng(31);
  for (std::size_t n = 2; n <= 5; ++n) {
    const CMat a = ginibre(n, rng);
    const auto s = testing::ref_singular_values(a);
    double sum = 0.0, sq = 0.0, cube = 0.0;
    for (double x : s) {
      sum += x;
      sq += x * x;
      cube += x * x * x;
    }
    EXPECT_NEAR(ui_norm(a, NormSpec::op()), s[0], 1e-12);
    EXPECT_NEAR(ui_norm(a, NormSpec::trace_class()), sum, 1e-12);
    EXPECT_NEAR(ui_norm(a, NormSpec::frobenius()), std::sqrt(sq), 1e-12);
    EXPECT_NEAR(ui_norm(a, NormSpec::schatten(3.0)), std::cbrt(cube), 1e-12);
    EXPECT_NEAR(ui_norm(a, NormSpec::kyfan(2)), s[0] + s[1], 1e-12);
  }
}

TEST(UiNorm, UnitarilyInvariant) {
  SeededRng rng(37);
  for (int t = 0; t < 20; ++t) {
    const CMat a = ginibre(4, rng), u = haar_unitary(4, rng), v = haar_unitary(4, rng);
    for (const auto& spec : default_norm_grid()) EXPECT_NEAR(ui_norm(u * a * v, spec), ui_norm(a, spec), 1e-12);
  }
}

TEST(UiNorm, TriangleInequality) {
  SeededRng rng(41);
  for (int t = 0; t < 20; ++t) {
    const CMat a = ginibre(3, rng), b = ginibre(3, rng);
    for (const auto& spec : default_norm_grid()) {
      EXPECT_LE(ui_norm(a + b, spec), ui_norm(a, spec) + ui_norm(b, spec) + 1e-12);
    }
  }
}

TEST(NormConstant, Values) {
  for (std::size_t n = 2; n <= 6; ++n) {
    EXPECT_NEAR(norm_constant(NormSpec::op(), n).c, 1.0, 1e-15);
    EXPECT_NEAR(norm_constant(NormSpec::frobenius(), n).c, std::numbers::sqrt2, 1e-15);
    EXPECT_NEAR(norm_constant(NormSpec::trace_class(), n).c, 2.0, 1e-15);
    EXPECT_NEAR(norm_constant(NormSpec::schatten(3.0), n).c, std::cbrt(2.0), 1e-15);
    EXPECT_NEAR(norm_constant(NormSpec::kyfan(2), n).c, 2.0, 1e-15);
  }
  EXPECT_THROW(norm_constant(NormSpec::op(), 1), InputError);
}

TEST(NormConstant, CommonValueOnRankTwoWithPlusMinusOne) {
  // U diag(1, -1, 0, ...) U*: the set on which the constant is defined.
  SeededRng rng(43);
  for (std::size_t n = 2; n <= 5; ++n) {
    for (int t = 0; t < 20; ++t) {
      std::vector<cplx> d(n, cplx{});
      d[0] = 1.0;
      d[1] = -1.0;
      const CMat u = haar_unitary(n, rng);
      const CMat e = u * CMat::diag(d) * adjoint(u);
      for (const auto& spec : default_norm_grid()) EXPECT_NEAR(ui_norm(e, spec), norm_constant(spec, n).c, 1e-12);
    }
  }
}

}  // namespace
}  // namespace commnorm
