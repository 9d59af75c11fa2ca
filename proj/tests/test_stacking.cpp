// SPDX-License-Identifier: Apache-2.0
//
// hmimos-tts: two-timescale beamforming for holographic MIMO surfaces
// Copyright (C) 2026 The hmimos-tts authors
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

#include <doctest.h>

#include "hmimos/random.hpp"
#include "hmimos/stacking.hpp"

using namespace hmimos;

TEST_CASE("stack and unstack are inverse")
{
    VectorXcd a(3);
    a << cplx(1, 2), cplx(-3, 0.5), cplx(0, -1);
    const VectorXd x = complex_to_real_stack(a);
    REQUIRE(x.size() == 6);
    CHECK(x(0) == 1.0);
    CHECK(x(3) == 2.0);
    CHECK(real_to_complex_unstack(x) == a);
    CHECK_THROWS_AS(real_to_complex_unstack(VectorXd::Ones(3)), InvalidArgument);
}

TEST_CASE("real linear map commutes with stacking")
{
    Rng rng = make_stream(17, {1});
    const MatrixXcd m = MatrixXcd::NullaryExpr(4, 3, [&] { return complex_gaussian(rng, 1.0); });
    const VectorXcd a = VectorXcd::NullaryExpr(3, [&] { return complex_gaussian(rng, 1.0); });
    const VectorXd lhs = complex_to_real_stack(m * a);
    const VectorXd rhs = real_linear_map(m) * complex_to_real_stack(a);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("real and imaginary functionals of c^H a")
{
    Rng rng = make_stream(18, {1});
    const VectorXcd c = VectorXcd::NullaryExpr(5, [&] { return complex_gaussian(rng, 1.0); });
    const VectorXcd a = VectorXcd::NullaryExpr(5, [&] { return complex_gaussian(rng, 1.0); });
    const cplx ip = c.dot(a);
    const VectorXd x = complex_to_real_stack(a);
    CHECK(real_part_functional(c).dot(x) == doctest::Approx(ip.real()));
    CHECK(imag_part_functional(c).dot(x) == doctest::Approx(ip.imag()));
}
