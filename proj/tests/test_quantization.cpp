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

#include <set>

#include "hmimos/quantization.hpp"
#include "hmimos/random.hpp"

using namespace hmimos;

TEST_CASE("mu-law companding reference values")
{
    CHECK(mu_law_compress(0.0, 255.0) == 0.0);
    CHECK(mu_law_compress(1.0, 255.0) == doctest::Approx(1.0));
    CHECK(mu_law_compress(0.5, 255.0) == doctest::Approx(0.8757).epsilon(1e-4));
    for (double x : {0.0, 1e-6, 0.01, 0.3, 0.77, 1.0})
        CHECK(mu_law_expand(mu_law_compress(x, 255.0), 255.0) == doctest::Approx(x).epsilon(1e-12));
}

TEST_CASE("quantizer endpoints, range and level count")
{
    for (int bits : {1, 2, 3, 8})
    {
        const QuantSpec spec{255.0, bits};
        CHECK(mu_law_quantize(0.0, spec) == 0.0);
        CHECK(mu_law_quantize(1.0, spec) == 1.0);
        std::set<double> levels;
        for (int i = 0; i <= 2000; ++i)
        {
            const double q = mu_law_quantize(i / 2000.0, spec);
            CHECK(q >= 0.0);
            CHECK(q <= 1.0);
            levels.insert(q);
        }
        CHECK(levels.size() <= (std::size_t{1} << bits));
    }
    CHECK(mu_law_quantize(1.0 + 1e-13, QuantSpec{}) == 1.0);
}

TEST_CASE("quantizer is monotone and idempotent")
{
    const QuantSpec spec{255.0, 4};
    double prev = 0.0;
    for (int i = 0; i <= 1000; ++i)
    {
        const double q = mu_law_quantize(i / 1000.0, spec);
        CHECK(q >= prev);
        CHECK(mu_law_quantize(q, spec) == doctest::Approx(q).epsilon(1e-12));
        prev = q;
    }
}

TEST_CASE("quantization error in the companded domain is at most half a step")
{
    Rng rng = make_stream(8, {1});
    for (int bits : {2, 4, 6, 8, 16})
    {
        const QuantSpec spec{255.0, bits};
        const double half_step = 0.5 / (std::ldexp(1.0, bits) - 1.0);
        for (int i = 0; i < 500; ++i)
        {
            const double x = uniform(rng, 0.0, 1.0);
            const double err = std::abs(mu_law_compress(mu_law_quantize(x, spec), 255.0) - mu_law_compress(x, 255.0));
            CHECK(err <= half_step + 1e-12);
        }
    }
}

TEST_CASE("worst error shrinks with the bit width")
{
    double prev = 2.0;
    for (int bits : {2, 3, 4, 6, 8, 16})
    {
        double worst = 0.0;
        for (int i = 0; i <= 4000; ++i)
            worst = std::max(worst, std::abs(mu_law_quantize(i / 4000.0, QuantSpec{255.0, bits}) - i / 4000.0));
        CHECK(worst < prev);
        prev = worst;
    }
    CHECK(prev < 1e-4);
}

TEST_CASE("invalid specs and inputs are rejected")
{
    CHECK_THROWS_AS(validate_quant_spec(QuantSpec{0.0, 8}), InvalidArgument);
    CHECK_THROWS_AS(validate_quant_spec(QuantSpec{255.0, 0}), InvalidArgument);
    CHECK_THROWS_AS(validate_quant_spec(QuantSpec{255.0, 53}), InvalidArgument);
    CHECK_THROWS_AS(mu_law_quantize(-0.1, QuantSpec{}), InvalidArgument);
    CHECK_THROWS_AS(mu_law_quantize(1.1, QuantSpec{}), InvalidArgument);
}

TEST_CASE("state quantization keeps shapes and the precoder scale")
{
    Rng rng = make_stream(4, {2});
    BeampatternState st;
    st.alpha = VectorXd::NullaryExpr(20, [&] { return uniform(rng, 0, 1); });
    st.v = MatrixXd::NullaryExpr(6, 3, [&] { return uniform(rng, 0, 1); });
    Precoder p;
    p.w = MatrixXcd::NullaryExpr(4, 3, [&] { return complex_gaussian(rng, 1e-3); });

    for (ComplexQuantMode mode : {ComplexQuantMode::real_imag, ComplexQuantMode::magnitude_phase})
    {
        const QuantizedPoint q = quantize_state(st, p, QuantSpec{255.0, 6, mode});
        CHECK(q.state.alpha.size() == 20);
        CHECK(q.state.v.rows() == 6);
        CHECK(q.state.v.cols() == 3);
        CHECK(q.precoder.w.rows() == 4);
        CHECK_NOTHROW(validate_state(q.state));
        for (Eigen::Index i = 0; i < st.alpha.size(); ++i)
            CHECK(q.state.alpha(i) == mu_law_quantize(st.alpha(i), QuantSpec{255.0, 6}));
    }

    const QuantizedPoint q = quantize_state(st, p, QuantSpec{255.0, 6});
    const double s = std::max(p.w.real().cwiseAbs().maxCoeff(), p.w.imag().cwiseAbs().maxCoeff());
    const double sq = std::max(q.precoder.w.real().cwiseAbs().maxCoeff(), q.precoder.w.imag().cwiseAbs().maxCoeff());
    CHECK(sq == doctest::Approx(s).epsilon(1e-12));

    const QuantizedPoint fine = quantize_state(st, p, QuantSpec{255.0, 16});
    CHECK((fine.precoder.w - p.w).cwiseAbs().maxCoeff() < 1e-3 * s);
    CHECK((fine.state.alpha - st.alpha).cwiseAbs().maxCoeff() < 1e-4);

    Precoder zero;
    zero.w = MatrixXcd::Zero(4, 3);
    CHECK(quantize_state(st, zero, QuantSpec{}).precoder.w == zero.w);
}
