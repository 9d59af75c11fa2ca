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

#include "hmimos/geometry.hpp"
#include "hmimos/random.hpp"

using namespace hmimos;

namespace
{
    constexpr double kLambda = 0.01;
}

TEST_CASE("16x16 transmit panel with a 3x3 feed grid")
{
    const SurfacePanel p = build_panel(16, 2.5e-3, kLambda, FeedLayout::grid(3));
    CHECK(p.num_elements() == 256);
    CHECK(p.num_feeds() == 9);
    for (const Vec3 &f : p.feed_positions)
        CHECK(f.z() == 0.0);
}

TEST_CASE("single element panel sits on its feed")
{
    const SurfacePanel p = build_panel(1, 2.5e-3, kLambda, FeedLayout::center());
    REQUIRE(p.num_elements() == 1);
    CHECK(p.element_positions[0].norm() == 0.0);
    CHECK(feed_phase_matrix(p)(0, 0) == cplx(1.0, 0.0));
    CHECK(rx_phase_vector(p)(0) == cplx(1.0, 0.0));
}

TEST_CASE("2x2 panel is a centred 1 mm square")
{
    const SurfacePanel p = build_panel(2, 1e-3, kLambda, FeedLayout::center());
    Vec3 sum = Vec3::Zero();
    for (const Vec3 &e : p.element_positions)
        sum += e;
    CHECK(sum.norm() < 1e-18);
    CHECK((p.element_positions[0] - p.element_positions[3]).norm() == doctest::Approx(std::sqrt(2.0) * 1e-3));
    CHECK((p.element_positions[0] - p.element_positions[1]).norm() == doctest::Approx(1e-3));
}

TEST_CASE("panel preconditions")
{
    CHECK_THROWS_AS(build_panel(4, kLambda / 2, kLambda, FeedLayout::center()), InvalidArgument);
    CHECK_THROWS_AS(build_panel(0, 1e-3, kLambda, FeedLayout::center()), InvalidArgument);
    CHECK_THROWS_AS(build_panel(4, -1e-3, kLambda, FeedLayout::center()), InvalidArgument);
    CHECK_THROWS_AS(build_panel(2, 1e-3, kLambda, FeedLayout::grid(5)), InvalidArgument);
}

TEST_CASE("feed phase follows the reference-wave distance")
{
    // Element at distance lambda/4 from the feed: exp(-i pi/2) = -i.
    SurfacePanel p = build_panel(1, 2.5e-3, kLambda, FeedLayout::center());
    p.feed_positions[0] = Vec3(2.5e-3, 0.0, 0.0);
    const cplx e = feed_phase_matrix(p)(0, 0);
    CHECK(e.real() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(e.imag() == doctest::Approx(-1.0));

    p.feed_positions[0] = Vec3(kLambda, 0.0, 0.0);
    const cplx full = feed_phase_matrix(p)(0, 0);
    CHECK(full.real() == doctest::Approx(1.0));
    CHECK(std::abs(full.imag()) < 1e-12);
}

TEST_CASE("phase entries are unit modulus and translation invariant")
{
    const SurfacePanel tx = build_panel(8, 2.5e-3, kLambda, FeedLayout::grid(2));
    const MatrixXcd theta = feed_phase_matrix(tx);
    CHECK((theta.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-12);

    SurfacePanel moved = tx;
    const Vec3 shift(0.3, -1.7, 2.2);
    for (Vec3 &e : moved.element_positions)
        e += shift;
    for (Vec3 &f : moved.feed_positions)
        f += shift;
    CHECK((feed_phase_matrix(moved) - theta).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("receive phase vector of a 6x6 panel has four-fold symmetry")
{
    const SurfacePanel rx = build_panel(6, 2.5e-3, kLambda, FeedLayout::center());
    const VectorXcd beta = rx_phase_vector(rx);
    REQUIRE(beta.size() == 36);
    CHECK((beta.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-12);
    // Rotation by 90 degrees maps (i, j) to (j, rows - 1 - i).
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            CHECK(std::abs(beta(i * 6 + j) - beta(j * 6 + (5 - i))) < 1e-12);
    CHECK_THROWS_AS(rx_phase_vector(build_panel(4, 2.5e-3, kLambda, FeedLayout::grid(2))), InvalidArgument);
}

TEST_CASE("holographic amplitude endpoints and midpoint")
{
    SurfacePanel p = build_panel(1, 2.5e-3, kLambda, FeedLayout::center());
    CHECK(holographic_amplitude(p, Vec3(0, 0, 1))(0) == doctest::Approx(1.0));

    // Feed half a wavelength away: phase -pi, amplitude 0.
    p.feed_positions[0] = Vec3(kLambda / 2, 0, 0);
    CHECK(holographic_amplitude(p, Vec3(0, 0, 1))(0) == doctest::Approx(0.0).epsilon(1e-12));

    // Quarter wavelength: phase -pi/2, amplitude 0.5.
    p.feed_positions[0] = Vec3(kLambda / 4, 0, 0);
    CHECK(holographic_amplitude(p, Vec3(0, 0, 1))(0) == doctest::Approx(0.5));

    CHECK_THROWS_AS(holographic_amplitude(p, Vec3(0, 0, 2)), InvalidArgument);
}

TEST_CASE("holographic amplitude stays in [0,1] for random directions")
{
    Rng rng = make_stream(3, {1});
    for (int rows : {2, 5, 8})
    {
        const SurfacePanel p = build_panel(rows, 2.5e-3, kLambda, FeedLayout::grid(rows >= 4 ? 2 : 1));
        for (int k = 0; k < 50; ++k)
        {
            Vec3 d(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1));
            d.normalize();
            const VectorXd a = holographic_amplitude(p, d);
            CHECK(a.minCoeff() >= 0.0);
            CHECK(a.maxCoeff() <= 1.0);
        }
    }
}
