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

#include "hmimos/precoder.hpp"
#include "hmimos/random.hpp"
#include "hmimos/validation.hpp"

using namespace hmimos;

namespace
{
    ShortTermInstance identity_instance(const std::vector<VectorXcd> &h, const VectorXd &eta)
    {
        ShortTermInstance inst;
        inst.d_matrix = MatrixXcd::Identity(h[0].size(), h[0].size());
        inst.eff_channels = h;
        inst.eta = eta;
        inst.sigma_bar = VectorXd::Ones(eta.size());
        return inst;
    }

    ShortTermInstance random_instance(std::uint64_t seed, int n, int k, int users, double eta)
    {
        Rng rng = make_stream(seed, {77});
        ShortTermInstance inst;
        inst.d_matrix = MatrixXcd::NullaryExpr(n, k, [&] { return complex_gaussian(rng, 1.0); });
        for (int u = 0; u < users; ++u)
            inst.eff_channels.push_back(VectorXcd::NullaryExpr(n, [&] { return complex_gaussian(rng, 1.0); }));
        inst.eta = VectorXd::Constant(users, eta);
        inst.sigma_bar = VectorXd::NullaryExpr(users, [&] { return uniform(rng, 0.5, 1.5); });
        return inst;
    }
} // namespace

TEST_CASE("single user with unit channel needs unit power")
{
    const ShortTermInstance inst = identity_instance({VectorXcd::Ones(1)}, VectorXd::Ones(1));
    const PrecoderResult r = solve_precoder(inst);
    REQUIRE(r.ok());
    CHECK(r.power == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(instance_sinr(inst, r.precoder)(0) >= 1.0 - 1e-6);
}

TEST_CASE("orthogonal users decouple")
{
    const ShortTermInstance inst =
        identity_instance({VectorXcd::Unit(2, 0), VectorXcd::Unit(2, 1)}, (VectorXd(2) << 1.0, 3.0).finished());
    const PrecoderResult r = solve_precoder(inst);
    REQUIRE(r.ok());
    CHECK(r.power == doctest::Approx(4.0).epsilon(1e-6));
    const VectorXd s = instance_sinr(inst, r.precoder);
    CHECK(s(0) == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(s(1) == doctest::Approx(3.0).epsilon(1e-5));
}

TEST_CASE("zero forcing with identity gains")
{
    const ShortTermInstance inst = identity_instance({VectorXcd::Unit(3, 0), VectorXcd::Unit(3, 1), VectorXcd::Unit(3, 2)},
                                                     (VectorXd(3) << 1.0, 2.0, 0.5).finished());
    const PrecoderResult r = zf_precoder(inst);
    REQUIRE(r.ok());
    CHECK(r.power == doctest::Approx(3.5));
    const MatrixXcd streams = inst.gain_matrix() * r.precoder.w;
    CHECK(std::abs(streams(0, 1)) < 1e-12);
    CHECK(std::abs(streams(2, 0)) < 1e-12);
}

TEST_CASE("zero targets give the zero precoder")
{
    const ShortTermInstance inst = random_instance(1, 6, 3, 2, 0.0);
    const PrecoderResult r = solve_precoder(inst);
    REQUIRE(r.ok());
    CHECK(r.power == 0.0);
    CHECK(r.precoder.w.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("colinear users with unit targets are infeasible")
{
    const ShortTermInstance inst = colinear_instance();
    CHECK(solve_precoder(inst).status == PrecoderStatus::infeasible);
    CHECK(zf_precoder(inst).status == PrecoderStatus::infeasible);
    bool feasible = true;
    duality_min_power(inst, feasible);
    CHECK_FALSE(feasible);
}

TEST_CASE("more users than feeds defeats zero forcing")
{
    const ShortTermInstance inst = random_instance(2, 6, 2, 3, 0.1);
    CHECK(zf_precoder(inst).status == PrecoderStatus::infeasible);
}

TEST_CASE("random instances: SINR met, beats ZF, matches the duality oracle")
{
    for (std::uint64_t seed = 1; seed <= 15; ++seed)
    {
        const ShortTermInstance inst = random_instance(seed, 8, 4, 3, 1.0);
        const PrecoderResult r = solve_precoder(inst);
        REQUIRE(r.ok());
        const VectorXd s = instance_sinr(inst, r.precoder);
        CHECK(s.minCoeff() >= 1.0 - 1e-5);

        const PrecoderResult zf = zf_precoder(inst);
        REQUIRE(zf.ok());
        CHECK(r.power <= zf.power * (1.0 + 1e-6));

        bool feasible = false;
        const double oracle = duality_min_power(inst, feasible);
        REQUIRE(feasible);
        CHECK(std::abs(r.power - oracle) <= 1e-5 * oracle);
    }
}

TEST_CASE("power is non-decreasing in the SINR target")
{
    double prev = 0.0;
    for (double eta : {0.25, 0.5, 1.0, 2.0, 4.0})
    {
        const PrecoderResult r = solve_precoder(random_instance(3, 8, 4, 3, eta));
        REQUIRE(r.ok());
        CHECK(r.power >= prev * (1.0 - 1e-7));
        prev = r.power;
    }
}

TEST_CASE("RZF meets each stream gain exactly")
{
    const ShortTermInstance inst = random_instance(5, 6, 2, 3, 2.0);
    const PrecoderResult r = rzf_precoder(inst);
    const MatrixXcd streams = inst.gain_matrix() * r.precoder.w;
    for (int u = 0; u < 3; ++u)
        CHECK(std::norm(streams(u, u)) == doctest::Approx(2.0 * inst.sigma_bar(u) * inst.sigma_bar(u)));
}

TEST_CASE("build_instance checks shapes")
{
    BeampatternState st{VectorXd::Ones(3), MatrixXd::Ones(2, 2)};
    ChannelRealization ch;
    ch.h = {MatrixXcd::Ones(2, 3), MatrixXcd::Ones(2, 3)};
    QosSpec q{VectorXd::Ones(2), 1.0};
    CHECK_NOTHROW(build_instance(st, MatrixXcd::Ones(3, 1), VectorXcd::Ones(2), ch, q));
    CHECK_THROWS_AS(build_instance(st, MatrixXcd::Ones(4, 1), VectorXcd::Ones(2), ch, q), InvalidArgument);
    q.sigma2 = 0.0;
    CHECK_THROWS_AS(build_instance(st, MatrixXcd::Ones(3, 1), VectorXcd::Ones(2), ch, q), InvalidArgument);
}
