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

#include <limits>

#include "hmimos/random.hpp"
#include "hmimos/socp.hpp"

using namespace hmimos;

namespace
{
    // ||x|| <= t, 3 x1 + 4 x2 >= 1, minimize t.
    SocpProblem distance_to_line()
    {
        SocpProblem p(3);
        p.cost << 0, 0, 1;
        SecondOrderCone k;
        k.a = MatrixXd::Zero(2, 3);
        k.a(0, 0) = 1;
        k.a(1, 1) = 1;
        k.b = VectorXd::Zero(2);
        k.c = VectorXd::Zero(3);
        k.c(2) = 1;
        p.add_cone(k);
        Eigen::RowVectorXd r(3);
        r << -3, -4, 0;
        p.add_inequality(r, -1);
        return p;
    }
} // namespace

TEST_CASE("distance from origin to a line")
{
    const SocpSolution s = solve_socp(distance_to_line());
    REQUIRE(s.status == SocpStatus::optimal);
    CHECK(s.x(0) == doctest::Approx(0.12).epsilon(1e-6));
    CHECK(s.x(1) == doctest::Approx(0.16).epsilon(1e-6));
    CHECK(s.x(2) == doctest::Approx(0.2).epsilon(1e-6));
    CHECK(s.objective_value == doctest::Approx(0.2).epsilon(1e-6));
    CHECK(s.max_constraint_violation <= s.feasibility_tolerance);
}

TEST_CASE("minimum norm point on the simplex hyperplane")
{
    SocpProblem e(6);
    e.cost(5) = 1;
    SecondOrderCone k;
    k.a = MatrixXd::Zero(5, 6);
    k.a.leftCols(5).setIdentity();
    k.b = VectorXd::Zero(5);
    k.c = VectorXd::Zero(6);
    k.c(5) = 1;
    e.add_cone(k);
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(6);
    row.head(5).setOnes();
    e.add_equality(row, 1);
    const SocpSolution s = solve_socp(e);
    REQUIRE(s.status == SocpStatus::optimal);
    for (int i = 0; i < 5; ++i)
        CHECK(s.x(i) == doctest::Approx(0.2).epsilon(1e-6));
    CHECK(s.x(5) == doctest::Approx(std::sqrt(0.2)).epsilon(1e-6));
}

TEST_CASE("box-constrained LP picks the lower corner")
{
    SocpProblem b(4);
    b.cost << 1, 2, 3, 4;
    b.set_bounds(0, 1);
    const SocpSolution s = solve_socp(b);
    REQUIRE(s.status == SocpStatus::optimal);
    CHECK(s.x.cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("crossed bounds are infeasible")
{
    SocpProblem q(2);
    q.cost << 1, 1;
    q.lower = VectorXd::Constant(2, 1.0);
    q.upper = VectorXd::Constant(2, 0.0);
    CHECK(solve_socp(q).status == SocpStatus::infeasible);
}

TEST_CASE("conflicting cone and halfspace are infeasible")
{
    // ||x|| <= 1 together with x1 >= 2.
    SocpProblem p(2);
    p.cost << 1, 0;
    SecondOrderCone k;
    k.a = MatrixXd::Identity(2, 2);
    k.b = VectorXd::Zero(2);
    k.c = VectorXd::Zero(2);
    k.d = 1.0;
    p.add_cone(k);
    Eigen::RowVectorXd r(2);
    r << -1, 0;
    p.add_inequality(r, -2);
    CHECK(solve_socp(p).status == SocpStatus::infeasible);
}

TEST_CASE("unbounded LP is reported")
{
    SocpProblem u(2);
    u.cost << -1, 0;
    u.lower = VectorXd::Constant(2, 0.0);
    u.upper = VectorXd::Constant(2, std::numeric_limits<double>::infinity());
    CHECK(solve_socp(u).status == SocpStatus::unbounded);
}

TEST_CASE("random feasible instances: solution feasible and not beaten by the anchor point")
{
    // Constraints built around a known point x0 so that x0 is strictly feasible.
    for (std::uint64_t seed = 1; seed <= 10; ++seed)
    {
        Rng rng = make_stream(seed, {42});
        const int n = 6;
        const VectorXd x0 = VectorXd::NullaryExpr(n, [&] { return uniform(rng, -1, 1); });
        SocpProblem p(n);
        p.cost = VectorXd::NullaryExpr(n, [&] { return uniform(rng, -1, 1); });
        p.set_bounds(-3, 3);
        for (int c = 0; c < 3; ++c)
        {
            SecondOrderCone k;
            k.a = MatrixXd::NullaryExpr(3, n, [&] { return uniform(rng, -1, 1); });
            k.b = VectorXd::NullaryExpr(3, [&] { return uniform(rng, -1, 1); });
            k.c = VectorXd::NullaryExpr(n, [&] { return uniform(rng, -1, 1); });
            k.d = (k.a * x0 + k.b).norm() - k.c.dot(x0) + 0.5;
            p.add_cone(k);
        }
        const SocpSolution s = solve_socp(p);
        REQUIRE(s.status == SocpStatus::optimal);
        CHECK(max_violation(p, s.x) <= 1e-6);
        CHECK(s.objective_value <= p.cost.dot(x0) + 1e-7);
    }
}

TEST_CASE("JSON fixture round-trip preserves the solution")
{
    SocpProblem p = distance_to_line();
    p.lower = VectorXd::Constant(3, -std::numeric_limits<double>::infinity());
    p.upper = VectorXd::Constant(3, 5.0);
    const SocpProblem q = socp_from_json(socp_to_json(p));
    CHECK(q.num_vars == 3);
    CHECK(q.cost == p.cost);
    CHECK(q.cones.size() == 1);
    CHECK(std::isinf(q.lower(0)));
    const SocpSolution a = solve_socp(p);
    const SocpSolution b = solve_socp(q);
    CHECK(a.x == b.x);
}

TEST_CASE("shape mismatch is rejected")
{
    SocpProblem p(3);
    SecondOrderCone k;
    k.a = MatrixXd::Zero(2, 4);
    k.b = VectorXd::Zero(2);
    k.c = VectorXd::Zero(3);
    p.add_cone(k);
    CHECK_THROWS_AS(validate_problem(p), InvalidArgument);
    CHECK_THROWS_AS(solve_socp(p), InvalidArgument);
}
