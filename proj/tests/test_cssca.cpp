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

#include <cstring>
#include <memory>

#include "hmimos/channel.hpp"
#include "hmimos/cssca.hpp"
#include "hmimos/validation.hpp"

using namespace hmimos;

namespace
{
    struct Tiny
    {
        SurfacePanel tx = build_panel(4, 2.5e-3, kSpeedOfLight / 30e9, FeedLayout::grid(2));
        SurfacePanel rx = build_panel(2, 2.5e-3, kSpeedOfLight / 30e9, FeedLayout::center());
        StatisticalCsi stat;
        std::unique_ptr<ChannelSampler> sampler;
        LongTermProblem problem;
        CsscaConfig config;

        Tiny()
        {
            Scenario s;
            s.num_users = 2;
            Rng rng = make_stream(21, {tag(StreamTag::statistics)});
            stat = draw_statistical_csi(s, rng);
            sampler = std::make_unique<ChannelSampler>(stat, tx, rx);
            problem.sampler = sampler.get();
            const PhaseCoupling pc = phase_coupling(tx, rx);
            problem.theta = pc.theta;
            problem.beta = pc.beta;
            config.t_h = 2;
            config.n_iter = 12;
            config.convergence_window = 4;
            config.qos.delta = VectorXd::Constant(2, 0.5);
            config.qos.sigma2 = noise_power(s.noise_psd_dbm_hz, s.bandwidth_hz);
        }
    };

    CsscaEstimates estimate(double f0, double fu, double g)
    {
        CsscaEstimates e;
        e.f0 = f0;
        e.fu = VectorXd::Constant(2, fu);
        e.grad_alpha_f0 = VectorXd::Constant(3, g);
        e.grad_alpha_fu = MatrixXd::Constant(3, 2, g);
        e.grad_v_fu = MatrixXd::Constant(2, 2, g);
        return e;
    }
} // namespace

TEST_CASE("step sizes")
{
    const auto [rho1, gamma1] = step_sizes(1);
    CHECK(rho1 == doctest::Approx(0.6300).epsilon(1e-4));
    CHECK(gamma1 == doctest::Approx(2.0 / 3.0));
    CHECK(step_sizes(6).second == doctest::Approx(0.25));
    CHECK(step_sizes(7).first == doctest::Approx(0.25));
    CHECK_THROWS_AS(step_sizes(0), InvalidArgument);

    // gamma decays faster than rho.
    for (int t = 1; t < 500; t += 7)
    {
        const auto [r, g] = step_sizes(t);
        const auto [r2, g2] = step_sizes(t + 1);
        CHECK(r2 < r);
        CHECK(g2 < g);
        if (t > 20)
            CHECK(g / r < step_sizes(t - 10).second / step_sizes(t - 10).first);
    }
}

TEST_CASE("estimate update is a convex combination")
{
    const CsscaEstimates prev = estimate(2.0, -1.0, 0.5);
    const CsscaEstimates batch = estimate(4.0, 1.0, -0.5);

    const CsscaEstimates keep = update_estimates(prev, batch, 0.0);
    CHECK(keep.f0 == 2.0);
    CHECK(keep.grad_v_fu == prev.grad_v_fu);

    const CsscaEstimates take = update_estimates(prev, batch, 1.0);
    CHECK(take.f0 == 4.0);
    CHECK(take.fu == batch.fu);

    const CsscaEstimates half = update_estimates(prev, batch, 0.25);
    CHECK(half.f0 == doctest::Approx(2.5));
    CHECK(half.fu(1) == doctest::Approx(-0.5));
    CHECK(half.grad_alpha_fu(2, 1) == doctest::Approx(0.25));

    CHECK_THROWS_AS(update_estimates(prev, batch, 1.5), InvalidArgument);
}

TEST_CASE("surrogates are tight at the expansion point")
{
    const BeampatternState x0{VectorXd::Constant(3, 0.4), MatrixXd::Constant(2, 2, 0.6)};
    const CsscaEstimates e = estimate(3.0, -0.2, 0.1);
    const Surrogates s = build_surrogates(x0, e, 0.01, 0.02, 3.0);
    CHECK(s.objective(x0) == doctest::Approx(1.0));
    CHECK(s.constraint(0, x0) == doctest::Approx(-0.2));
    CHECK_THROWS_AS(build_surrogates(x0, e, 0.0, 0.02), InvalidArgument);

    // Ball form agrees with the quadratic.
    for (int u = 0; u < 2; ++u)
    {
        const Ball b = constraint_ball(s, u);
        BeampatternState x = x0;
        x.alpha(1) = 0.9;
        x.v(0, u) = 0.1;
        VectorXd z(5);
        z << x.alpha, x.v.col(u);
        CHECK(s.constraint(u, x) == doctest::Approx(s.eps_u * ((z - b.center).squaredNorm() - b.radius2)));
    }
}

TEST_CASE("surrogate solution stays in the box and satisfies the constraints")
{
    const BeampatternState x0{VectorXd::Constant(3, 0.5), MatrixXd::Constant(2, 2, 0.5)};
    // Constraint balls of radius sqrt(10) contain the whole box.
    CsscaEstimates e = estimate(1.0, -1.0, 0.0);
    e.grad_alpha_f0 << 1.0, -1.0, 0.2;
    const Surrogates s = build_surrogates(x0, e, 0.1, 0.1);
    const SurrogateSolution sol = solve_surrogate(s);
    CHECK_FALSE(sol.restored);
    CHECK(sol.point.alpha.minCoeff() >= 0.0);
    CHECK(sol.point.alpha.maxCoeff() <= 1.0);
    CHECK(sol.max_constraint <= 1e-6);
    // The minimizer is the clipped proximal step alpha0 - g / (2 eps0).
    CHECK(sol.point.alpha(0) == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(sol.point.alpha(1) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(sol.point.alpha(2) == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("empty constraint set triggers restoration")
{
    const BeampatternState x0{VectorXd::Constant(3, 0.5), MatrixXd::Constant(2, 2, 0.5)};
    const CsscaEstimates e = estimate(1.0, 5.0, 0.0);
    const SurrogateSolution sol = solve_surrogate(build_surrogates(x0, e, 0.1, 0.1));
    CHECK(sol.restored);
    CHECK(sol.max_constraint == doctest::Approx(5.0).epsilon(1e-6));
}

TEST_CASE("convergence iteration")
{
    const std::vector<double> flat(20, 1.0);
    CHECK(convergence_iteration(flat, 5, 0.01) == 6);

    std::vector<double> decay;
    for (int t = 0; t < 40; ++t)
        decay.push_back(t < 20 ? 10.0 - 0.4 * t : 2.0);
    // Index 25 is the first whose reference lies on the plateau; iterations count from 1.
    CHECK(convergence_iteration(decay, 5, 0.01) == 26);

    std::vector<double> late = flat;
    late.back() = 2.0;
    CHECK(convergence_iteration(late, 5, 0.01) == -1);
    CHECK(convergence_iteration(flat, 20, 0.01) == -1);
}

TEST_CASE("analytic gradients match finite differences")
{
    ValidationOptions opt;
    opt.gradient_points = 10;
    const CheckResult r = check_gradients(opt);
    CHECK_MESSAGE(r.passed, r.detail);
}

TEST_CASE("long-term run: box, determinism, serial equals parallel")
{
    Tiny a;
    const LongTermResult par = run_long_term(a.config, a.problem, 5);
    REQUIRE(par.trajectory.size() == 12);
    const BeampatternState &s = par.final_state.state;
    CHECK(s.alpha.minCoeff() >= 0.0);
    CHECK(s.alpha.maxCoeff() <= 1.0);
    CHECK(s.v.minCoeff() >= 0.0);
    CHECK(s.v.maxCoeff() <= 1.0);
    CHECK(par.trajectory.front().rho == 1.0);
    CHECK(par.trajectory[5].gamma == doctest::Approx(0.25));

    Tiny b;
    b.config.execution = ExecutionPolicy::serial;
    const LongTermResult ser = run_long_term(b.config, b.problem, 5);
    CHECK(std::memcmp(ser.final_state.state.alpha.data(), s.alpha.data(), sizeof(double) * s.alpha.size()) == 0);
    CHECK(std::memcmp(ser.final_state.state.v.data(), s.v.data(), sizeof(double) * s.v.size()) == 0);
    for (std::size_t t = 0; t < par.trajectory.size(); ++t)
        CHECK(ser.trajectory[t].f0_hat_w == par.trajectory[t].f0_hat_w);

    const LongTermResult other = run_long_term(a.config, a.problem, 6);
    CHECK(other.final_state.state.alpha != s.alpha);
}

TEST_CASE("frozen variables keep their initial value")
{
    Tiny a;
    a.config.optimize_alpha = false;
    a.config.n_iter = 4;
    const BeampatternState init = random_state(16, 4, 2, 9);
    const LongTermResult r = run_long_term(a.config, a.problem, 9, init);
    CHECK(r.final_state.state.alpha == init.alpha);
    CHECK(r.final_state.state.v != init.v);
}

TEST_CASE("config validation")
{
    Tiny a;
    a.config.t_h = 0;
    CHECK_THROWS_AS(validate_cssca_config(a.config), InvalidArgument);
    Tiny b;
    b.config.qos.delta = VectorXd::Ones(3);
    CHECK_THROWS_AS(run_long_term(b.config, b.problem, 1), InvalidArgument);
}
