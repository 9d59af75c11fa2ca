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

#include "hmimos/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hmimos/experiments.hpp"

namespace hmimos
{
    namespace
    {
        // A random operating point on the reduced geometry.
        struct Point
        {
            BeampatternState state;
            Precoder w;
            ChannelRealization h;
            QosSpec qos;
        };

        const Setup &ci_setup()
        {
            static const Setup setup = make_setup(profile_config("ci"));
            return setup;
        }

        Point random_point(const Setup &setup, Rng &rng)
        {
            const int n = setup.tx.num_elements();
            const int m = setup.rx.num_elements();
            const int k = setup.tx.num_feeds();
            const int u_count = setup.config.scenario.num_users;
            Point p;
            p.state.alpha.resize(n);
            for (int i = 0; i < n; ++i)
                p.state.alpha(i) = uniform(rng, 0.05, 1.0);
            p.state.v.resize(m, u_count);
            for (Eigen::Index i = 0; i < p.state.v.size(); ++i)
                p.state.v(i) = uniform(rng, 0.05, 1.0);
            p.h = sample_channel(draw_statistical_csi(setup.config.scenario, rng), setup.tx, setup.rx, rng);
            p.qos = make_qos(setup.config);
            for (int u = 0; u < u_count; ++u)
                p.qos.delta(u) = uniform(rng, 0.5, 3.0);
            p.w.w.resize(k, u_count);
            for (Eigen::Index i = 0; i < p.w.w.size(); ++i)
                p.w.w(i) = complex_gaussian(rng, 1.0);
            // Put the SINRs in a moderate range.
            const MatrixXcd s =
                effective_gain_matrix(p.state, setup.coupling.theta, setup.coupling.beta, p.h) * p.w.w;
            const double signal = s.diagonal().cwiseAbs2().mean();
            const double noise = p.state.v.colwise().squaredNorm().mean() * p.qos.sigma2;
            p.w.w *= std::sqrt(5.0 * noise / signal);
            return p;
        }

        double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

        std::string describe(double worst, double tol)
        {
            std::ostringstream os;
            os << "worst " << worst << " (tolerance " << tol << ")";
            return os.str();
        }

        CheckResult finish(const std::string &name, double worst, double tol, std::string extra = {})
        {
            CheckResult r;
            r.name = name;
            r.worst = worst;
            r.tolerance = tol;
            r.passed = worst < tol;
            r.detail = describe(worst, tol) + (extra.empty() ? "" : "; " + extra);
            return r;
        }

        ShortTermInstance random_instance(Rng &rng)
        {
            const int k = rng() % 2 == 0 ? 2 : 3;
            const int u_count = rng() % 2 == 0 ? 1 : 2;
            const int n = k + 2 + static_cast<int>(rng() % 3);
            ShortTermInstance inst;
            inst.d_matrix.resize(n, k);
            for (Eigen::Index i = 0; i < inst.d_matrix.size(); ++i)
                inst.d_matrix(i) = complex_gaussian(rng, 1.0);
            inst.eta.resize(u_count);
            inst.sigma_bar.resize(u_count);
            for (int u = 0; u < u_count; ++u)
            {
                VectorXcd h(n);
                for (int i = 0; i < n; ++i)
                    h(i) = complex_gaussian(rng, 1.0);
                inst.eff_channels.push_back(h);
                inst.eta(u) = uniform(rng, 0.5, 4.0);
                inst.sigma_bar(u) = uniform(rng, 0.1, 1.0);
            }
            return inst;
        }
    } // namespace

    double duality_min_power(const ShortTermInstance &inst, bool &feasible)
    {
        const int k = inst.num_feeds();
        const Eigen::SelfAdjointEigenSolver<MatrixXcd> es(inst.d_matrix.adjoint() * inst.d_matrix);
        require(es.eigenvalues().minCoeff() > 0.0, "duality_min_power: D must have full column rank");
        const MatrixXcd r_inv = es.eigenvectors() * es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                                es.eigenvectors().adjoint();

        std::vector<VectorXcd> c;
        std::vector<double> eta;
        for (int u = 0; u < inst.num_users(); ++u)
            if (inst.eta(u) > 0.0)
            {
                c.push_back(r_inv * (inst.d_matrix.adjoint() * inst.eff_channels[u]) / inst.sigma_bar(u));
                eta.push_back(inst.eta(u));
            }
        feasible = true;
        if (c.empty())
            return 0.0;

        VectorXd lambda = VectorXd::Zero(static_cast<Eigen::Index>(c.size()));
        for (int it = 0; it < 200000; ++it)
        {
            MatrixXcd mat = MatrixXcd::Identity(k, k);
            for (std::size_t j = 0; j < c.size(); ++j)
                mat += lambda(j) * c[j] * c[j].adjoint();
            const Eigen::LDLT<MatrixXcd> ldlt(mat);
            VectorXd next(lambda.size());
            for (std::size_t u = 0; u < c.size(); ++u)
                next(u) = 1.0 / ((1.0 + 1.0 / eta[u]) * std::real(c[u].dot(ldlt.solve(c[u]))));
            const double change = ((next - lambda).cwiseAbs().array() / next.array()).maxCoeff();
            lambda = next;
            if (!std::isfinite(lambda.sum()) || lambda.sum() > 1e15)
                break;
            if (change < 1e-14)
                return lambda.sum();
        }
        feasible = false;
        return std::numeric_limits<double>::infinity();
    }

    ShortTermInstance colinear_instance()
    {
        ShortTermInstance inst;
        inst.d_matrix = MatrixXcd::Identity(3, 3);
        VectorXcd h(3);
        h << 1.0, 0.5, 0.2;
        inst.eff_channels = {h, h};
        inst.eta = VectorXd::Ones(2);
        inst.sigma_bar = VectorXd::Ones(2);
        return inst;
    }

    CheckResult check_gradients(const ValidationOptions &options)
    {
        const Setup &setup = ci_setup();
        const MatrixXcd &theta = setup.coupling.theta;
        const VectorXcd &beta = setup.coupling.beta;
        Rng rng = make_stream(options.seed, {11});
        const double step = 1e-6;
        double worst = 0.0;
        for (int p = 0; p < options.gradient_points; ++p)
        {
            const Point pt = random_point(setup, rng);
            SampleGradients g = sample_gradients(pt.state, pt.w, pt.h, theta, beta, pt.qos);
            if (options.perturb_gradient)
                g.d_alpha_g0(0) *= 1.0 + 1e-3;
            const int n = static_cast<int>(pt.state.alpha.size());
            const int m = static_cast<int>(pt.state.v.rows());
            const int u_count = static_cast<int>(pt.state.v.cols());

            VectorXd fd_g0(n);
            MatrixXd fd_gu(n, u_count), fd_v(m, u_count);
            for (int i = 0; i < n; ++i)
            {
                BeampatternState plus = pt.state, minus = pt.state;
                plus.alpha(i) += step;
                minus.alpha(i) -= step;
                const SampleValues a = sample_objective_and_constraints(plus, pt.w, pt.h, theta, beta, pt.qos);
                const SampleValues b = sample_objective_and_constraints(minus, pt.w, pt.h, theta, beta, pt.qos);
                fd_g0(i) = (a.g0 - b.g0) / (2.0 * step);
                fd_gu.row(i) = ((a.gu - b.gu) / (2.0 * step)).transpose();
            }
            for (int u = 0; u < u_count; ++u)
                for (int i = 0; i < m; ++i)
                {
                    BeampatternState plus = pt.state, minus = pt.state;
                    plus.v(i, u) += step;
                    minus.v(i, u) -= step;
                    const SampleValues a = sample_objective_and_constraints(plus, pt.w, pt.h, theta, beta, pt.qos);
                    const SampleValues b = sample_objective_and_constraints(minus, pt.w, pt.h, theta, beta, pt.qos);
                    fd_v(i, u) = (a.gu(u) - b.gu(u)) / (2.0 * step);
                }
            worst = std::max(worst, (g.d_alpha_g0 - fd_g0).norm() / fd_g0.norm());
            for (int u = 0; u < u_count; ++u)
            {
                worst = std::max(worst, (g.d_alpha_gu.col(u) - fd_gu.col(u)).norm() / fd_gu.col(u).norm());
                worst = std::max(worst, (g.d_v_gu.col(u) - fd_v.col(u)).norm() / fd_v.col(u).norm());
            }
        }
        return finish("gradients vs central differences", worst, 1e-5,
                      std::to_string(options.gradient_points) + " points");
    }

    CheckResult check_power_identity(const ValidationOptions &options)
    {
        const Setup &setup = ci_setup();
        Rng rng = make_stream(options.seed, {12});
        double worst = 0.0;
        for (int p = 0; p < options.identity_points; ++p)
        {
            const Point pt = random_point(setup, rng);
            const double sum = transmit_power(pt.state, pt.w, setup.coupling.theta);
            const double trace = transmit_power_trace(pt.state, pt.w, setup.coupling.theta);
            worst = std::max(worst, rel(trace, sum));
        }
        return finish("trace and sum power forms agree", worst, 1e-10);
    }

    CheckResult check_sinr_forms(const ValidationOptions &options)
    {
        const Setup &setup = ci_setup();
        Rng rng = make_stream(options.seed, {13});
        double worst = 0.0;
        for (int p = 0; p < options.identity_points; ++p)
        {
            const Point pt = random_point(setup, rng);
            for (int u = 0; u < pt.h.num_users(); ++u)
            {
                const double a = sinr(u, pt.state, pt.w, pt.h, setup.coupling.theta, setup.coupling.beta, pt.qos);
                const double b =
                    sinr_matrix_form(u, pt.state, pt.w, pt.h, setup.coupling.theta, setup.coupling.beta, pt.qos);
                worst = std::max(worst, rel(a, b));
            }
        }
        return finish("diagonal and matrix SINR forms agree", worst, 1e-12);
    }

    CheckResult check_update_box(const ValidationOptions &options)
    {
        const Setup &setup = ci_setup();
        const Interval iv = make_interval(setup, 0);
        double worst = 0.0;
        for (int n_iter = 1; n_iter <= 4; ++n_iter)
        {
            CsscaConfig cfg = cssca_for(setup, make_qos(setup.config));
            cfg.n_iter = n_iter;
            const LongTermResult res = run_long_term(cfg, iv.problem(setup), options.seed);
            const BeampatternState &s = res.final_state.state;
            for (const double x : {s.alpha.minCoeff(), s.v.minCoeff()})
                worst = std::max(worst, -x);
            for (const double x : {s.alpha.maxCoeff(), s.v.maxCoeff()})
                worst = std::max(worst, x - 1.0);
        }
        CheckResult r = finish("iterates stay inside [0,1]", worst, 0.0);
        r.passed = worst <= 0.0;
        return r;
    }

    CheckResult check_surrogate_consistency(const ValidationOptions &options)
    {
        Rng rng = make_stream(options.seed, {14});
        double worst = 0.0;
        for (int p = 0; p < options.identity_points; ++p)
        {
            const int n = 12, m = 5, u_count = 3;
            BeampatternState x;
            x.alpha = VectorXd::NullaryExpr(n, [&] { return uniform(rng, 0.0, 1.0); });
            x.v = MatrixXd::NullaryExpr(m, u_count, [&] { return uniform(rng, 0.0, 1.0); });
            CsscaEstimates est;
            est.f0 = uniform(rng, 0.1, 10.0);
            est.fu = VectorXd::NullaryExpr(u_count, [&] { return uniform(rng, -2.0, 2.0); });
            est.grad_alpha_f0 = VectorXd::NullaryExpr(n, [&] { return uniform(rng, -1.0, 1.0); });
            est.grad_alpha_fu = MatrixXd::NullaryExpr(n, u_count, [&] { return uniform(rng, -1.0, 1.0); });
            est.grad_v_fu = MatrixXd::NullaryExpr(m, u_count, [&] { return uniform(rng, -1.0, 1.0); });
            const Surrogates s = build_surrogates(x, est, 0.01, 0.01);
            worst = std::max(worst, std::abs(s.objective(x) - est.f0));
            for (int u = 0; u < u_count; ++u)
                worst = std::max(worst, std::abs(s.constraint(u, x) - est.fu(u)));
        }
        CheckResult r = finish("surrogates equal the estimates at the expansion point", worst, 0.0);
        r.passed = worst == 0.0;
        return r;
    }

    CheckResult check_socp_oracle(const ValidationOptions &options)
    {
        Rng rng = make_stream(options.seed, {15});
        double worst = 0.0;
        int failures = 0;
        for (int p = 0; p < options.socp_instances; ++p)
        {
            const ShortTermInstance inst = random_instance(rng);
            bool feasible = false;
            const double oracle = duality_min_power(inst, feasible);
            const PrecoderResult res = solve_precoder(inst);
            if (!feasible || !res.ok())
            {
                ++failures;
                worst = std::numeric_limits<double>::infinity();
                continue;
            }
            worst = std::max(worst, rel(res.power, oracle));
        }
        return finish("precoder matches the duality optimum", worst, 1e-3,
                      std::to_string(options.socp_instances) + " instances, " + std::to_string(failures) +
                          " not solved");
    }

    CheckResult check_constraint_activeness(const ValidationOptions &options)
    {
        Rng rng = make_stream(options.seed, {15});
        double worst = 0.0;
        for (int p = 0; p < options.socp_instances; ++p)
        {
            const ShortTermInstance inst = random_instance(rng);
            const PrecoderResult res = solve_precoder(inst);
            if (!res.ok())
            {
                worst = std::numeric_limits<double>::infinity();
                continue;
            }
            const VectorXd s = instance_sinr(inst, res.precoder);
            for (int u = 0; u < inst.num_users(); ++u)
                worst = std::max(worst, rel(s(u), inst.eta(u)));
        }
        return finish("SINR constraints active at the optimum", worst, 1e-4);
    }

    CheckResult check_colinear_infeasible(const ValidationOptions &)
    {
        const PrecoderResult res = solve_precoder(colinear_instance());
        CheckResult r;
        r.name = "colinear channels certified infeasible";
        r.passed = res.status == PrecoderStatus::infeasible;
        r.detail = std::string("status ") + to_string(res.status);
        return r;
    }

    CheckResult check_quantizer(const ValidationOptions &options)
    {
        Rng rng = make_stream(options.seed, {16});
        double worst = 0.0;
        std::string why;
        const auto fail = [&](const std::string &w) {
            worst = std::numeric_limits<double>::infinity();
            if (why.empty())
                why = w;
        };
        for (const int bits : {1, 2, 3, 4, 6, 8, 16})
        {
            const QuantSpec spec{255.0, bits};
            if (mu_law_quantize(0.0, spec) != 0.0 || mu_law_quantize(1.0, spec) != 1.0)
                fail("endpoints not preserved");
            std::vector<double> xs(1000);
            for (double &x : xs)
                x = uniform(rng, 0.0, 1.0);
            std::sort(xs.begin(), xs.end());
            double prev = -1.0;
            for (const double x : xs)
            {
                const double q = mu_law_quantize(x, spec);
                if (mu_law_quantize(q, spec) != q)
                    fail("not idempotent");
                if (q < prev)
                    fail("not monotone");
                prev = q;
                if (bits == 16)
                    worst = std::max(worst, std::abs(q - x));
            }
        }
        if (std::abs(mu_law_compress(0.5, 255.0) - std::log(128.5) / std::log(256.0)) > 1e-15)
            fail("compress(0.5) wrong");
        CheckResult r = finish("mu-law quantizer properties", worst, 1e-3, why);
        return r;
    }

    std::vector<CheckResult> run_validation(const ValidationOptions &options)
    {
        return {check_gradients(options),         check_power_identity(options),
                check_sinr_forms(options),        check_update_box(options),
                check_surrogate_consistency(options), check_socp_oracle(options),
                check_constraint_activeness(options), check_colinear_infeasible(options),
                check_quantizer(options)};
    }
} // namespace hmimos
