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

#include "hmimos/cssca.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hmimos/batch.hpp"

namespace hmimos
{
    void validate_cssca_config(const CsscaConfig &c)
    {
        require(c.t_h >= 1, "cssca: t_h must be >= 1");
        require(c.eps0 > 0.0 && c.eps_u > 0.0, "cssca: proximal constants must be positive");
        require(c.n_iter >= 1, "cssca: n_iter must be >= 1");
        require(c.convergence_window >= 1, "cssca: convergence window must be >= 1");
        validate_qos(c.qos);
    }

    std::pair<double, double> step_sizes(int t)
    {
        require(t >= 1, "step_sizes: t must be >= 1");
        const double td = static_cast<double>(t);
        return {std::pow(1.0 + td, -2.0 / 3.0), 2.0 / (2.0 + td)};
    }

    SampleValues sample_objective_and_constraints(const BeampatternState &state, const Precoder &w,
                                                  const ChannelRealization &h, const MatrixXcd &theta,
                                                  const VectorXcd &beta, const QosSpec &qos)
    {
        const SlotMetrics m = evaluate_slot(state, w, h, theta, beta, qos);
        return {m.power, qos.delta - m.se};
    }

    SampleGradients sample_gradients(const BeampatternState &state, const Precoder &w, const ChannelRealization &h,
                                     const MatrixXcd &theta, const VectorXcd &beta, const QosSpec &qos)
    {
        const Eigen::Index n = state.alpha.size();
        const Eigen::Index m = beta.size();
        const int num_users = h.num_users();
        require(w.w.cols() == num_users && state.v.cols() == num_users, "sample_gradients: user count mismatch");

        const MatrixXcd tw = theta * w.w; // column u' = Theta w_u'
        const VectorXcd alpha_c = state.alpha.cast<cplx>();

        SampleGradients g;
        g.d_alpha_g0 = 2.0 * state.alpha.cwiseProduct(tw.cwiseAbs2().rowwise().sum());
        g.d_alpha_gu = MatrixXd::Zero(n, num_users);
        g.d_v_gu = MatrixXd::Zero(m, num_users);

        // Column u' = H_u (alpha .* Theta w_u'), shared by every v_u gradient.
        const MatrixXcd atw = alpha_c.asDiagonal() * tw;
        const double inv_ln2 = 1.0 / std::log(2.0);

        for (int u = 0; u < num_users; ++u)
        {
            const VectorXcd hu = effective_rx_channel(u, state, beta, h);
            const VectorXcd hu_c = hu.conjugate();
            const MatrixXcd hat = h.h[u] * atw; // M x U

            double total = state.v.col(u).squaredNorm() * qos.sigma2;
            VectorXd grad_alpha_total = VectorXd::Zero(n);
            VectorXd grad_v_total = 2.0 * qos.sigma2 * state.v.col(u);
            VectorXd grad_alpha_signal = VectorXd::Zero(n);
            VectorXd grad_v_signal = VectorXd::Zero(m);
            double signal = 0.0;

            for (int up = 0; up < num_users; ++up)
            {
                const VectorXcd ds_dalpha = hu_c.cwiseProduct(tw.col(up));
                const cplx s = alpha_c.dot(ds_dalpha); // alpha is real, so dot() adds no conjugate
                const VectorXcd ds_dv = beta.cwiseProduct(hat.col(up));
                const VectorXd ga = 2.0 * (std::conj(s) * ds_dalpha).real();
                const VectorXd gv = 2.0 * (std::conj(s) * ds_dv).real();
                total += std::norm(s);
                grad_alpha_total += ga;
                grad_v_total += gv;
                if (up == u)
                {
                    signal = std::norm(s);
                    grad_alpha_signal = ga;
                    grad_v_signal = gv;
                }
            }
            const double rest = total - signal;
            if (!(rest > 0.0) || !(total > 0.0))
                continue;
            // g_u = delta_u - log2(total / rest)
            g.d_alpha_gu.col(u) =
                -inv_ln2 * (grad_alpha_total / total - (grad_alpha_total - grad_alpha_signal) / rest);
            g.d_v_gu.col(u) = -inv_ln2 * (grad_v_total / total - (grad_v_total - grad_v_signal) / rest);
        }
        return g;
    }

    CsscaEstimates update_estimates(const CsscaEstimates &prev, const CsscaEstimates &batch, double rho)
    {
        require(rho >= 0.0 && rho <= 1.0, "update_estimates: rho must lie in [0,1]");
        CsscaEstimates e;
        e.f0 = (1.0 - rho) * prev.f0 + rho * batch.f0;
        e.fu = (1.0 - rho) * prev.fu + rho * batch.fu;
        e.grad_alpha_f0 = (1.0 - rho) * prev.grad_alpha_f0 + rho * batch.grad_alpha_f0;
        e.grad_alpha_fu = (1.0 - rho) * prev.grad_alpha_fu + rho * batch.grad_alpha_fu;
        e.grad_v_fu = (1.0 - rho) * prev.grad_v_fu + rho * batch.grad_v_fu;
        return e;
    }

    Surrogates build_surrogates(const BeampatternState &expansion, const CsscaEstimates &est, double eps0,
                                double eps_u, double objective_scale)
    {
        require(eps0 > 0.0 && eps_u > 0.0, "build_surrogates: proximal constants must be positive");
        require(objective_scale > 0.0, "build_surrogates: objective scale must be positive");
        Surrogates s;
        s.alpha0 = expansion.alpha;
        s.v0 = expansion.v;
        s.f0 = est.f0 / objective_scale;
        s.grad_alpha_f0 = est.grad_alpha_f0 / objective_scale;
        s.fu = est.fu;
        s.grad_alpha_fu = est.grad_alpha_fu;
        s.grad_v_fu = est.grad_v_fu;
        s.eps0 = eps0;
        s.eps_u = eps_u;
        return s;
    }

    double Surrogates::objective(const BeampatternState &x) const
    {
        const VectorXd da = x.alpha - alpha0;
        double val = f0 + grad_alpha_f0.dot(da) + eps0 * da.squaredNorm();
        if (optimize_v)
            val += eps0 * (x.v - v0).squaredNorm();
        return val;
    }

    double Surrogates::constraint(int u, const BeampatternState &x) const
    {
        const VectorXd da = x.alpha - alpha0;
        const VectorXd dv = x.v.col(u) - v0.col(u);
        return fu(u) + grad_alpha_fu.col(u).dot(da) + grad_v_fu.col(u).dot(dv) +
               eps_u * (da.squaredNorm() + dv.squaredNorm());
    }

    Ball constraint_ball(const Surrogates &s, int u)
    {
        const Eigen::Index n = s.alpha0.size();
        const Eigen::Index m = s.v0.rows();
        VectorXd x0(n + m), g(n + m);
        x0 << s.alpha0, s.v0.col(u);
        g << s.grad_alpha_fu.col(u), s.grad_v_fu.col(u);
        Ball b;
        b.center = x0 - g / (2.0 * s.eps_u);
        b.radius2 = g.squaredNorm() / (4.0 * s.eps_u * s.eps_u) - s.fu(u) / s.eps_u;
        return b;
    }

    namespace
    {
        // Variable layout of the surrogate programs.
        struct SurrogateLayout
        {
            int n_alpha = 0;
            int m = 0;
            int num_users = 0;
            int alpha_off = -1;
            int v_off = -1;
            int r = -1; // proximal epigraph
            int s = -1; // margin variable (restoration only)
            int total = 0;

            int v_index(int u, int i) const { return v_off + u * m + i; }
        };

        SurrogateLayout make_layout(const Surrogates &sg, bool with_margin)
        {
            SurrogateLayout lay;
            lay.n_alpha = static_cast<int>(sg.alpha0.size());
            lay.m = static_cast<int>(sg.v0.rows());
            lay.num_users = sg.num_users();
            int next = 0;
            if (sg.optimize_alpha)
            {
                lay.alpha_off = next;
                next += lay.n_alpha;
            }
            if (sg.optimize_v)
            {
                lay.v_off = next;
                next += lay.m * lay.num_users;
            }
            lay.r = next++;
            if (with_margin)
                lay.s = next++;
            lay.total = next;
            return lay;
        }

        // eps ||d||^2 <= L with d the deviation of the selected variables and
        // L = coef^T x + constant, as ||(2 sqrt(eps) d, L - 1)|| <= L + 1.
        SecondOrderCone rotated_cone(const SurrogateLayout &lay, const std::vector<int> &vars,
                                     const VectorXd &expansion, double eps, const VectorXd &l_coef, double l_const)
        {
            const int k = static_cast<int>(vars.size());
            SecondOrderCone cone;
            cone.a = MatrixXd::Zero(k + 1, lay.total);
            cone.b = VectorXd::Zero(k + 1);
            const double f = 2.0 * std::sqrt(eps);
            for (int i = 0; i < k; ++i)
            {
                cone.a(i, vars[i]) = f;
                cone.b(i) = -f * expansion(i);
            }
            cone.a.row(k) = l_coef.transpose();
            cone.b(k) = l_const - 1.0;
            cone.c = l_coef;
            cone.d = l_const + 1.0;
            return cone;
        }

        struct Selection
        {
            std::vector<int> vars;
            VectorXd expansion;
        };

        Selection proximal_selection(const Surrogates &sg, const SurrogateLayout &lay)
        {
            Selection sel;
            std::vector<double> x0;
            if (sg.optimize_alpha)
                for (int i = 0; i < lay.n_alpha; ++i)
                {
                    sel.vars.push_back(lay.alpha_off + i);
                    x0.push_back(sg.alpha0(i));
                }
            if (sg.optimize_v)
                for (int u = 0; u < lay.num_users; ++u)
                    for (int i = 0; i < lay.m; ++i)
                    {
                        sel.vars.push_back(lay.v_index(u, i));
                        x0.push_back(sg.v0(i, u));
                    }
            sel.expansion = Eigen::Map<VectorXd>(x0.data(), static_cast<Eigen::Index>(x0.size()));
            return sel;
        }

        // Cone for fu_bar <= s (with_margin) or fu_bar <= 0.
        SecondOrderCone user_cone(const Surrogates &sg, const SurrogateLayout &lay, int u)
        {
            Selection sel;
            std::vector<double> x0;
            VectorXd l_coef = VectorXd::Zero(lay.total);
            double l_const = -sg.fu(u);
            if (sg.optimize_alpha)
                for (int i = 0; i < lay.n_alpha; ++i)
                {
                    const int idx = lay.alpha_off + i;
                    sel.vars.push_back(idx);
                    x0.push_back(sg.alpha0(i));
                    l_coef(idx) = -sg.grad_alpha_fu(i, u);
                    l_const += sg.grad_alpha_fu(i, u) * sg.alpha0(i);
                }
            if (sg.optimize_v)
                for (int i = 0; i < lay.m; ++i)
                {
                    const int idx = lay.v_index(u, i);
                    sel.vars.push_back(idx);
                    x0.push_back(sg.v0(i, u));
                    l_coef(idx) = -sg.grad_v_fu(i, u);
                    l_const += sg.grad_v_fu(i, u) * sg.v0(i, u);
                }
            if (lay.s >= 0)
                l_coef(lay.s) = 1.0;
            sel.expansion = Eigen::Map<VectorXd>(x0.data(), static_cast<Eigen::Index>(x0.size()));
            return rotated_cone(lay, sel.vars, sel.expansion, sg.eps_u, l_coef, l_const);
        }

        SocpProblem surrogate_program(const Surrogates &sg, const SurrogateLayout &lay, bool margin)
        {
            SocpProblem p(lay.total);
            p.lower = VectorXd::Constant(lay.total, -std::numeric_limits<double>::infinity());
            p.upper = VectorXd::Constant(lay.total, std::numeric_limits<double>::infinity());
            if (sg.optimize_alpha)
            {
                p.lower.segment(lay.alpha_off, lay.n_alpha).setZero();
                p.upper.segment(lay.alpha_off, lay.n_alpha).setOnes();
            }
            if (sg.optimize_v)
            {
                p.lower.segment(lay.v_off, lay.m * lay.num_users).setZero();
                p.upper.segment(lay.v_off, lay.m * lay.num_users).setOnes();
            }

            const Selection prox = proximal_selection(sg, lay);
            VectorXd r_coef = VectorXd::Zero(lay.total);
            r_coef(lay.r) = 1.0;

            if (margin)
            {
                p.cost(lay.s) = 1.0;
                p.cost(lay.r) = 1e-3;
                p.add_cone(rotated_cone(lay, prox.vars, prox.expansion, 1.0, r_coef, 0.0));
            }
            else
            {
                // min f0 + g^T (alpha - alpha0) + r,  eps0 ||d||^2 <= r
                p.cost(lay.r) = 1.0;
                for (int i = 0; i < lay.n_alpha; ++i)
                    p.cost(lay.alpha_off + i) = sg.grad_alpha_f0(i);
                p.add_cone(rotated_cone(lay, prox.vars, prox.expansion, sg.eps0, r_coef, 0.0));
            }
            for (int u = 0; u < lay.num_users; ++u)
                p.add_cone(user_cone(sg, lay, u));
            return p;
        }

        BeampatternState extract_point(const Surrogates &sg, const SurrogateLayout &lay, const VectorXd &x)
        {
            BeampatternState out{sg.alpha0, sg.v0};
            if (sg.optimize_alpha)
                out.alpha = x.segment(lay.alpha_off, lay.n_alpha).cwiseMax(0.0).cwiseMin(1.0);
            if (sg.optimize_v)
                for (int u = 0; u < lay.num_users; ++u)
                    out.v.col(u) = x.segment(lay.v_off + u * lay.m, lay.m).cwiseMax(0.0).cwiseMin(1.0);
            return out;
        }

        double max_constraint(const Surrogates &sg, const BeampatternState &x)
        {
            double worst = -std::numeric_limits<double>::infinity();
            for (int u = 0; u < sg.num_users(); ++u)
                worst = std::max(worst, sg.constraint(u, x));
            return worst;
        }
    } // namespace

    SurrogateSolution solve_surrogate(const Surrogates &sg, const SocpOptions &options)
    {
        require(sg.alpha0.size() == sg.grad_alpha_f0.size(), "solve_surrogate: gradient length mismatch");
        require(sg.grad_alpha_fu.cols() == sg.num_users() && sg.grad_v_fu.cols() == sg.num_users() &&
                    sg.v0.cols() == sg.num_users(),
                "solve_surrogate: user count mismatch");

        SurrogateSolution out;
        if (!sg.optimize_alpha && !sg.optimize_v)
        {
            out.point = {sg.alpha0, sg.v0};
            out.max_constraint = max_constraint(sg, out.point);
            return out;
        }

        if (sg.optimize_alpha)
        {
            bool maybe_feasible = true;
            for (int u = 0; u < sg.num_users(); ++u)
                maybe_feasible = maybe_feasible && constraint_ball(sg, u).radius2 >= 0.0;
            if (maybe_feasible)
            {
                const SurrogateLayout lay = make_layout(sg, false);
                const SocpSolution sol = solve_socp(surrogate_program(sg, lay, false), options);
                out.status = sol.status;
                if (sol.status == SocpStatus::optimal)
                {
                    out.point = extract_point(sg, lay, sol.x);
                    out.max_constraint = max_constraint(sg, out.point);
                    return out;
                }
            }
            out.restored = true;
        }

        const SurrogateLayout lay = make_layout(sg, true);
        const SocpSolution sol = solve_socp(surrogate_program(sg, lay, true), options);
        out.status = sol.status;
        if (sol.status != SocpStatus::optimal)
            throw SolverError(std::string("solve_surrogate: margin program ended with status ") +
                              to_string(sol.status));
        out.point = extract_point(sg, lay, sol.x);
        out.max_constraint = max_constraint(sg, out.point);
        return out;
    }

    BeampatternState random_state(int n, int m, int num_users, std::uint64_t seed)
    {
        Rng rng = make_stream(seed, {tag(StreamTag::init)});
        BeampatternState s;
        s.alpha.resize(n);
        for (int i = 0; i < n; ++i)
            s.alpha(i) = uniform(rng, 0.0, 1.0);
        s.v.resize(m, num_users);
        for (int u = 0; u < num_users; ++u)
            for (int i = 0; i < m; ++i)
                s.v(i, u) = uniform(rng, 0.0, 1.0);
        return s;
    }

    int convergence_iteration(const std::vector<double> &f, int window, double tol)
    {
        const int count = static_cast<int>(f.size());
        if (window < 1 || count <= window)
            return -1;
        int first = -1;
        for (int t = count - 1; t >= window; --t)
        {
            const double ref = f[t - window];
            const bool ok = ref != 0.0 ? std::abs(f[t] - ref) / std::abs(ref) < tol : f[t] == 0.0;
            if (!ok)
                break;
            first = t;
        }
        // Trajectory index t holds iteration t + 1.
        return first >= 0 ? first + 1 : -1;
    }

    LongTermResult run_long_term(const CsscaConfig &config, const LongTermProblem &problem, std::uint64_t seed,
                                 const std::optional<BeampatternState> &initial)
    {
        validate_cssca_config(config);
        require(problem.sampler != nullptr, "run_long_term: missing channel sampler");
        const int n = static_cast<int>(problem.theta.rows());
        const int m = static_cast<int>(problem.beta.size());
        const int num_users = problem.sampler->num_users();
        require(problem.sampler->tx_size() == n && problem.sampler->rx_size() == m,
                "run_long_term: panel/channel dimension mismatch");
        require(config.qos.delta.size() == num_users, "run_long_term: delta length must equal the user count");

        LongTermResult res;
        CsscaState &st = res.final_state;
        st.state = initial ? *initial : random_state(n, m, num_users, seed);
        validate_state(st.state);
        require(st.state.alpha.size() == n && st.state.v.rows() == m && st.state.v.cols() == num_users,
                "run_long_term: initial state has wrong shape");

        BatchContext ctx;
        ctx.problem = &problem;
        ctx.qos = config.qos;
        ctx.socp = config.socp;
        ctx.seed = seed;
        ctx.t_h = config.t_h;
        ctx.fixed_samples = config.fixed_samples;

        std::vector<double> f0_track;
        for (int t = 1; t <= config.n_iter; ++t)
        {
            const auto [rho, gamma] = step_sizes(t);
            BatchResult batch;
            try
            {
                batch = config.execution == ExecutionPolicy::parallel ? evaluate_batch_parallel(ctx, st.state, t)
                                                                      : evaluate_batch_serial(ctx, st.state, t);
            }
            catch (const SolverError &e)
            {
                throw SolverError("run_long_term: iteration " + std::to_string(t) + ": " + e.what());
            }

            if (t == 1)
            {
                st.est = batch.mean;
            }
            else
            {
                st.est = update_estimates(st.est, batch.mean, rho);
            }

            // The objective is measured relative to the current power estimate,
            // so eps0 keeps the same weight against the linear term as f0 shrinks.
            if (st.est.f0 > 0.0)
                res.objective_scale = st.est.f0;
            Surrogates sg = build_surrogates(st.state, st.est, config.eps0, config.eps_u, res.objective_scale);
            sg.optimize_alpha = config.optimize_alpha;
            sg.optimize_v = config.optimize_v;
            SurrogateSolution sol;
            try
            {
                sol = solve_surrogate(sg, config.socp);
            }
            catch (const SolverError &e)
            {
                throw SolverError("run_long_term: iteration " + std::to_string(t) + ": " + e.what());
            }

            if (config.optimize_alpha)
                st.state.alpha =
                    (st.state.alpha + gamma * (sol.point.alpha - st.state.alpha)).cwiseMax(0.0).cwiseMin(1.0);
            if (config.optimize_v)
                st.state.v = (st.state.v + gamma * (sol.point.v - st.state.v)).cwiseMax(0.0).cwiseMin(1.0);
            st.t = t;

            TrajectoryRow row;
            row.t = t;
            row.rho = t == 1 ? 1.0 : rho;
            row.gamma = gamma;
            row.f0_hat_w = st.est.f0;
            row.f0_hat_dbm = st.est.f0 > 0.0 ? watts_to_dbm(st.est.f0) : -std::numeric_limits<double>::infinity();
            row.max_fu_hat = st.est.fu.maxCoeff();
            row.restored = sol.restored;
            row.infeasible_count = batch.infeasible;
            res.trajectory.push_back(row);
            res.infeasible_samples += batch.infeasible;
            res.fallback_samples += batch.fallback;
            res.restorations += sol.restored ? 1 : 0;
            f0_track.push_back(st.est.f0);
        }

        res.convergence_iteration =
            convergence_iteration(f0_track, config.convergence_window, config.convergence_tol);
        res.converged = res.convergence_iteration > 0;
        return res;
    }
} // namespace hmimos
