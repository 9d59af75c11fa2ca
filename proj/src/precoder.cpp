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

#include "hmimos/precoder.hpp"

#include <cmath>

#include "hmimos/stacking.hpp"

namespace hmimos
{
    MatrixXcd ShortTermInstance::gain_matrix() const
    {
        MatrixXcd g(num_users(), num_feeds());
        for (int u = 0; u < num_users(); ++u)
            g.row(u) = eff_channels[u].adjoint() * d_matrix;
        return g;
    }

    ShortTermInstance build_instance(const BeampatternState &state, const MatrixXcd &theta, const VectorXcd &beta,
                                     const ChannelRealization &channels, const QosSpec &qos)
    {
        const int num_users = channels.num_users();
        require(theta.rows() == state.alpha.size(), "build_instance: theta/alpha mismatch");
        require(state.v.cols() == num_users && qos.delta.size() == num_users,
                "build_instance: user count mismatch");
        require(qos.sigma2 > 0.0, "build_instance: sigma2 must be positive");

        ShortTermInstance inst;
        inst.d_matrix = state.alpha.cast<cplx>().asDiagonal() * theta;
        inst.eta.resize(num_users);
        inst.sigma_bar.resize(num_users);
        const double sigma = std::sqrt(qos.sigma2);
        for (int u = 0; u < num_users; ++u)
        {
            inst.eff_channels.push_back(effective_rx_channel(u, state, beta, channels));
            inst.eta(u) = std::exp2(qos.delta(u)) - 1.0;
            inst.sigma_bar(u) = state.v.col(u).norm() * sigma;
        }
        return inst;
    }

    const char *to_string(PrecoderStatus status)
    {
        switch (status)
        {
        case PrecoderStatus::optimal:
            return "optimal";
        case PrecoderStatus::infeasible:
            return "infeasible";
        case PrecoderStatus::solver_failure:
            return "solver_failure";
        }
        return "unknown";
    }

    double instance_power(const ShortTermInstance &instance, const Precoder &precoder)
    {
        return (instance.d_matrix * precoder.w).squaredNorm();
    }

    VectorXd instance_sinr(const ShortTermInstance &instance, const Precoder &precoder)
    {
        const MatrixXcd s = instance.gain_matrix() * precoder.w;
        return sinr_from_streams(s, instance.sigma_bar.cwiseProduct(instance.sigma_bar), 1.0);
    }

    namespace
    {
        struct ScaledLayout
        {
            std::vector<int> active;   // users with eta > 0
            std::vector<double> scale; // w_u = scale_u * omega_u
            double objective_scale = 1.0;
            int k = 0;
            int n = 0; // 2 K |active| + 1
        };

        ScaledLayout layout(const ShortTermInstance &inst, const MatrixXcd &g)
        {
            ScaledLayout lay;
            lay.k = inst.num_feeds();
            for (int u = 0; u < inst.num_users(); ++u)
                if (inst.eta(u) > 0.0)
                {
                    lay.active.push_back(u);
                    const double gn = g.row(u).norm();
                    lay.scale.push_back(gn > 0.0 ? inst.sigma_bar(u) * std::sqrt(inst.eta(u)) / gn : 0.0);
                }
            const double dd = inst.d_matrix.squaredNorm() / std::max(1, lay.k);
            double acc = 0.0;
            for (const double s : lay.scale)
                acc += s * s * dd;
            lay.objective_scale = acc > 0.0 ? std::sqrt(acc) : 1.0;
            lay.n = 2 * lay.k * static_cast<int>(lay.active.size()) + 1;
            return lay;
        }

        SocpProblem build_socp(const ShortTermInstance &inst, const MatrixXcd &g, const ScaledLayout &lay)
        {
            const int k = lay.k;
            const int na = static_cast<int>(lay.active.size());
            const int n = lay.n;
            const int t_idx = n - 1;

            SocpProblem p(n);
            p.cost(t_idx) = 1.0;

            // ||D w|| = ||R w|| with D^H D = Q L Q^H, R = L^(1/2) Q^H.
            Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(inst.d_matrix.adjoint() * inst.d_matrix);
            const VectorXd lam = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
            const MatrixXcd r = lam.asDiagonal() * eig.eigenvectors().adjoint();
            const MatrixXd r_real = real_linear_map(r);

            SecondOrderCone obj;
            obj.a = MatrixXd::Zero(2 * k * na, n);
            for (int a = 0; a < na; ++a)
                obj.a.block(2 * k * a, 2 * k * a, 2 * k, 2 * k) = (lay.scale[a] / lay.objective_scale) * r_real;
            obj.b = VectorXd::Zero(2 * k * na);
            obj.c = VectorXd::Zero(n);
            obj.c(t_idx) = 1.0;
            p.add_cone(std::move(obj));

            for (int a = 0; a < na; ++a)
            {
                const int u = lay.active[a];
                const VectorXcd gu = g.row(u).adjoint(); // g_u, so that g_u^H w = row u of G times w
                const double gn = gu.norm();

                SecondOrderCone user;
                user.a = MatrixXd::Zero(2 * (na - 1) + 1, n);
                user.b = VectorXd::Zero(2 * (na - 1) + 1);
                int row = 0;
                for (int b = 0; b < na; ++b)
                {
                    if (b == a)
                        continue;
                    const double f = lay.scale[b] / inst.sigma_bar(u);
                    user.a.block(row, 2 * k * b, 1, 2 * k) = f * real_part_functional(gu);
                    user.a.block(row + 1, 2 * k * b, 1, 2 * k) = f * imag_part_functional(gu);
                    row += 2;
                }
                user.b(row) = 1.0;
                user.c = VectorXd::Zero(n);
                user.c.segment(2 * k * a, 2 * k) = real_part_functional(gu).transpose() / gn;
                p.add_cone(std::move(user));

                Eigen::RowVectorXd im = Eigen::RowVectorXd::Zero(n);
                im.segment(2 * k * a, 2 * k) = imag_part_functional(gu) / gn;
                p.add_equality(im, 0.0);
            }
            return p;
        }
    } // namespace

    SocpProblem precoder_socp(const ShortTermInstance &instance)
    {
        const MatrixXcd g = instance.gain_matrix();
        return build_socp(instance, g, layout(instance, g));
    }

    PrecoderResult solve_precoder(const ShortTermInstance &inst, const SocpOptions &options)
    {
        require(inst.eta.size() == inst.num_users() && inst.sigma_bar.size() == inst.num_users(),
                "solve_precoder: inconsistent instance");
        require(inst.eta.size() == 0 || inst.eta.minCoeff() >= 0.0, "solve_precoder: eta must be non-negative");

        PrecoderResult res;
        const int k = inst.num_feeds();
        res.precoder.w = MatrixXcd::Zero(k, inst.num_users());

        const MatrixXcd g = inst.gain_matrix();
        const ScaledLayout lay = layout(inst, g);
        if (lay.active.empty())
        {
            res.status = PrecoderStatus::optimal;
            return res;
        }
        for (std::size_t a = 0; a < lay.active.size(); ++a)
        {
            const int u = lay.active[a];
            if (!(inst.sigma_bar(u) > 0.0))
                throw InvalidArgument("solve_precoder: sigma_bar must be positive for constrained users");
            if (lay.scale[a] == 0.0)
            {
                res.status = PrecoderStatus::infeasible;
                return res;
            }
        }

        const SocpSolution sol = solve_socp(build_socp(inst, g, lay), options);
        res.solver_iterations = sol.iterations;
        if (sol.status == SocpStatus::infeasible)
        {
            res.status = PrecoderStatus::infeasible;
            return res;
        }
        if (sol.status != SocpStatus::optimal)
        {
            res.status = PrecoderStatus::solver_failure;
            return res;
        }
        for (std::size_t a = 0; a < lay.active.size(); ++a)
        {
            const VectorXd seg = sol.x.segment(2 * k * static_cast<int>(a), 2 * k);
            res.precoder.w.col(lay.active[a]) = lay.scale[a] * real_to_complex_unstack(seg);
        }
        res.power = instance_power(inst, res.precoder);
        res.status = PrecoderStatus::optimal;
        return res;
    }

    namespace
    {
        // Scales column u so that |g_u^H w_u|^2 = eta_u sigma_bar_u^2.
        void normalize_streams(const ShortTermInstance &inst, const MatrixXcd &g, MatrixXcd &w)
        {
            for (int u = 0; u < inst.num_users(); ++u)
            {
                const cplx gain = (g.row(u) * w.col(u)).value();
                const double target = std::sqrt(inst.eta(u)) * inst.sigma_bar(u);
                if (target == 0.0 || std::abs(gain) == 0.0)
                    w.col(u).setZero();
                else
                    w.col(u) *= target / std::abs(gain);
            }
        }
    } // namespace

    PrecoderResult zf_precoder(const ShortTermInstance &inst)
    {
        PrecoderResult res;
        const int u_count = inst.num_users();
        const int k = inst.num_feeds();
        res.precoder.w = MatrixXcd::Zero(k, u_count);
        if (inst.eta.maxCoeff() <= 0.0)
        {
            res.status = PrecoderStatus::optimal;
            return res;
        }

        const MatrixXcd g = inst.gain_matrix();
        if (u_count > k)
        {
            res.status = PrecoderStatus::infeasible;
            return res;
        }
        const MatrixXcd gram = g * g.adjoint();
        Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
        const double top = eig.eigenvalues().maxCoeff();
        if (!(top > 0.0) || eig.eigenvalues().minCoeff() <= 1e-12 * top)
        {
            res.status = PrecoderStatus::infeasible;
            return res;
        }
        MatrixXcd w = g.adjoint() * gram.ldlt().solve(MatrixXcd::Identity(u_count, u_count));
        normalize_streams(inst, g, w);
        res.precoder.w = w;
        res.power = instance_power(inst, res.precoder);
        res.status = PrecoderStatus::optimal;
        return res;
    }

    PrecoderResult rzf_precoder(const ShortTermInstance &inst)
    {
        PrecoderResult res;
        const int u_count = inst.num_users();
        const MatrixXcd g = inst.gain_matrix();
        MatrixXcd gram = g * g.adjoint();
        const double reg = 1e-3 * std::max(gram.trace().real() / u_count, 1e-300);
        gram.diagonal().array() += reg;
        MatrixXcd w = g.adjoint() * gram.ldlt().solve(MatrixXcd::Identity(u_count, u_count));
        normalize_streams(inst, g, w);
        res.precoder.w = w;
        res.power = instance_power(inst, res.precoder);
        res.status = PrecoderStatus::optimal;
        return res;
    }
} // namespace hmimos
