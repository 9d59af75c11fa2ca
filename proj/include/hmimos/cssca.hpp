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

#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "hmimos/precoder.hpp"

namespace hmimos
{
    enum class ExecutionPolicy
    {
        serial,
        parallel,
    };

    struct CsscaConfig
    {
        int t_h = 10;
        double eps0 = 0.01;
        double eps_u = 0.01;
        int n_iter = 300;
        QosSpec qos;

        // Draw the T_H training samples once and reuse them every iteration.
        bool fixed_samples = false;
        // Frozen variables keep their initial value.
        bool optimize_alpha = true;
        bool optimize_v = true;

        int convergence_window = 50;
        double convergence_tol = 0.01;

        SocpOptions socp;
        ExecutionPolicy execution = ExecutionPolicy::parallel;
    };

    void validate_cssca_config(const CsscaConfig &config);

    // (rho^t, gamma^t)
    std::pair<double, double> step_sizes(int t);

    struct SampleValues
    {
        double g0 = 0.0;
        VectorXd gu;
    };

    struct SampleGradients
    {
        VectorXd d_alpha_g0; // N
        MatrixXd d_alpha_gu; // N x U
        MatrixXd d_v_gu;     // M x U, column u is the gradient w.r.t. v_u
    };

    SampleValues sample_objective_and_constraints(const BeampatternState &state, const Precoder &w,
                                                  const ChannelRealization &h, const MatrixXcd &theta,
                                                  const VectorXcd &beta, const QosSpec &qos);

    SampleGradients sample_gradients(const BeampatternState &state, const Precoder &w, const ChannelRealization &h,
                                     const MatrixXcd &theta, const VectorXcd &beta, const QosSpec &qos);

    // Recursive estimates of f_0, f_u and their gradients.
    struct CsscaEstimates
    {
        double f0 = 0.0;
        VectorXd fu;
        VectorXd grad_alpha_f0;
        MatrixXd grad_alpha_fu;
        MatrixXd grad_v_fu;
    };

    struct CsscaState
    {
        int t = 0;
        BeampatternState state; // (alpha^t, V^t)
        CsscaEstimates est;
    };

    // est <- (1 - rho) est + rho batch
    CsscaEstimates update_estimates(const CsscaEstimates &prev, const CsscaEstimates &batch, double rho);

    // Quadratic surrogates around (alpha0, v0):
    //   f0_bar = f0 + g0^T (alpha - alpha0) + eps0 ||alpha - alpha0||^2
    //   fu_bar = fu + ga_u^T (alpha - alpha0) + gv_u^T (v_u - v0_u)
    //            + eps_u (||alpha - alpha0||^2 + ||v_u - v0_u||^2)
    // Objective terms are divided by `objective_scale` before use. When v is
    // optimized, eps0 ||V - V0||^2 is added to the objective so the minimizer
    // is unique.
    struct Surrogates
    {
        VectorXd alpha0;
        MatrixXd v0;
        double f0 = 0.0;
        VectorXd grad_alpha_f0;
        VectorXd fu;
        MatrixXd grad_alpha_fu;
        MatrixXd grad_v_fu;
        double eps0 = 0.01;
        double eps_u = 0.01;
        bool optimize_alpha = true;
        bool optimize_v = true;

        int num_users() const { return static_cast<int>(fu.size()); }

        double objective(const BeampatternState &x) const;
        double constraint(int u, const BeampatternState &x) const;
    };

    Surrogates build_surrogates(const BeampatternState &expansion, const CsscaEstimates &est, double eps0,
                                double eps_u, double objective_scale = 1.0);

    // {fu_bar <= 0} = {||(alpha, v_u) - center|| <= sqrt(radius2)}; empty if radius2 < 0.
    struct Ball
    {
        VectorXd center; // [alpha; v_u]
        double radius2 = 0.0;
    };

    Ball constraint_ball(const Surrogates &s, int u);

    struct SurrogateSolution
    {
        BeampatternState point;
        bool restored = false;
        SocpStatus status = SocpStatus::optimal;
        double max_constraint = 0.0; // max_u fu_bar at the point
    };

    // Minimizes f0_bar subject to fu_bar <= 0 and the [0,1] box. Falls back
    // to minimizing max_u fu_bar over the box when that set is empty. With
    // alpha frozen the constraint margin is the objective.
    SurrogateSolution solve_surrogate(const Surrogates &s, const SocpOptions &options = {});

    struct LongTermProblem
    {
        const ChannelSampler *sampler = nullptr;
        MatrixXcd theta;
        VectorXcd beta;
    };

    struct TrajectoryRow
    {
        int t = 0;
        double rho = 0.0;
        double gamma = 0.0;
        double f0_hat_w = 0.0;
        double f0_hat_dbm = 0.0;
        double max_fu_hat = 0.0;
        bool restored = false;
        int infeasible_count = 0;
    };

    struct LongTermResult
    {
        std::vector<TrajectoryRow> trajectory;
        CsscaState final_state;
        double objective_scale = 1.0; // power estimate the last surrogate was normalized by [W]
        bool converged = false;
        int convergence_iteration = -1;
        int infeasible_samples = 0;
        int fallback_samples = 0;
        int restorations = 0;
    };

    BeampatternState random_state(int n, int m, int num_users, std::uint64_t seed);

    LongTermResult run_long_term(const CsscaConfig &config, const LongTermProblem &problem, std::uint64_t seed,
                                 const std::optional<BeampatternState> &initial = std::nullopt);

    // Windowed relative-change test on a power trajectory: the first T such
    // that |f(T') - f(T' - w)| / f(T' - w) < tol for every T' >= T, or -1.
    int convergence_iteration(const std::vector<double> &f, int window, double tol);
} // namespace hmimos
