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

#include <string>
#include <vector>

#include "hmimos/common.hpp"

namespace hmimos
{
    // ||a x + b|| <= c^T x + d
    struct SecondOrderCone
    {
        MatrixXd a;
        VectorXd b;
        VectorXd c;
        double d = 0.0;
    };

    // minimize cost^T x
    // subject to eq_a x = eq_b, ineq_g x <= ineq_h, lower <= x <= upper, cones.
    // Empty lower/upper mean unbounded; individual entries may be +-infinity.
    struct SocpProblem
    {
        int num_vars = 0;
        VectorXd cost;
        MatrixXd eq_a;
        VectorXd eq_b;
        MatrixXd ineq_g;
        VectorXd ineq_h;
        VectorXd lower;
        VectorXd upper;
        std::vector<SecondOrderCone> cones;

        explicit SocpProblem(int n = 0);

        void add_equality(const Eigen::RowVectorXd &row, double rhs);
        void add_inequality(const Eigen::RowVectorXd &row, double rhs);
        void add_cone(SecondOrderCone cone);
        void set_bounds(double lo, double hi);
    };

    void validate_problem(const SocpProblem &problem);

    enum class SocpStatus
    {
        optimal,
        infeasible,
        unbounded,
        max_iters,
        numerical_error,
    };

    const char *to_string(SocpStatus status);

    struct SocpOptions
    {
        double tol = 1e-8;
        int max_iters = 200;
    };

    struct SocpSolution
    {
        SocpStatus status = SocpStatus::max_iters;
        VectorXd x;
        double objective_value = 0.0;
        double max_constraint_violation = 0.0;
        double feasibility_tolerance = 0.0;
        int iterations = 0;
        double primal_residual = 0.0;
        double dual_residual = 0.0;
        double gap = 0.0;
        // Set when the iteration stalled and x is the last iterate within
        // 1e3 * tol; status is then optimal.
        bool reduced_accuracy = false;
    };

    SocpSolution solve_socp(const SocpProblem &problem, const SocpOptions &options = {});

    // Largest violation of any constraint of `problem` at x (0 if feasible).
    double max_violation(const SocpProblem &problem, const VectorXd &x);

    // Plain JSON fixture format: {"num_vars", "cost", "eq_a", "eq_b", ...};
    // matrices as arrays of rows, infinite bounds as null.
    std::string socp_to_json(const SocpProblem &problem);
    SocpProblem socp_from_json(const std::string &text);
} // namespace hmimos
