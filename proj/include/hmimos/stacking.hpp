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

#include "hmimos/common.hpp"

namespace hmimos
{
    // [Re(a); Im(a)]
    VectorXd complex_to_real_stack(const VectorXcd &a);
    VectorXcd real_to_complex_unstack(const VectorXd &x);

    // Real 2m x 2n matrix [[Re, -Im], [Im, Re]] acting on stacked vectors, so
    // that stack(M a) = real_linear_map(M) * stack(a).
    MatrixXd real_linear_map(const MatrixXcd &m);

    // Rows r such that r . stack(a) = Re(c^H a) and Im(c^H a) respectively.
    Eigen::RowVectorXd real_part_functional(const VectorXcd &c);
    Eigen::RowVectorXd imag_part_functional(const VectorXcd &c);
} // namespace hmimos
