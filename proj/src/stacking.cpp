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

#include "hmimos/stacking.hpp"

namespace hmimos
{
    VectorXd complex_to_real_stack(const VectorXcd &a)
    {
        VectorXd x(2 * a.size());
        x.head(a.size()) = a.real();
        x.tail(a.size()) = a.imag();
        return x;
    }

    VectorXcd real_to_complex_unstack(const VectorXd &x)
    {
        require(x.size() % 2 == 0, "real_to_complex_unstack: odd length");
        const Eigen::Index n = x.size() / 2;
        VectorXcd a(n);
        for (Eigen::Index i = 0; i < n; ++i)
            a(i) = cplx(x(i), x(n + i));
        return a;
    }

    MatrixXd real_linear_map(const MatrixXcd &m)
    {
        const Eigen::Index r = m.rows();
        const Eigen::Index c = m.cols();
        MatrixXd out(2 * r, 2 * c);
        out.topLeftCorner(r, c) = m.real();
        out.topRightCorner(r, c) = -m.imag();
        out.bottomLeftCorner(r, c) = m.imag();
        out.bottomRightCorner(r, c) = m.real();
        return out;
    }

    // c^H a = sum conj(c_i) a_i; Re = c_r.a_r + c_i.a_i, Im = c_r.a_i - c_i.a_r
    Eigen::RowVectorXd real_part_functional(const VectorXcd &c)
    {
        Eigen::RowVectorXd r(2 * c.size());
        r.head(c.size()) = c.real().transpose();
        r.tail(c.size()) = c.imag().transpose();
        return r;
    }

    Eigen::RowVectorXd imag_part_functional(const VectorXcd &c)
    {
        Eigen::RowVectorXd r(2 * c.size());
        r.head(c.size()) = -c.imag().transpose();
        r.tail(c.size()) = c.real().transpose();
        return r;
    }
} // namespace hmimos
