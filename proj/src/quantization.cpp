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

#include "hmimos/quantization.hpp"

#include <algorithm>
#include <cmath>

namespace hmimos
{
    void validate_quant_spec(const QuantSpec &spec)
    {
        require(spec.mu > 0.0 && std::isfinite(spec.mu), "QuantSpec: mu must be positive");
        require(spec.bits >= 1 && spec.bits <= 52, "QuantSpec: bits must be in [1, 52]");
    }

    double mu_law_compress(double x, double mu) { return std::log1p(mu * x) / std::log1p(mu); }

    double mu_law_expand(double y, double mu) { return std::expm1(y * std::log1p(mu)) / mu; }

    double mu_law_quantize(double x, const QuantSpec &spec)
    {
        validate_quant_spec(spec);
        require(x >= -1e-12 && x <= 1.0 + 1e-12, "mu_law_quantize: input outside [0, 1]");
        x = std::clamp(x, 0.0, 1.0);
        const double levels = std::ldexp(1.0, spec.bits) - 1.0;
        const double k = std::round(mu_law_compress(x, spec.mu) * levels);
        if (k <= 0.0)
            return 0.0;
        if (k >= levels)
            return 1.0;
        return std::clamp(mu_law_expand(k / levels, spec.mu), 0.0, 1.0);
    }

    namespace
    {
        // x in [-s, s] -> [0, 1] -> quantized -> back.
        double quantize_signed(double x, double s, const QuantSpec &spec)
        {
            const double unit = std::clamp((x / s + 1.0) / 2.0, 0.0, 1.0);
            return s * (2.0 * mu_law_quantize(unit, spec) - 1.0);
        }

        MatrixXcd quantize_complex(const MatrixXcd &w, const QuantSpec &spec)
        {
            MatrixXcd out = w;
            if (spec.complex_mode == ComplexQuantMode::real_imag)
            {
                const double s = std::max(w.real().cwiseAbs().maxCoeff(), w.imag().cwiseAbs().maxCoeff());
                if (!(s > 0.0))
                    return out;
                for (Eigen::Index i = 0; i < w.size(); ++i)
                    out(i) = cplx(quantize_signed(w(i).real(), s, spec), quantize_signed(w(i).imag(), s, spec));
                return out;
            }
            const double s = w.cwiseAbs().maxCoeff();
            if (!(s > 0.0))
                return out;
            const double phase_levels = std::ldexp(1.0, spec.bits);
            const double step = 2.0 * kPi / phase_levels;
            for (Eigen::Index i = 0; i < w.size(); ++i)
            {
                const double mag = s * mu_law_quantize(std::min(std::abs(w(i)) / s, 1.0), spec);
                const double phase = step * std::round(std::arg(w(i)) / step);
                out(i) = std::polar(mag, phase);
            }
            return out;
        }
    } // namespace

    QuantizedPoint quantize_state(const BeampatternState &state, const Precoder &precoder, const QuantSpec &spec)
    {
        validate_quant_spec(spec);
        validate_state(state);
        QuantizedPoint out{state, precoder};
        out.state.alpha = state.alpha.unaryExpr([&](double x) { return mu_law_quantize(x, spec); });
        out.state.v = state.v.unaryExpr([&](double x) { return mu_law_quantize(x, spec); });
        if (precoder.w.size() > 0)
            out.precoder.w = quantize_complex(precoder.w, spec);
        return out;
    }
} // namespace hmimos
