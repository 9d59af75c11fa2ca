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

#include "hmimos/batch.hpp"

#include <exception>

#ifdef HMIMOS_HAVE_OPENMP
#include <omp.h>
#endif

namespace hmimos
{
    ChannelRealization training_sample(const BatchContext &ctx, int t, int l, int attempt)
    {
        const std::uint64_t t_key = ctx.fixed_samples ? 0 : static_cast<std::uint64_t>(t);
        Rng rng = make_stream(ctx.seed, {tag(StreamTag::training_sample), t_key, static_cast<std::uint64_t>(l),
                                         static_cast<std::uint64_t>(attempt)});
        return ctx.problem->sampler->sample(rng);
    }

    SampleOutcome evaluate_sample(const BatchContext &ctx, const BeampatternState &state, int t, int l)
    {
        const LongTermProblem &prob = *ctx.problem;
        SampleOutcome out;

        ChannelRealization h = training_sample(ctx, t, l, 0);
        ShortTermInstance inst = build_instance(state, prob.theta, prob.beta, h, ctx.qos);
        PrecoderResult pre = solve_precoder(inst, ctx.socp);
        if (!pre.ok())
        {
            out.redrawn = true;
            h = training_sample(ctx, t, l, 1);
            inst = build_instance(state, prob.theta, prob.beta, h, ctx.qos);
            pre = solve_precoder(inst, ctx.socp);
            if (!pre.ok())
            {
                out.fallback = true;
                pre = rzf_precoder(inst);
            }
        }

        out.values = sample_objective_and_constraints(state, pre.precoder, h, prob.theta, prob.beta, ctx.qos);
        out.grads = sample_gradients(state, pre.precoder, h, prob.theta, prob.beta, ctx.qos);
        return out;
    }

    BatchResult reduce_batch(const std::vector<SampleOutcome> &outcomes)
    {
        require(!outcomes.empty(), "reduce_batch: empty batch");
        BatchResult res;
        const SampleOutcome &first = outcomes.front();
        CsscaEstimates &m = res.mean;
        m.f0 = 0.0;
        m.fu = VectorXd::Zero(first.values.gu.size());
        m.grad_alpha_f0 = VectorXd::Zero(first.grads.d_alpha_g0.size());
        m.grad_alpha_fu = MatrixXd::Zero(first.grads.d_alpha_gu.rows(), first.grads.d_alpha_gu.cols());
        m.grad_v_fu = MatrixXd::Zero(first.grads.d_v_gu.rows(), first.grads.d_v_gu.cols());
        for (const SampleOutcome &o : outcomes)
        {
            m.f0 += o.values.g0;
            m.fu += o.values.gu;
            m.grad_alpha_f0 += o.grads.d_alpha_g0;
            m.grad_alpha_fu += o.grads.d_alpha_gu;
            m.grad_v_fu += o.grads.d_v_gu;
            res.infeasible += o.redrawn ? 1 : 0;
            res.fallback += o.fallback ? 1 : 0;
        }
        const double inv = 1.0 / static_cast<double>(outcomes.size());
        m.f0 *= inv;
        m.fu *= inv;
        m.grad_alpha_f0 *= inv;
        m.grad_alpha_fu *= inv;
        m.grad_v_fu *= inv;
        return res;
    }

    BatchResult evaluate_batch_serial(const BatchContext &ctx, const BeampatternState &state, int t)
    {
        std::vector<SampleOutcome> outcomes(static_cast<std::size_t>(ctx.t_h));
        for (int l = 0; l < ctx.t_h; ++l)
            outcomes[l] = evaluate_sample(ctx, state, t, l);
        return reduce_batch(outcomes);
    }

    BatchResult evaluate_batch_parallel(const BatchContext &ctx, const BeampatternState &state, int t)
    {
        std::vector<SampleOutcome> outcomes(static_cast<std::size_t>(ctx.t_h));
#ifdef HMIMOS_HAVE_OPENMP
        // Exceptions must not cross the parallel region boundary.
        std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 1)
        for (int l = 0; l < ctx.t_h; ++l)
        {
            try
            {
                outcomes[l] = evaluate_sample(ctx, state, t, l);
            }
            catch (...)
            {
#pragma omp critical(hmimos_batch_error)
                if (!error)
                    error = std::current_exception();
            }
        }
        if (error)
            std::rethrow_exception(error);
#else
        for (int l = 0; l < ctx.t_h; ++l)
            outcomes[l] = evaluate_sample(ctx, state, t, l);
#endif
        return reduce_batch(outcomes);
    }

    int max_threads()
    {
#ifdef HMIMOS_HAVE_OPENMP
        return omp_get_max_threads();
#else
        return 1;
#endif
    }
} // namespace hmimos
