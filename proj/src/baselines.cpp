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

#include "hmimos/baselines.hpp"

#include <cmath>
#include <exception>

#include "hmimos/batch.hpp"

namespace hmimos
{
    BaselineResult summarize(const std::string &name, const std::vector<SlotRecord> &records, const VectorXd &delta)
    {
        require(!records.empty(), "summarize: no slots");
        const int num_users = static_cast<int>(delta.size());
        BaselineResult res;
        res.name = name;
        res.slots = static_cast<int>(records.size());
        res.avg_se_per_user = VectorXd::Zero(num_users);
        int violations = 0;
        for (const SlotRecord &r : records)
        {
            require(r.se.size() == num_users, "summarize: SE vector has wrong length");
            res.avg_power_watts += r.power;
            res.avg_se_per_user += r.se;
            for (int u = 0; u < num_users; ++u)
                violations += r.se(u) < delta(u) - 1e-6 ? 1 : 0;
            res.infeasible_slots += r.infeasible ? 1 : 0;
        }
        res.avg_power_watts /= res.slots;
        res.avg_se_per_user /= res.slots;
        res.qos_violation_rate = num_users > 0 ? static_cast<double>(violations) / (res.slots * num_users) : 0.0;
        return res;
    }

    BaselineResult pool_results(const std::vector<BaselineResult> &parts)
    {
        require(!parts.empty(), "pool_results: nothing to pool");
        BaselineResult res;
        res.name = parts.front().name;
        res.avg_se_per_user = VectorXd::Zero(parts.front().avg_se_per_user.size());
        for (const BaselineResult &p : parts)
        {
            require(p.name == res.name, "pool_results: mixed schemes");
            res.avg_power_watts += p.avg_power_watts * p.slots;
            res.avg_se_per_user += p.avg_se_per_user * p.slots;
            res.qos_violation_rate += p.qos_violation_rate * p.slots;
            res.slots += p.slots;
            res.infeasible_slots += p.infeasible_slots;
        }
        res.avg_power_watts /= res.slots;
        res.avg_se_per_user /= res.slots;
        res.qos_violation_rate /= res.slots;
        return res;
    }

    namespace
    {
        PrecoderResult precode(const BeampatternState &state, const MatrixXcd &theta, const VectorXcd &beta,
                               const ChannelRealization &channel, const QosSpec &qos, const SocpOptions &socp,
                               bool &infeasible)
        {
            const ShortTermInstance inst = build_instance(state, theta, beta, channel, qos);
            PrecoderResult pre = solve_precoder(inst, socp);
            infeasible = !pre.ok();
            if (infeasible)
                pre = rzf_precoder(inst);
            return pre;
        }

        SlotRecord record(const BeampatternState &state, const Precoder &precoder, const ChannelRealization &channel,
                          const SlotSet &slots, bool infeasible)
        {
            const SlotMetrics m = evaluate_slot(state, precoder, channel, slots.theta, slots.beta, slots.qos);
            return {m.power, m.se, infeasible};
        }

        // Runs body(s) for every slot; slots are independent.
        template <typename Body>
        void for_each_slot(int count, Body body)
        {
#ifdef HMIMOS_HAVE_OPENMP
            std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 1)
            for (int s = 0; s < count; ++s)
            {
                try
                {
                    body(s);
                }
                catch (...)
                {
#pragma omp critical(hmimos_slot_error)
                    if (!error)
                        error = std::current_exception();
                }
            }
            if (error)
                std::rethrow_exception(error);
#else
            for (int s = 0; s < count; ++s)
                body(s);
#endif
        }

        BeampatternState slot_initial_state(const SlotSet &slots, std::uint64_t seed, int s)
        {
            return random_state(static_cast<int>(slots.theta.rows()), static_cast<int>(slots.beta.size()),
                                static_cast<int>(slots.qos.delta.size()),
                                derive_seed(seed, {tag(StreamTag::baseline_init), static_cast<std::uint64_t>(s)}));
        }
    } // namespace

    AlternationOutcome alternate_slot(const AlternationConfig &config, const MatrixXcd &theta, const VectorXcd &beta,
                                      const QosSpec &qos, const ChannelRealization &channel,
                                      const BeampatternState &initial, bool optimize_alpha)
    {
        require(config.max_alternations >= 1, "alternate_slot: max_alternations must be >= 1");
        AlternationOutcome out;
        BeampatternState state = initial;
        double prev = 0.0;
        for (int j = 1; j <= config.max_alternations; ++j)
        {
            bool infeasible = false;
            const PrecoderResult pre = precode(state, theta, beta, channel, qos, config.socp, infeasible);
            out.state = state;
            out.precoder = pre.precoder;
            out.power = pre.power;
            out.infeasible = infeasible;
            out.alternations = j;
            if (pre.power <= 0.0)
                break;
            if (j > 1 && std::abs(pre.power - prev) <= config.tol * prev)
                break;
            if (j == config.max_alternations)
                break;
            prev = pre.power;

            const SampleValues vals = sample_objective_and_constraints(state, pre.precoder, channel, theta, beta, qos);
            const SampleGradients grads = sample_gradients(state, pre.precoder, channel, theta, beta, qos);
            CsscaEstimates est;
            est.f0 = vals.g0;
            est.fu = vals.gu;
            est.grad_alpha_f0 = grads.d_alpha_g0;
            est.grad_alpha_fu = grads.d_alpha_gu;
            est.grad_v_fu = grads.d_v_gu;
            Surrogates sg = build_surrogates(state, est, config.eps0, config.eps_u, pre.power);
            sg.optimize_alpha = optimize_alpha;
            const SurrogateSolution sol = solve_surrogate(sg, config.socp);
            const double gamma = 2.0 / (2.0 + j);
            if (optimize_alpha)
                state.alpha = (state.alpha + gamma * (sol.point.alpha - state.alpha)).cwiseMax(0.0).cwiseMin(1.0);
            state.v = (state.v + gamma * (sol.point.v - state.v)).cwiseMax(0.0).cwiseMin(1.0);
        }
        return out;
    }

    std::vector<SlotRecord> evaluate_fixed_state(const SlotSet &slots, const BeampatternState &state,
                                                 const SocpOptions &socp)
    {
        std::vector<SlotRecord> out(static_cast<std::size_t>(slots.num_slots()));
        for_each_slot(slots.num_slots(), [&](int s) {
            bool infeasible = false;
            const PrecoderResult pre =
                precode(state, slots.theta, slots.beta, slots.slots[s], slots.qos, socp, infeasible);
            out[s] = record(state, pre.precoder, slots.slots[s], slots, infeasible);
        });
        return out;
    }

    std::vector<SlotRecord> evaluate_frozen(const SlotSet &slots, const BeampatternState &state,
                                            const Precoder &precoder)
    {
        std::vector<SlotRecord> out;
        out.reserve(slots.slots.size());
        for (const ChannelRealization &h : slots.slots)
            out.push_back(record(state, precoder, h, slots, false));
        return out;
    }

    AoRun run_ao(const SlotSet &slots, const AlternationConfig &config)
    {
        require(slots.num_slots() >= 1, "run_ao: no slots");
        AoRun run;
        std::vector<SlotRecord> records(static_cast<std::size_t>(slots.num_slots()));
        run.states.resize(records.size());
        for_each_slot(slots.num_slots(), [&](int s) {
            const AlternationOutcome o = alternate_slot(config, slots.theta, slots.beta, slots.qos, slots.slots[s],
                                                        slot_initial_state(slots, config.seed, s));
            run.states[s] = o.state;
            records[s] = record(o.state, o.precoder, slots.slots[s], slots, o.infeasible);
        });
        run.result = summarize("ao", records, slots.qos.delta);
        return run;
    }

    BaselineResult run_ots(const SlotSet &slots, const AlternationConfig &config)
    {
        require(slots.num_slots() >= 1, "run_ots: no slots");
        const AlternationOutcome o = alternate_slot(config, slots.theta, slots.beta, slots.qos, slots.slots.front(),
                                                    slot_initial_state(slots, config.seed, 0));
        std::vector<SlotRecord> records = evaluate_frozen(slots, o.state, o.precoder);
        records.front().infeasible = o.infeasible;
        return summarize("ots", records, slots.qos.delta);
    }

    BaselineResult run_random_amplitude(const SlotSet &slots, const AlternationConfig &config)
    {
        require(slots.num_slots() >= 1, "run_random_amplitude: no slots");
        Rng rng = make_stream(config.seed, {tag(StreamTag::random_amplitude)});
        VectorXd alpha(slots.theta.rows());
        for (Eigen::Index i = 0; i < alpha.size(); ++i)
            alpha(i) = uniform(rng, 0.0, 1.0);

        std::vector<SlotRecord> records(static_cast<std::size_t>(slots.num_slots()));
        for_each_slot(slots.num_slots(), [&](int s) {
            BeampatternState init = slot_initial_state(slots, config.seed, s);
            init.alpha = alpha;
            const AlternationOutcome o =
                alternate_slot(config, slots.theta, slots.beta, slots.qos, slots.slots[s], init, false);
            records[s] = record(o.state, o.precoder, slots.slots[s], slots, o.infeasible);
        });
        return summarize("random_amplitude", records, slots.qos.delta);
    }

    BaselineResult run_sdma(const SlotSet &slots, const std::vector<BeampatternState> &ao_states)
    {
        require(static_cast<int>(ao_states.size()) == slots.num_slots(), "run_sdma: one state per slot required");
        std::vector<SlotRecord> records(ao_states.size());
        for (int s = 0; s < slots.num_slots(); ++s)
        {
            const ShortTermInstance inst =
                build_instance(ao_states[s], slots.theta, slots.beta, slots.slots[s], slots.qos);
            PrecoderResult pre = zf_precoder(inst);
            const bool infeasible = !pre.ok();
            if (infeasible)
                pre = rzf_precoder(inst);
            records[s] = record(ao_states[s], pre.precoder, slots.slots[s], slots, infeasible);
        }
        return summarize("sdma", records, slots.qos.delta);
    }

    BaselineResult run_two_timescale(const SlotSet &slots, const CsscaConfig &config, const LongTermProblem &problem,
                                     std::uint64_t seed, const std::string &name, LongTermResult *trained)
    {
        LongTermResult lt = run_long_term(config, problem, seed);
        const BaselineResult res =
            summarize(name, evaluate_fixed_state(slots, lt.final_state.state, config.socp), slots.qos.delta);
        if (trained)
            *trained = std::move(lt);
        return res;
    }
} // namespace hmimos
