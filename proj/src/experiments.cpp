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

#include "hmimos/experiments.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

namespace hmimos
{
    using nlohmann::json;

    Setup make_setup(const ExperimentConfig &config)
    {
        validate_config(config);
        Setup s;
        s.config = config;
        s.hash = config_hash(config);
        s.tx = build_panel(config.tx);
        s.rx = build_panel(config.rx);
        s.coupling = phase_coupling(s.tx, s.rx);
        return s;
    }

    LongTermProblem Interval::problem(const Setup &setup) const
    {
        return {&sampler, setup.coupling.theta, setup.coupling.beta};
    }

    SlotSet Interval::slot_set(const Setup &setup, const QosSpec &qos) const
    {
        return {setup.coupling.theta, setup.coupling.beta, qos, slots};
    }

    Interval make_interval(const Setup &setup, int index)
    {
        require(index >= 0, "make_interval: negative index");
        const std::uint64_t seed =
            derive_seed(setup.config.seeds.master, {tag(StreamTag::interval), static_cast<std::uint64_t>(index)});
        Rng stat_rng = make_stream(seed, {tag(StreamTag::statistics)});
        const StatisticalCsi stat = draw_statistical_csi(setup.config.scenario, stat_rng);
        Interval iv{index, seed, ChannelSampler(stat, setup.tx, setup.rx), {}};
        iv.slots.reserve(static_cast<std::size_t>(setup.config.slots_per_interval));
        for (int s = 0; s < setup.config.slots_per_interval; ++s)
        {
            Rng rng = make_stream(seed, {tag(StreamTag::evaluation_slot), static_cast<std::uint64_t>(s)});
            iv.slots.push_back(iv.sampler.sample(rng));
        }
        return iv;
    }

    CsscaConfig cssca_for(const Setup &setup, const QosSpec &qos, bool fixed_samples)
    {
        CsscaConfig c = setup.config.cssca;
        c.qos = qos;
        c.fixed_samples = fixed_samples;
        return c;
    }

    AlternationConfig alternation_for(const Setup &setup, std::uint64_t seed)
    {
        AlternationConfig a;
        a.eps0 = setup.config.cssca.eps0;
        a.eps_u = setup.config.cssca.eps_u;
        a.max_alternations = setup.config.ao_max_alternations;
        a.tol = setup.config.ao_tol;
        a.socp = setup.config.cssca.socp;
        a.seed = seed;
        return a;
    }

    ConvergenceReport run_convergence(const Setup &setup, const std::vector<double> &deltas, int replications)
    {
        require(!deltas.empty() && replications >= 1, "run_convergence: need deltas and replications");
        ConvergenceReport rep;
        rep.deltas = deltas;
        std::vector<Interval> intervals;
        for (int r = 0; r < replications; ++r)
            intervals.push_back(make_interval(setup, r));
        for (const double delta : deltas)
        {
            double sum = 0.0;
            for (int r = 0; r < replications; ++r)
            {
                const Interval &iv = intervals[r];
                ConvergenceRun run;
                run.delta = delta;
                run.replication = r;
                run.seed = iv.seed;
                run.result = run_long_term(cssca_for(setup, make_qos(setup.config, delta)), iv.problem(setup), iv.seed);
                sum += run.result.trajectory.back().f0_hat_w;
                rep.runs.push_back(std::move(run));
            }
            rep.mean_final_power.push_back(sum / replications);
        }
        return rep;
    }

    namespace
    {
        void run_point(const Setup &setup, const Interval &iv, const QosSpec &qos,
                       std::vector<std::vector<BaselineResult>> &acc)
        {
            const std::vector<std::string> names = scheme_names();
            const auto enabled = [&](const std::string &name) {
                for (const std::string &b : setup.config.baselines)
                    if (b == name)
                        return true;
                return false;
            };
            const SlotSet slots = iv.slot_set(setup, qos);
            const LongTermProblem prob = iv.problem(setup);
            const AlternationConfig alt = alternation_for(setup, iv.seed);

            acc[0].push_back(run_two_timescale(slots, cssca_for(setup, qos), prob, iv.seed, "proposed"));
            AoRun ao;
            if (enabled("ao") || enabled("sdma"))
                ao = run_ao(slots, alt);
            for (std::size_t k = 1; k < names.size(); ++k)
            {
                const std::string &name = names[k];
                if (!enabled(name))
                    continue;
                if (name == "ao")
                    acc[k].push_back(ao.result);
                else if (name == "ots")
                    acc[k].push_back(run_ots(slots, alt));
                else if (name == "tts_fixed")
                    acc[k].push_back(run_two_timescale(slots, cssca_for(setup, qos, true), prob, iv.seed, name));
                else if (name == "random_amplitude")
                    acc[k].push_back(run_random_amplitude(slots, alt));
                else if (name == "sdma")
                    acc[k].push_back(run_sdma(slots, ao.states));
            }
        }
    } // namespace

    ComparisonReport run_comparison(const Setup &setup, const std::vector<double> &deltas, int intervals)
    {
        require(intervals >= 1, "run_comparison: need at least one interval");
        std::vector<Interval> ivs;
        for (int i = 0; i < intervals; ++i)
            ivs.push_back(make_interval(setup, i));

        std::vector<std::pair<double, QosSpec>> points;
        if (deltas.empty())
        {
            const QosSpec q = make_qos(setup.config);
            points.emplace_back(q.delta.mean(), q);
        }
        for (const double d : deltas)
            points.emplace_back(d, make_qos(setup.config, d));

        ComparisonReport rep;
        rep.intervals = intervals;
        const std::size_t num_schemes = scheme_names().size();
        for (const auto &[delta, qos] : points)
        {
            std::vector<std::vector<BaselineResult>> acc(num_schemes);
            for (const Interval &iv : ivs)
                run_point(setup, iv, qos, acc);
            for (const std::vector<BaselineResult> &parts : acc)
                if (!parts.empty())
                    rep.rows.push_back({delta, pool_results(parts)});
        }
        return rep;
    }

    const BaselineResult *find_row(const ComparisonReport &report, double delta, const std::string &scheme)
    {
        for (const ComparisonRow &r : report.rows)
            if (r.delta == delta && r.result.name == scheme)
                return &r.result;
        return nullptr;
    }

    std::vector<OrderingCheck> ordering_checks(const ComparisonReport &report, double delta)
    {
        std::vector<OrderingCheck> out;
        const BaselineResult *prop = find_row(report, delta, "proposed");
        if (!prop)
            return out;
        const double p = watts_to_dbm(prop->avg_power_watts);
        const auto add = [&](const std::string &scheme, const std::string &label, auto pass) {
            const BaselineResult *o = find_row(report, delta, scheme);
            if (!o)
                return;
            const double q = watts_to_dbm(o->avg_power_watts);
            out.push_back({label, p, q, pass(p, q)});
        };
        add("ots", "proposed <= ots", [](double a, double b) { return a <= b; });
        add("random_amplitude", "proposed + 3 dB <= random_amplitude", [](double a, double b) { return a + 3.0 <= b; });
        add("sdma", "proposed <= sdma", [](double a, double b) { return a <= b; });
        add("tts_fixed", "proposed <= tts_fixed", [](double a, double b) { return a <= b; });
        add("ao", "|proposed - ao| <= 1.5 dB", [](double a, double b) { return std::abs(a - b) <= 1.5; });
        return out;
    }

    QuantReport run_quant_sweep(const Setup &setup, int replications)
    {
        require(replications >= 1, "run_quant_sweep: need at least one replication");
        const ExperimentConfig &cfg = setup.config;
        QuantReport rep;
        rep.bits = cfg.quant.bits;
        rep.mean_power_gap_db.assign(rep.bits.size(), 0.0);
        rep.mean_se_gap.assign(rep.bits.size(), 0.0);
        const QosSpec qos = make_qos(cfg);
        const int num_users = static_cast<int>(qos.delta.size());

        for (int r = 0; r < replications; ++r)
        {
            const Interval iv = make_interval(setup, r);
            const SlotSet slots = iv.slot_set(setup, qos);
            const LongTermResult lt = run_long_term(cssca_for(setup, qos), iv.problem(setup), iv.seed);
            const BeampatternState &state = lt.final_state.state;

            std::vector<Precoder> precoders;
            std::vector<SlotMetrics> base;
            for (const ChannelRealization &h : slots.slots)
            {
                const ShortTermInstance inst = build_instance(state, slots.theta, slots.beta, h, qos);
                PrecoderResult pre = solve_precoder(inst, cfg.cssca.socp);
                if (!pre.ok())
                    pre = rzf_precoder(inst);
                precoders.push_back(pre.precoder);
                base.push_back(evaluate_slot(state, pre.precoder, h, slots.theta, slots.beta, qos));
            }

            const auto summarize_row = [&](int bits, const std::vector<SlotMetrics> &m) {
                QuantRow row;
                row.replication = r;
                row.bits = bits;
                int violations = 0;
                double se_sum = 0.0, gap_sum = 0.0;
                for (std::size_t s = 0; s < m.size(); ++s)
                {
                    row.power_w += m[s].power;
                    se_sum += m[s].se.sum();
                    gap_sum += (m[s].se - base[s].se).cwiseAbs().sum();
                    for (int u = 0; u < num_users; ++u)
                        violations += m[s].se(u) < qos.delta(u) - 1e-6 ? 1 : 0;
                }
                const double cells = static_cast<double>(m.size()) * num_users;
                row.power_w /= static_cast<double>(m.size());
                row.mean_se = se_sum / cells;
                row.se_gap = gap_sum / cells;
                row.violation_rate = violations / cells;
                return row;
            };

            const QuantRow ref = summarize_row(0, base);
            rep.rows.push_back(ref);
            for (std::size_t b = 0; b < rep.bits.size(); ++b)
            {
                const QuantSpec spec{cfg.quant.mu, rep.bits[b], cfg.quant.complex_mode};
                std::vector<SlotMetrics> m;
                for (int s = 0; s < slots.num_slots(); ++s)
                {
                    const QuantizedPoint q = quantize_state(state, precoders[s], spec);
                    m.push_back(evaluate_slot(q.state, q.precoder, slots.slots[s], slots.theta, slots.beta, qos));
                }
                QuantRow row = summarize_row(rep.bits[b], m);
                row.power_gap_db = ref.power_w > 0.0 && row.power_w > 0.0
                                       ? std::abs(10.0 * std::log10(row.power_w / ref.power_w))
                                       : (row.power_w == ref.power_w ? 0.0 : std::numeric_limits<double>::infinity());
                rep.mean_power_gap_db[b] += row.power_gap_db / replications;
                rep.mean_se_gap[b] += row.se_gap / replications;
                rep.rows.push_back(row);
            }
        }
        return rep;
    }

    std::string format_number(double x)
    {
        if (std::isnan(x))
            return "nan";
        if (std::isinf(x))
            return x > 0 ? "inf" : "-inf";
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof buf, x);
        return std::string(buf, res.ptr);
    }

    namespace
    {
        class CsvFile
        {
        public:
            CsvFile(const std::string &path, const std::vector<std::string> &header) : out_(path, std::ios::binary)
            {
                require(static_cast<bool>(out_), "cannot write " + path);
                for (std::size_t i = 0; i < header.size(); ++i)
                    out_ << (i ? "," : "") << header[i];
                out_ << "\n";
            }

            CsvFile &operator<<(double x) { return field(format_number(x)); }
            CsvFile &operator<<(int x) { return field(std::to_string(x)); }
            CsvFile &operator<<(const std::string &s) { return field(s); }

            void end_row()
            {
                out_ << "\n";
                first_ = true;
            }

        private:
            CsvFile &field(const std::string &s)
            {
                out_ << (first_ ? "" : ",") << s;
                first_ = false;
                return *this;
            }

            std::ofstream out_;
            bool first_ = true;
        };

        // JSON has no infinities.
        json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

        json header(const Setup &setup)
        {
            // Where and how the run executed does not change the numbers.
            json config = config_to_json(setup.config);
            config.erase("output_dir");
            config.erase("execution");
            return {{"config_hash", hash_hex(setup.hash)}, {"seed", setup.config.seeds.master}, {"config", config}};
        }

        void write_json(const std::string &path, const json &j)
        {
            std::ofstream out(path, std::ios::binary);
            require(static_cast<bool>(out), "cannot write " + path);
            out << j.dump(2) << "\n";
        }

        std::string prepare(const std::string &dir)
        {
            std::filesystem::create_directories(dir);
            return dir;
        }
    } // namespace

    void write_convergence(const Setup &setup, const ConvergenceReport &report, const std::string &dir)
    {
        prepare(dir);
        const std::string h = hash_hex(setup.hash);
        const std::string seed = std::to_string(setup.config.seeds.master);
        CsvFile csv(dir + "/convergence.csv",
                    {"delta", "replication", "t", "rho", "gamma", "f0_hat_W", "f0_hat_dBm", "max_fu_hat", "restored",
                     "infeasible_count", "config_hash", "seed"});
        json runs = json::array();
        for (const ConvergenceRun &run : report.runs)
        {
            for (const TrajectoryRow &r : run.result.trajectory)
            {
                csv << run.delta << run.replication << r.t << r.rho << r.gamma << r.f0_hat_w << r.f0_hat_dbm
                    << r.max_fu_hat << (r.restored ? 1 : 0) << r.infeasible_count << h << seed;
                csv.end_row();
            }
            const double final_w = run.result.trajectory.back().f0_hat_w;
            runs.push_back({{"delta", run.delta},
                            {"replication", run.replication},
                            {"final_power_W", number(final_w)},
                            {"final_power_dBm", number(watts_to_dbm(final_w))},
                            {"converged", run.result.converged},
                            {"convergence_iteration", run.result.convergence_iteration},
                            {"infeasible_samples", run.result.infeasible_samples},
                            {"fallback_samples", run.result.fallback_samples},
                            {"restorations", run.result.restorations}});
        }
        json per_delta = json::array();
        for (std::size_t i = 0; i < report.deltas.size(); ++i)
            per_delta.push_back({{"delta", report.deltas[i]},
                                 {"mean_final_power_W", number(report.mean_final_power[i])},
                                 {"mean_final_power_dBm", number(watts_to_dbm(report.mean_final_power[i]))}});
        json j = header(setup);
        j["runs"] = runs;
        j["per_delta"] = per_delta;
        write_json(dir + "/convergence_summary.json", j);
    }

    void write_comparison(const Setup &setup, const ComparisonReport &report, const std::string &dir,
                          const std::string &stem)
    {
        prepare(dir);
        const std::string h = hash_hex(setup.hash);
        const std::string seed = std::to_string(setup.config.seeds.master);
        CsvFile csv(dir + "/" + stem + ".csv",
                    {"delta", "scheme", "avg_power_W", "avg_power_dBm", "mean_se", "qos_violation_rate",
                     "infeasible_slots", "slots", "config_hash", "seed"});
        json rows = json::array();
        std::vector<double> deltas;
        for (const ComparisonRow &r : report.rows)
        {
            const BaselineResult &b = r.result;
            const double mean_se = b.avg_se_per_user.size() ? b.avg_se_per_user.mean() : 0.0;
            csv << r.delta << b.name << b.avg_power_watts << watts_to_dbm(b.avg_power_watts) << mean_se
                << b.qos_violation_rate << b.infeasible_slots << b.slots << h << seed;
            csv.end_row();
            rows.push_back({{"delta", r.delta},
                            {"scheme", b.name},
                            {"avg_power_W", b.avg_power_watts},
                            {"avg_power_dBm", number(watts_to_dbm(b.avg_power_watts))},
                            {"avg_se_per_user", std::vector<double>(b.avg_se_per_user.data(),
                                                                    b.avg_se_per_user.data() + b.avg_se_per_user.size())},
                            {"qos_violation_rate", b.qos_violation_rate},
                            {"infeasible_slots", b.infeasible_slots},
                            {"slots", b.slots}});
            if (deltas.empty() || deltas.back() != r.delta)
                deltas.push_back(r.delta);
        }
        json checks = json::array();
        for (const double d : deltas)
            for (const OrderingCheck &c : ordering_checks(report, d))
                checks.push_back({{"delta", d},
                                  {"check", c.name},
                                  {"proposed_dBm", number(c.proposed_dbm)},
                                  {"other_dBm", number(c.other_dbm)},
                                  {"passed", c.passed}});
        json j = header(setup);
        j["intervals"] = report.intervals;
        j["rows"] = rows;
        j["ordering"] = checks;
        write_json(dir + "/" + stem + "_summary.json", j);
    }

    void write_quant(const Setup &setup, const QuantReport &report, const std::string &dir)
    {
        prepare(dir);
        const std::string h = hash_hex(setup.hash);
        const std::string seed = std::to_string(setup.config.seeds.master);
        CsvFile csv(dir + "/quantization.csv",
                    {"replication", "bits", "power_W", "power_dBm", "mean_se", "qos_violation_rate", "power_gap_dB",
                     "se_gap", "config_hash", "seed"});
        for (const QuantRow &r : report.rows)
        {
            csv << r.replication << r.bits << r.power_w << watts_to_dbm(r.power_w) << r.mean_se << r.violation_rate
                << r.power_gap_db << r.se_gap << h << seed;
            csv.end_row();
        }
        json per_bits = json::array();
        for (std::size_t b = 0; b < report.bits.size(); ++b)
            per_bits.push_back({{"bits", report.bits[b]},
                                {"mean_power_gap_dB", number(report.mean_power_gap_db[b])},
                                {"mean_se_gap", number(report.mean_se_gap[b])}});
        json j = header(setup);
        j["per_bits"] = per_bits;
        write_json(dir + "/quantization_summary.json", j);
    }
} // namespace hmimos
