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

#include "hmimos/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

namespace hmimos
{
    using nlohmann::json;

    namespace
    {
        void check_keys(const json &j, const std::set<std::string> &allowed, const std::string &where)
        {
            require(j.is_object(), where + ": expected an object");
            for (auto it = j.begin(); it != j.end(); ++it)
                require(allowed.count(it.key()) == 1, where + ": unknown key '" + it.key() + "'");
        }

        template <typename T>
        void read(const json &j, const char *key, T &out)
        {
            if (j.contains(key))
                out = j.at(key).get<T>();
        }

        const char *layout_name(FeedLayoutKind k) { return k == FeedLayoutKind::grid ? "grid" : "center"; }

        const char *mode_name(ComplexQuantMode m)
        {
            return m == ComplexQuantMode::real_imag ? "real_imag" : "magnitude_phase";
        }

        ComplexQuantMode mode_from(const std::string &s)
        {
            if (s == "real_imag")
                return ComplexQuantMode::real_imag;
            if (s == "magnitude_phase")
                return ComplexQuantMode::magnitude_phase;
            throw InvalidArgument("quant.complex_mode: expected real_imag or magnitude_phase, got '" + s + "'");
        }

        PanelSpec panel_overlay(const json &j, PanelSpec p)
        {
            check_keys(j, {"rows", "spacing_m", "wavelength_m", "feed_layout", "feed_k_side", "refractive_index"},
                       "panel");
            read(j, "rows", p.rows);
            read(j, "spacing_m", p.spacing);
            read(j, "wavelength_m", p.wavelength);
            read(j, "refractive_index", p.refractive_index);
            if (j.contains("feed_layout"))
            {
                const std::string s = j.at("feed_layout").get<std::string>();
                require(s == "grid" || s == "center", "panel.feed_layout: expected grid or center, got '" + s + "'");
                p.feeds.kind = s == "grid" ? FeedLayoutKind::grid : FeedLayoutKind::center;
                if (p.feeds.kind == FeedLayoutKind::center)
                    p.feeds.k_side = 1;
            }
            read(j, "feed_k_side", p.feeds.k_side);
            return p;
        }

        Scenario scenario_overlay(const json &j, Scenario s)
        {
            check_keys(j,
                       {"num_users", "bs_height_m", "ue_height_m", "max_horizontal_distance_m", "num_nlos_paths",
                        "carrier_frequency_hz", "bandwidth_hz", "noise_psd_dbm_hz"},
                       "scenario");
            read(j, "num_users", s.num_users);
            read(j, "bs_height_m", s.bs_height_m);
            read(j, "ue_height_m", s.ue_height_m);
            read(j, "max_horizontal_distance_m", s.max_horizontal_distance_m);
            read(j, "num_nlos_paths", s.num_nlos_paths);
            read(j, "carrier_frequency_hz", s.carrier_frequency_hz);
            read(j, "bandwidth_hz", s.bandwidth_hz);
            read(j, "noise_psd_dbm_hz", s.noise_psd_dbm_hz);
            return s;
        }

        json config_body(const ExperimentConfig &c)
        {
            json j;
            j["profile"] = c.profile;
            j["scenario"] = scenario_to_json(c.scenario);
            j["tx_panel"] = panel_to_json(c.tx);
            j["rx_panel"] = panel_to_json(c.rx);
            j["cssca"] = {{"t_h", c.cssca.t_h},
                          {"eps0", c.cssca.eps0},
                          {"eps_u", c.cssca.eps_u},
                          {"n_iter", c.cssca.n_iter},
                          {"convergence_window", c.cssca.convergence_window},
                          {"convergence_tol", c.cssca.convergence_tol},
                          {"socp_tol", c.cssca.socp.tol},
                          {"socp_max_iters", c.cssca.socp.max_iters}};
            j["delta_bits_per_hz"] = c.delta_bits_per_hz;
            j["convergence_deltas"] = c.convergence_deltas;
            j["sweep_deltas"] = c.sweep_deltas;
            j["slots_per_interval"] = c.slots_per_interval;
            j["intervals"] = c.intervals;
            j["seeds"] = {{"master", c.seeds.master}, {"replications", c.seeds.replications}};
            j["quant"] = {{"mu", c.quant.mu}, {"bits", c.quant.bits}, {"complex_mode", mode_name(c.quant.complex_mode)}};
            j["baselines"] = c.baselines;
            j["ao"] = {{"max_alternations", c.ao_max_alternations}, {"tol", c.ao_tol}};
            return j;
        }
    } // namespace

    json panel_to_json(const PanelSpec &spec)
    {
        return {{"rows", spec.rows},
                {"spacing_m", spec.spacing},
                {"wavelength_m", spec.wavelength},
                {"feed_layout", layout_name(spec.feeds.kind)},
                {"feed_k_side", spec.feeds.k_side},
                {"refractive_index", spec.refractive_index}};
    }

    PanelSpec panel_from_json(const json &j) { return panel_overlay(j, PanelSpec{}); }

    json scenario_to_json(const Scenario &s)
    {
        return {{"num_users", s.num_users},
                {"bs_height_m", s.bs_height_m},
                {"ue_height_m", s.ue_height_m},
                {"max_horizontal_distance_m", s.max_horizontal_distance_m},
                {"num_nlos_paths", s.num_nlos_paths},
                {"carrier_frequency_hz", s.carrier_frequency_hz},
                {"bandwidth_hz", s.bandwidth_hz},
                {"noise_psd_dbm_hz", s.noise_psd_dbm_hz}};
    }

    Scenario scenario_from_json(const json &j) { return scenario_overlay(j, Scenario{}); }

    std::vector<std::string> scheme_names()
    {
        return {"proposed", "ao", "ots", "tts_fixed", "random_amplitude", "sdma"};
    }

    ExperimentConfig profile_config(const std::string &name)
    {
        ExperimentConfig c;
        c.profile = name;
        const double lambda = kSpeedOfLight / c.scenario.carrier_frequency_hz;
        c.tx = PanelSpec{16, lambda / 4.0, lambda, FeedLayout::grid(3), 1.0};
        c.rx = PanelSpec{6, lambda / 4.0, lambda, FeedLayout::center(), 1.0};
        if (name == "table1")
            return c;
        if (name == "ci")
        {
            c.scenario.num_users = 2;
            c.tx.rows = 8;
            c.tx.feeds = FeedLayout::grid(2);
            c.rx.rows = 4;
            c.cssca.t_h = 4;
            c.cssca.n_iter = 60;
            c.cssca.convergence_window = 10;
            c.seeds.replications = 5;
            return c;
        }
        throw InvalidArgument("unknown profile '" + name + "' (expected table1 or ci)");
    }

    void validate_config(const ExperimentConfig &c)
    {
        validate_scenario(c.scenario);
        validate_panel(build_panel(c.tx));
        validate_panel(build_panel(c.rx));
        require(c.tx.feeds.kind == FeedLayoutKind::grid, "tx_panel: the transmit panel needs a feed grid");
        require(c.rx.feeds.kind == FeedLayoutKind::center, "rx_panel: the receive panel has a single centre feed");
        const double lambda = kSpeedOfLight / c.scenario.carrier_frequency_hz;
        for (const PanelSpec *p : {&c.tx, &c.rx})
            require(std::abs(p->wavelength - lambda) <= 1e-9 * lambda,
                    "panel wavelength_m does not match scenario.carrier_frequency_hz");
        CsscaConfig cs = c.cssca;
        cs.qos = make_qos(c);
        validate_cssca_config(cs);
        const auto finite_nonneg = [](const std::vector<double> &v) {
            return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x) && x >= 0.0; });
        };
        require(!c.convergence_deltas.empty() && finite_nonneg(c.convergence_deltas),
                "convergence_deltas: need at least one non-negative value");
        require(!c.sweep_deltas.empty() && finite_nonneg(c.sweep_deltas),
                "sweep_deltas: need at least one non-negative value");
        require(c.slots_per_interval >= 1, "slots_per_interval must be >= 1");
        require(c.intervals >= 1, "intervals must be >= 1");
        require(c.seeds.replications >= 1, "seeds.replications must be >= 1");
        require(!c.quant.bits.empty(), "quant.bits: need at least one entry");
        for (int b : c.quant.bits)
            validate_quant_spec(QuantSpec{c.quant.mu, b, c.quant.complex_mode});
        const std::vector<std::string> known = scheme_names();
        for (const std::string &b : c.baselines)
            require(b != "proposed" && std::find(known.begin(), known.end(), b) != known.end(),
                    "baselines: unknown scheme '" + b + "'");
        require(c.ao_max_alternations >= 1, "ao.max_alternations must be >= 1");
        require(c.ao_tol > 0.0, "ao.tol must be positive");
    }

    json config_to_json(const ExperimentConfig &c)
    {
        json j = config_body(c);
        j["execution"] = c.cssca.execution == ExecutionPolicy::parallel ? "parallel" : "serial";
        j["output_dir"] = c.output_dir;
        return j;
    }

    ExperimentConfig config_from_json(const json &j, const ExperimentConfig &base)
    {
        check_keys(j,
                   {"profile", "scenario", "tx_panel", "rx_panel", "cssca", "delta_bits_per_hz",
                    "convergence_deltas", "sweep_deltas", "slots_per_interval", "intervals", "seeds", "quant",
                    "baselines", "ao", "execution", "output_dir"},
                   "config");
        ExperimentConfig c = base;
        read(j, "profile", c.profile);
        if (j.contains("scenario"))
            c.scenario = scenario_overlay(j.at("scenario"), c.scenario);
        if (j.contains("tx_panel"))
            c.tx = panel_overlay(j.at("tx_panel"), c.tx);
        if (j.contains("rx_panel"))
            c.rx = panel_overlay(j.at("rx_panel"), c.rx);
        if (j.contains("cssca"))
        {
            const json &s = j.at("cssca");
            check_keys(s,
                       {"t_h", "eps0", "eps_u", "n_iter", "convergence_window", "convergence_tol", "socp_tol",
                        "socp_max_iters"},
                       "cssca");
            read(s, "t_h", c.cssca.t_h);
            read(s, "eps0", c.cssca.eps0);
            read(s, "eps_u", c.cssca.eps_u);
            read(s, "n_iter", c.cssca.n_iter);
            read(s, "convergence_window", c.cssca.convergence_window);
            read(s, "convergence_tol", c.cssca.convergence_tol);
            read(s, "socp_tol", c.cssca.socp.tol);
            read(s, "socp_max_iters", c.cssca.socp.max_iters);
        }
        if (j.contains("delta_bits_per_hz"))
        {
            const json &d = j.at("delta_bits_per_hz");
            c.delta_bits_per_hz = d.is_number() ? std::vector<double>{d.get<double>()} : d.get<std::vector<double>>();
        }
        read(j, "convergence_deltas", c.convergence_deltas);
        read(j, "sweep_deltas", c.sweep_deltas);
        read(j, "slots_per_interval", c.slots_per_interval);
        read(j, "intervals", c.intervals);
        if (j.contains("seeds"))
        {
            check_keys(j.at("seeds"), {"master", "replications"}, "seeds");
            read(j.at("seeds"), "master", c.seeds.master);
            read(j.at("seeds"), "replications", c.seeds.replications);
        }
        if (j.contains("quant"))
        {
            const json &q = j.at("quant");
            check_keys(q, {"mu", "bits", "complex_mode"}, "quant");
            read(q, "mu", c.quant.mu);
            read(q, "bits", c.quant.bits);
            if (q.contains("complex_mode"))
                c.quant.complex_mode = mode_from(q.at("complex_mode").get<std::string>());
        }
        read(j, "baselines", c.baselines);
        if (j.contains("ao"))
        {
            check_keys(j.at("ao"), {"max_alternations", "tol"}, "ao");
            read(j.at("ao"), "max_alternations", c.ao_max_alternations);
            read(j.at("ao"), "tol", c.ao_tol);
        }
        if (j.contains("execution"))
        {
            const std::string e = j.at("execution").get<std::string>();
            require(e == "parallel" || e == "serial", "execution: expected parallel or serial");
            c.cssca.execution = e == "parallel" ? ExecutionPolicy::parallel : ExecutionPolicy::serial;
        }
        read(j, "output_dir", c.output_dir);
        return c;
    }

    ExperimentConfig load_config(const std::string &profile, const std::optional<std::string> &path)
    {
        ExperimentConfig c = profile_config(profile);
        if (path)
        {
            std::ifstream in(*path);
            require(static_cast<bool>(in), "cannot open config file " + *path);
            json j;
            try
            {
                in >> j;
            }
            catch (const json::exception &e)
            {
                throw InvalidArgument("config file " + *path + ": " + e.what());
            }
            c = config_from_json(j, c);
        }
        validate_config(c);
        return c;
    }

    std::uint64_t config_hash(const ExperimentConfig &config)
    {
        const std::string text = config_body(config).dump();
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (const unsigned char ch : text)
        {
            h ^= ch;
            h *= 0x100000001b3ULL;
        }
        return h;
    }

    std::string hash_hex(std::uint64_t hash)
    {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
        return buf;
    }

    QosSpec make_qos(const ExperimentConfig &config)
    {
        const int u = config.scenario.num_users;
        const std::vector<double> &d = config.delta_bits_per_hz;
        require(d.size() == 1 || static_cast<int>(d.size()) == u,
                "delta_bits_per_hz: expected one value or one per user");
        QosSpec q;
        q.delta = d.size() == 1 ? VectorXd::Constant(u, d.front()) : Eigen::Map<const VectorXd>(d.data(), u).eval();
        q.sigma2 = noise_power(config.scenario.noise_psd_dbm_hz, config.scenario.bandwidth_hz);
        return q;
    }

    QosSpec make_qos(const ExperimentConfig &config, double delta)
    {
        QosSpec q = make_qos(config);
        q.delta.setConstant(delta);
        return q;
    }
} // namespace hmimos
