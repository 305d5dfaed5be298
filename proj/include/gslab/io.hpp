// Copyright 2026 The gslab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "gslab/counting.hpp"
#include "gslab/graphs.hpp"
#include "gslab/optics.hpp"
#include "gslab/witness.hpp"

namespace gslab {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

namespace detail {

inline void check_schema(const json& j, const char* what) {
    if (j.contains("schema") && j.at("schema") != kSchemaVersion) {
        throw std::invalid_argument(std::string(what) + ": unsupported schema version");
    }
}

inline void check_keys(const json& j, std::initializer_list<const char*> allowed,
                       const char* what) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : allowed) known = known || it.key() == k;
        if (!known) {
            throw std::invalid_argument(std::string(what) + ": unknown field '" + it.key() + "'");
        }
    }
}

/// Shortest-exact decimal for CSV output; deterministic across runs.
inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

// --- Graphs ------------------------------------------------------------------

inline json graph_to_json(const Graph& g) {
    json edges = json::array();
    for (auto [a, b] : g.edges) edges.push_back({a, b});
    return json{{"schema", kSchemaVersion}, {"n", g.n_vertices}, {"edges", edges}};
}

inline Graph graph_from_json(const json& j) {
    detail::check_schema(j, "graph");
    detail::check_keys(j, {"schema", "n", "edges"}, "graph");
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2) {
            throw std::invalid_argument("graph: each edge must be a pair");
        }
        edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    return Graph(j.at("n").get<int>(), edges);
}

// --- Setup + noise -------------------------------------------------------------

inline NoiseModel noise_from_json(const json& j) {
    NoiseModel noise;
    if (j.is_string() && j.get<std::string>() == "ideal") return noise;
    if (!j.is_object()) throw std::invalid_argument("noise: expected an object or \"ideal\"");
    detail::check_keys(j, {"schema", "v_hv", "v_pm", "overlap", "lambda"}, "noise");
    detail::check_schema(j, "noise");
    if (j.contains("v_hv")) noise.pair_visibility_hv = j.at("v_hv").get<double>();
    if (j.contains("v_pm")) noise.pair_visibility_pm = j.at("v_pm").get<double>();
    if (j.contains("overlap")) noise.fusion_overlap = j.at("overlap").get<std::vector<double>>();
    if (j.contains("lambda")) noise.pair_amplitude = j.at("lambda").get<double>();
    noise.validate();
    return noise;
}

inline json noise_to_json(const NoiseModel& noise) {
    return json{{"v_hv", noise.pair_visibility_hv},
                {"v_pm", noise.pair_visibility_pm},
                {"overlap", noise.fusion_overlap},
                {"lambda", noise.pair_amplitude}};
}

/// Parse {"preset": ..., "sources": ..., "waveplates": ..., "fusions": ...,
/// "noise": ..., "postselect": ...}.  A preset fills in the defaults; explicit
/// fields override it.
inline std::pair<SetupConfig, NoiseModel> setup_from_json(const json& j) {
    detail::check_schema(j, "setup");
    detail::check_keys(
        j, {"schema", "preset", "sources", "waveplates", "fusions", "noise", "postselect"},
        "setup");

    SetupConfig config;
    if (j.contains("preset") && !j.at("preset").is_null()) {
        config = SetupConfig::preset(preset_from_string(j.at("preset").get<std::string>()));
    }
    if (j.contains("sources")) {
        config.sources.clear();
        for (const auto& s : j.at("sources")) {
            config.sources.emplace_back(s.at(0).get<int>(), s.at(1).get<int>());
        }
    }
    if (j.contains("waveplates")) {
        config.waveplates.clear();
        for (const auto& wp : j.at("waveplates")) {
            detail::check_keys(wp, {"mode", "kind", "deg"}, "waveplate");
            const std::string kind = wp.at("kind").get<std::string>();
            WaveplateKind wk;
            if (kind == "HWP") {
                wk = WaveplateKind::HWP;
            } else if (kind == "QWP") {
                wk = WaveplateKind::QWP;
            } else {
                throw std::invalid_argument("waveplate: kind must be HWP or QWP");
            }
            config.waveplates.push_back({wp.at("mode").get<int>(), wk, wp.at("deg").get<double>()});
        }
    }
    if (j.contains("fusions")) {
        config.fusions.clear();
        for (const auto& f : j.at("fusions")) {
            config.fusions.emplace_back(f.at(0).get<int>(), f.at(1).get<int>());
        }
    }
    if (j.contains("postselect")) config.postselect = j.at("postselect").get<bool>();
    config.validate();

    NoiseModel noise;
    if (j.contains("noise")) noise = noise_from_json(j.at("noise"));
    return {config, noise};
}

// --- Witness reports ------------------------------------------------------------

inline json report_to_json(const WitnessReport& r) {
    // Non-finite sigmas (analytic mode) map to null.
    const json sigmas =
        std::isfinite(r.sigmas_below_zero) ? json(r.sigmas_below_zero) : json(nullptr);
    return json{{"schema", kSchemaVersion},
                {"witness", r.witness_name},
                {"value", r.value},
                {"stderr", r.std_error},
                {"fidelity_bound", r.fidelity_bound},
                {"genuine_multipartite", r.genuine_multipartite},
                {"sigmas_below_zero", sigmas}};
}

inline WitnessReport report_from_json(const json& j) {
    detail::check_schema(j, "report");
    WitnessReport r;
    r.witness_name = j.at("witness").get<std::string>();
    r.value = j.at("value").get<double>();
    r.std_error = j.at("stderr").get<double>();
    r.fidelity_bound = j.at("fidelity_bound").get<double>();
    r.genuine_multipartite = j.at("genuine_multipartite").get<bool>();
    r.sigmas_below_zero =
        j.at("sigmas_below_zero").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                            : j.at("sigmas_below_zero").get<double>();
    return r;
}

// --- CSV -------------------------------------------------------------------------

inline std::string outcome_bits(int outcome) {
    std::string s(6, '0');
    for (int q = 1; q <= 6; ++q) {
        if (bit_of(outcome, 6, q)) s[q - 1] = '1';
    }
    return s;
}

inline void write_counts_csv(std::ostream& out, const std::vector<CountRecord>& records) {
    out << "setting_label,outcome_bits,count\n";
    for (const auto& rec : records) {
        for (int o = 0; o < 64; ++o) {
            out << rec.setting.label << "," << outcome_bits(o) << "," << rec.counts[o] << "\n";
        }
    }
}

inline void write_distributions_csv(std::ostream& out,
                                    const std::vector<MeasurementSetting>& settings,
                                    const std::vector<Eigen::VectorXd>& distributions) {
    out << "setting_label,outcome_bits,probability\n";
    for (size_t i = 0; i < settings.size(); ++i) {
        for (int o = 0; o < 64; ++o) {
            out << settings[i].label << "," << outcome_bits(o) << ","
                << detail::fmt_double(distributions[i](o)) << "\n";
        }
    }
}

inline void write_fringe_csv(std::ostream& out, const std::vector<FringePoint>& points) {
    out << "phi_radians,expectation\n";
    for (const auto& pt : points) {
        out << detail::fmt_double(pt.phi) << "," << detail::fmt_double(pt.expectation) << "\n";
    }
}

inline json error_to_json(const std::string& type, const std::string& message) {
    return json{{"error", {{"type", type}, {"message", message}}}};
}

}  // namespace gslab
