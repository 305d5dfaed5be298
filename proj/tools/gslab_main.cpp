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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gslab/counting.hpp"
#include "gslab/graphs.hpp"
#include "gslab/io.hpp"
#include "gslab/optics.hpp"
#include "gslab/witness.hpp"

namespace fs = std::filesystem;
using gslab::json;

namespace {

struct CommonOptions {
    std::string preset;
    std::string config_path;
    std::string noise_json;
    std::string out_dir = "gslab_out";
    std::uint64_t seed = 0;
    bool seed_given = false;
};

std::uint64_t resolve_seed(const CommonOptions& opts) {
    if (opts.seed_given) return opts.seed;
    if (const char* env = std::getenv("GSLAB_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0') {
            throw std::invalid_argument("GSLAB_SEED is not an unsigned integer");
        }
        return v;
    }
    return 0;
}

std::pair<gslab::SetupConfig, gslab::NoiseModel> resolve_setup(const CommonOptions& opts) {
    gslab::SetupConfig config;
    gslab::NoiseModel noise;
    if (!opts.config_path.empty()) {
        std::ifstream in(opts.config_path);
        if (!in) throw std::runtime_error("cannot open config file '" + opts.config_path + "'");
        json j = json::parse(in);
        std::tie(config, noise) = gslab::setup_from_json(j);
    } else if (!opts.preset.empty()) {
        config = gslab::SetupConfig::preset(gslab::preset_from_string(opts.preset));
    } else {
        throw std::invalid_argument("either --preset or --config is required");
    }
    if (!opts.noise_json.empty()) {
        noise = opts.noise_json == "ideal"
                    ? gslab::NoiseModel::ideal()
                    : gslab::noise_from_json(json::parse(opts.noise_json));
    }
    return {config, noise};
}

fs::path prepare_out_dir(const CommonOptions& opts) {
    fs::path dir(opts.out_dir);
    fs::create_directories(dir);
    return dir;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
}

void write_manifest(const fs::path& dir, const std::string& subcommand,
                    const CommonOptions& opts, std::uint64_t seed, json parameters) {
    json manifest = {{"schema", gslab::kSchemaVersion},
                     {"subcommand", subcommand},
                     {"config_path", opts.config_path.empty() ? json(nullptr)
                                                              : json(opts.config_path)},
                     {"out_dir", opts.out_dir},
                     {"seed", seed},
                     {"parameters", std::move(parameters)}};
    write_text(dir / "run_manifest.json", manifest.dump(2) + "\n");
}

json state_to_json(const gslab::MixedState& state) {
    json data = json::array();
    for (int i = 0; i < state.dim(); ++i) {
        for (int j2 = 0; j2 < state.dim(); ++j2) {
            const auto v = state.matrix(i, j2);
            data.push_back({v.real(), v.imag()});
        }
    }
    return json{{"schema", gslab::kSchemaVersion},
                {"n_qubits", state.n_qubits},
                {"rows", state.dim()},
                {"data", std::move(data)}};
}

void attach_common(CLI::App* cmd, CommonOptions& opts, bool with_setup = true) {
    if (with_setup) {
        auto* p = cmd->add_option("--preset", opts.preset, "setup preset: ghz6 or cluster6");
        auto* c = cmd->add_option("--config", opts.config_path, "setup config JSON file");
        p->excludes(c);
        cmd->add_option("--noise", opts.noise_json,
                        "noise as JSON object or the word \"ideal\" (overrides config noise)");
    }
    cmd->add_option("--out", opts.out_dir, "output directory (default gslab_out)");
    cmd->add_option("--seed", opts.seed, "sampling seed (fallback: GSLAB_SEED env, then 0)")
        ->each([&opts](const std::string&) { opts.seed_given = true; });
}

int cmd_build(const CommonOptions& opts, bool dump_state) {
    auto [config, noise] = resolve_setup(opts);
    const gslab::FusionOutcome outcome = gslab::build_setup(config, noise);

    const double f_ghz = gslab::fidelity(outcome.state, gslab::ghz_state(6));
    const double f_cluster = gslab::fidelity(outcome.state, gslab::cluster_state_six());
    json summary = {{"schema", gslab::kSchemaVersion},
                    {"n_qubits", outcome.state.n_qubits},
                    {"success_probability", outcome.success_probability},
                    {"fidelity_ghz6", f_ghz},
                    {"fidelity_cluster6", f_cluster}};

    const fs::path dir = prepare_out_dir(opts);
    write_text(dir / "build_summary.json", summary.dump(2) + "\n");
    if (dump_state) write_text(dir / "state.json", state_to_json(outcome.state).dump() + "\n");
    write_manifest(dir, "build", opts, 0, json{{"dump_state", dump_state}});
    std::cout << summary.dump(2) << std::endl;
    return 0;
}

int cmd_witness(const CommonOptions& opts, const std::string& plan_name,
                std::optional<double> white_noise, std::int64_t events, bool analytic) {
    const gslab::WitnessPlan plan = gslab::witness_plan_by_name(plan_name);
    gslab::MixedState state;
    if (white_noise) {
        if (!opts.preset.empty() || !opts.config_path.empty()) {
            throw std::invalid_argument("--white-noise excludes --preset/--config");
        }
        state = gslab::white_noise_state(plan.target, *white_noise);
    } else {
        auto [config, noise] = resolve_setup(opts);
        state = gslab::build_setup(config, noise).state;
    }

    const std::uint64_t seed = resolve_seed(opts);
    const gslab::ProtocolRun run = gslab::run_protocol(state, plan, events, seed, analytic);

    const fs::path dir = prepare_out_dir(opts);
    write_text(dir / "report.json", gslab::report_to_json(run.report).dump(2) + "\n");

    if (analytic) {
        std::ostringstream csv;
        gslab::write_distributions_csv(csv, plan.settings, run.distributions);
        write_text(dir / "distributions.csv", csv.str());
    } else {
        std::ostringstream csv;
        gslab::write_counts_csv(csv, run.records);
        write_text(dir / "counts.csv", csv.str());
    }

    // Figure-style plot data, derived from the same records (or exact
    // distributions in analytic mode).
    auto histogram_csv = [&](size_t setting_index) {
        std::ostringstream out;
        if (analytic) {
            out << "outcome_bits,probability\n";
            for (int o = 0; o < 64; ++o) {
                out << gslab::outcome_bits(o) << ","
                    << gslab::detail::fmt_double(run.distributions[setting_index](o)) << "\n";
            }
        } else {
            out << "outcome_bits,count\n";
            for (int o = 0; o < 64; ++o) {
                out << gslab::outcome_bits(o) << "," << run.records[setting_index].counts[o]
                    << "\n";
            }
        }
        return out.str();
    };

    if (plan.name == "W_G") {
        write_text(dir / "hv_histogram.csv", histogram_csv(0));
        std::ostringstream out;
        out << "n,mean,stderr\n";
        for (size_t i = 1; i < plan.settings.size(); ++i) {
            const int n = plan.settings[i].qubits[0].m_index;
            if (analytic) {
                std::vector<int> signs(64);
                for (int o = 0; o < 64; ++o) {
                    signs[o] = std::popcount(unsigned(o)) % 2 == 0 ? 1 : -1;
                }
                double mean = 0.0;
                for (int o = 0; o < 64; ++o) mean += signs[o] * run.distributions[i](o);
                out << n << "," << gslab::detail::fmt_double(mean) << ",0\n";
            } else {
                std::vector<int> signs(64);
                for (int o = 0; o < 64; ++o) {
                    signs[o] = std::popcount(unsigned(o)) % 2 == 0 ? 1 : -1;
                }
                const gslab::EstimatedValue ev = gslab::parity_expectation(run.records[i], signs);
                out << n << "," << gslab::detail::fmt_double(ev.mean) << ","
                    << gslab::detail::fmt_double(ev.std_error) << "\n";
            }
        }
        write_text(dir / "mn_expectations.csv", out.str());
    } else {
        write_text(dir / "zzzxxx_histogram.csv", histogram_csv(0));
        write_text(dir / "xxxzzz_histogram.csv", histogram_csv(1));
        std::ostringstream out;
        out << "generator,mean,stderr\n";
        for (const auto& g : gslab::stabilizers_of_c6().generators) {
            for (size_t i = 0; i < 2; ++i) {
                if (!gslab::measurable_under(g, plan.settings[i])) continue;
                if (analytic) {
                    double mean = 0.0;
                    for (int o = 0; o < 64; ++o) {
                        mean += gslab::outcome_sign(g, o) * run.distributions[i](o);
                    }
                    out << g.str() << "," << gslab::detail::fmt_double(mean) << ",0\n";
                } else {
                    const gslab::EstimatedValue ev = gslab::parity_expectation(
                        run.records[i], gslab::sign_assignment_for(g, plan.settings[i]));
                    out << g.str() << "," << gslab::detail::fmt_double(ev.mean) << ","
                        << gslab::detail::fmt_double(ev.std_error) << "\n";
                }
                break;
            }
        }
        write_text(dir / "stabilizer_expectations.csv", out.str());
    }

    write_manifest(dir, "witness", opts, seed,
                   json{{"plan", plan_name},
                        {"events", events},
                        {"analytic", analytic},
                        {"white_noise", white_noise ? json(*white_noise) : json(nullptr)}});
    std::cout << gslab::report_to_json(run.report).dump(2) << std::endl;
    return 0;
}

int cmd_scan(const CommonOptions& opts, const std::string& plan_name, double pmin, double pmax,
             int steps) {
    if (!(pmin >= 0.0 && pmax <= 1.0 && pmin <= pmax)) {
        throw std::invalid_argument("scan: grid must satisfy 0 <= pmin <= pmax <= 1");
    }
    if (steps < 2) throw std::invalid_argument("scan: need at least two grid points");
    const gslab::WitnessPlan plan = gslab::witness_plan_by_name(plan_name);

    std::ostringstream csv;
    csv << "p,value\n";
    for (int i = 0; i < steps; ++i) {
        const double p = pmin + (pmax - pmin) * double(i) / double(steps - 1);
        const double value =
            gslab::expectation(gslab::white_noise_state(plan.target, p), plan.observable);
        csv << gslab::detail::fmt_double(p) << "," << gslab::detail::fmt_double(value) << "\n";
    }
    const double p_star = gslab::noise_threshold(plan, plan.target);

    const fs::path dir = prepare_out_dir(opts);
    write_text(dir / "scan.csv", csv.str());
    json summary = {{"schema", gslab::kSchemaVersion}, {"plan", plan.name}, {"p_star", p_star}};
    write_text(dir / "scan.json", summary.dump(2) + "\n");
    write_manifest(dir, "scan", opts, 0,
                   json{{"plan", plan_name}, {"pmin", pmin}, {"pmax", pmax}, {"steps", steps}});
    std::cout << summary.dump(2) << std::endl;
    return 0;
}

int cmd_fringe(const CommonOptions& opts, double overlap, double v_hv, double v_pm, int points) {
    gslab::NoiseModel noise;
    noise.pair_visibility_hv = v_hv;
    noise.pair_visibility_pm = v_pm;
    noise.validate();
    if (overlap < 0.0 || overlap > 1.0) {
        throw std::invalid_argument("fringe: overlap out of [0,1]");
    }

    // Four-photon pipeline: two pairs fused on the middle modes.
    const gslab::MixedState pair = gslab::epr_pair(noise);
    gslab::Mat rho4 = Eigen::kroneckerProduct(pair.matrix, pair.matrix).eval();
    const gslab::FusionOutcome fused =
        gslab::pbs_fusion(gslab::MixedState(4, std::move(rho4)), 2, 3, overlap);

    const auto scan = gslab::fringe_scan(fused.state, points);
    const double visibility = gslab::fringe_visibility(scan);

    const fs::path dir = prepare_out_dir(opts);
    std::ostringstream csv;
    gslab::write_fringe_csv(csv, scan);
    write_text(dir / "fringe.csv", csv.str());
    json summary = {{"schema", gslab::kSchemaVersion},
                    {"visibility", visibility},
                    {"success_probability", fused.success_probability}};
    write_text(dir / "fringe.json", summary.dump(2) + "\n");
    write_manifest(dir, "fringe", opts, 0,
                   json{{"overlap", overlap}, {"v_hv", v_hv}, {"v_pm", v_pm}, {"points", points}});
    std::cout << summary.dump(2) << std::endl;
    return 0;
}

int cmd_graphs_list() {
    json names = json::array();
    for (const auto& n : gslab::named_graph_names()) names.push_back(n);
    std::cout << json{{"schema", gslab::kSchemaVersion}, {"graphs", names}}.dump(2) << std::endl;
    return 0;
}

int cmd_graphs_export(const CommonOptions& opts, const std::string& name) {
    const gslab::Graph g = gslab::named_graph(name);
    const json j = gslab::graph_to_json(g);
    const fs::path dir = prepare_out_dir(opts);
    write_text(dir / (name + ".json"), j.dump(2) + "\n");
    write_manifest(dir, "graphs export", opts, 0, json{{"name", name}});
    std::cout << j.dump(2) << std::endl;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Six-photon graph-state simulator and witness toolkit"};
    app.require_subcommand(1);

    CommonOptions build_opts;
    bool dump_state = false;
    auto* build = app.add_subcommand("build", "build a six-photon state and report fidelities");
    attach_common(build, build_opts);
    build->add_flag("--dump-state", dump_state, "also write the full density matrix");

    CommonOptions witness_opts;
    std::string witness_plan = "ghz";
    std::int64_t events = 64;
    bool analytic = false;
    double white_noise_p = -1.0;
    auto* witness = app.add_subcommand("witness", "simulate the witness measurement protocol");
    attach_common(witness, witness_opts);
    witness->add_option("--plan", witness_plan, "witness plan: ghz or cluster")->required();
    witness->add_option("--events", events, "sixfold events per setting (default 64)");
    witness->add_flag("--analytic", analytic, "use exact distributions instead of sampling");
    witness->add_option("--white-noise", white_noise_p,
                        "evaluate on p*target + (1-p)*I/64 instead of an optical setup");

    CommonOptions scan_opts;
    std::string scan_plan = "ghz";
    double pmin = 0.0, pmax = 1.0;
    int steps = 11;
    auto* scan = app.add_subcommand("scan", "white-noise robustness scan and threshold");
    attach_common(scan, scan_opts, /*with_setup=*/false);
    scan->add_option("--plan", scan_plan, "witness plan: ghz or cluster")->required();
    scan->add_option("--pmin", pmin, "grid start (default 0)");
    scan->add_option("--pmax", pmax, "grid end (default 1)");
    scan->add_option("--steps", steps, "grid points (default 11)");

    CommonOptions fringe_opts;
    double overlap = 1.0, v_hv = 1.0, v_pm = 1.0;
    int points = 73;
    auto* fringe = app.add_subcommand("fringe", "four-photon x-y plane interference fringe");
    attach_common(fringe, fringe_opts, /*with_setup=*/false);
    fringe->add_option("--overlap", overlap, "fusion photon overlap (default 1)");
    fringe->add_option("--v-hv", v_hv, "pair visibility in the H/V basis (default 1)");
    fringe->add_option("--v-pm", v_pm, "pair visibility in the +/- basis (default 1)");
    fringe->add_option("--points", points, "scan points over [0, pi] (default 73)");

    CommonOptions graphs_opts;
    std::string graph_name;
    auto* graphs = app.add_subcommand("graphs", "list or export the named graphs");
    auto* graphs_list = graphs->add_subcommand("list", "list available graph names");
    auto* graphs_export = graphs->add_subcommand("export", "write one graph as JSON");
    graphs_export->add_option("--name", graph_name, "graph name")->required();
    attach_common(graphs_export, graphs_opts, /*with_setup=*/false);
    graphs->require_subcommand(1);

    CLI11_PARSE(app, argc, argv);

    try {
        if (build->parsed()) return cmd_build(build_opts, dump_state);
        if (witness->parsed()) {
            std::optional<double> wn;
            if (white_noise_p >= 0.0) wn = white_noise_p;
            return cmd_witness(witness_opts, witness_plan, wn, events, analytic);
        }
        if (scan->parsed()) return cmd_scan(scan_opts, scan_plan, pmin, pmax, steps);
        if (fringe->parsed()) return cmd_fringe(fringe_opts, overlap, v_hv, v_pm, points);
        if (graphs->parsed()) {
            if (graphs_list->parsed()) return cmd_graphs_list();
            if (graphs_export->parsed()) return cmd_graphs_export(graphs_opts, graph_name);
        }
        throw std::logic_error("no subcommand dispatched");
    } catch (const std::invalid_argument& e) {
        std::cerr << gslab::error_to_json("invalid_argument", e.what()).dump() << std::endl;
        return 1;
    } catch (const std::out_of_range& e) {
        std::cerr << gslab::error_to_json("out_of_range", e.what()).dump() << std::endl;
        return 1;
    } catch (const std::exception& e) {
        std::cerr << gslab::error_to_json("runtime_error", e.what()).dump() << std::endl;
        return 1;
    }
}
