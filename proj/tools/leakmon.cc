// Copyright 2026 The leakmon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Command-line driver: simulate, calibrate, detect, decode, analyze, pareto, oracle, steady-state.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fmt/format.h"
#include "fmt/ostream.h"
#include "json.hpp"
#include "leakmon/analysis.h"
#include "leakmon/config.h"
#include "leakmon/dataset.h"
#include "leakmon/decoder.h"
#include "leakmon/hmm.h"
#include "leakmon/oracle.h"
#include "leakmon/serialize.h"

using namespace leakmon;
namespace fs = std::filesystem;

namespace {

struct Paths {
    std::string config;
    std::string out = ".";
    std::string dataset;
    std::string models;
    std::string decoder;
    std::string traces;
    std::string decoded;
};

struct Overrides {
    int64_t seed = -1;
    size_t workers = 0;
};

std::string in_out(const Paths &p, const std::string &explicit_path, const char *name) {
    return explicit_path.empty() ? (fs::path(p.out) / name).string() : explicit_path;
}

RunConfig resolve_config(const Paths &paths, const Overrides &ov) {
    RunConfig cfg = paths.config.empty() ? RunConfig{} : load_config(paths.config);
    if (const char *env = std::getenv("LEAKMON_SEED")) {
        cfg.seed = std::stoull(env);
    }
    if (ov.seed >= 0) {
        cfg.seed = (uint64_t)ov.seed;
    }
    if (ov.workers > 0) {
        cfg.workers = ov.workers;
    }
    cfg.validate();
    return cfg;
}

void write_json(const std::string &path, const nlohmann::json &j) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    out << j.dump(2) << '\n';
}

nlohmann::json read_json(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    return nlohmann::json::parse(in);
}

std::string tracked_name(const Layout &layout, size_t t) {
    return layout.qubits[layout.tracked_qubits()[t]].id.str();
}

void write_success(const std::string &path, const SuccessTable &success, const nlohmann::json &header) {
    std::ofstream out(path);
    out << "# " << header.dump() << '\n';
    out << "run";
    size_t n = success.empty() ? 0 : success[0].size();
    for (size_t k = 1; k <= n; k++) {
        out << ",n" << k;
    }
    out << '\n';
    for (size_t r = 0; r < success.size(); r++) {
        out << r;
        for (uint8_t v : success[r]) {
            out << ',' << (int)v;
        }
        out << '\n';
    }
}

SuccessTable read_success(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    SuccessTable table;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("run", 0) == 0) {
            continue;
        }
        std::stringstream ss(line);
        std::string cell;
        std::getline(ss, cell, ',');
        std::vector<uint8_t> row;
        while (std::getline(ss, cell, ',')) {
            row.push_back((uint8_t)std::stoi(cell));
        }
        table.push_back(std::move(row));
    }
    return table;
}

int cmd_simulate(const Paths &paths, const Overrides &ov, bool csv) {
    auto cfg = resolve_config(paths, ov);
    auto layout = cfg.build_layout();
    auto ds = simulate_dataset(layout, cfg.params, cfg.n_runs, cfg.n_cycles, cfg.seed, cfg.workers);
    ds.header["config"] = reproducible_config(cfg);
    ds.header["config_hash"] = config_hash(cfg);
    ds.header["stage"] = "simulate";
    fs::create_directories(paths.out);
    auto path = in_out(paths, paths.dataset, "dataset.bin");
    write_dataset(ds, path);
    if (csv) {
        std::ofstream out((fs::path(paths.out) / "dataset.csv").string());
        write_dataset_csv(ds, layout, out);
    }
    fmt::print("wrote {} ({} runs x {} cycles, seed {})\n", path, ds.size(), ds.n_cycles, cfg.seed);
    return 0;
}

int cmd_calibrate(const Paths &paths, const Overrides &ov) {
    auto cfg = resolve_config(paths, ov);
    auto layout = cfg.build_layout();
    auto ds = read_dataset(in_out(paths, paths.dataset, "dataset.bin"));
    auto params = ds.params();
    auto models = calibrate_models(ds, layout, params, cfg.hmm);
    auto header = output_header(cfg, "calibrate");
    write_json(in_out(paths, paths.models, "models.json"), {{"header", header}, {"models", models}});

    SimParams clean = params;
    clean.leakage.L1 = 0;
    clean.leakage.Lm = 0;
    clean.leakage.L3 = 0;
    uint64_t training_seed = cfg.seed ^ 0x5eedf00dull;
    auto training = simulate_dataset(layout, clean, cfg.training_runs, ds.n_cycles, training_seed, cfg.workers);
    auto catalog = enumerate_fault_edges(layout, ds.n_cycles);
    auto decoder = train_decoder(layout, training, catalog);
    header["training_seed"] = training_seed;
    header["training_runs"] = cfg.training_runs;
    write_json(in_out(paths, paths.decoder, "decoder.json"), {{"header", header}, {"decoder", decoder_to_json(decoder)}});
    fmt::print("calibrated {} HMMs; decoder trained on {} leakage-free runs ({} edge estimates clipped)\n",
               models.size(), cfg.training_runs, decoder.clipped);
    return 0;
}

int cmd_detect(const Paths &paths, const Overrides &ov) {
    auto cfg = resolve_config(paths, ov);
    auto layout = cfg.build_layout();
    auto ds = read_dataset(in_out(paths, paths.dataset, "dataset.bin"));
    auto models = read_json(in_out(paths, paths.models, "models.json")).at("models").get<std::vector<HmmModel>>();
    TraceFile file;
    file.header = output_header(cfg, "detect");
    file.traces = filter_dataset(ds, layout, models, cfg.workers);
    auto path = in_out(paths, paths.traces, "traces.bin");
    write_traces(file, path);
    fmt::print("wrote {}\n", path);
    return 0;
}

nlohmann::json fit_json(const FitResult &fit) {
    return {{"eps", fit.eps},     {"eps_lo", fit.eps_lo}, {"eps_hi", fit.eps_hi}, {"n0", fit.n0},
            {"n0_lo", fit.n0_lo}, {"n0_hi", fit.n0_hi},   {"rms", fit.rms}};
}

int cmd_decode(const Paths &paths, const Overrides &ov, size_t n_boot) {
    auto cfg = resolve_config(paths, ov);
    auto layout = cfg.build_layout();
    auto ds = read_dataset(in_out(paths, paths.dataset, "dataset.bin"));
    auto decoder = decoder_from_json(read_json(in_out(paths, paths.decoder, "decoder.json")).at("decoder"));
    auto success = decode_dataset(layout, decoder, ds, cfg.workers);
    auto header = output_header(cfg, "decode");
    write_success(in_out(paths, paths.decoded, "decoded.csv"), success, header);
    auto fit = fit_with_bootstrap(success, {}, n_boot, cfg.seed);
    auto curve = fidelity_curve(success);
    write_json((fs::path(paths.out) / "fit.json").string(),
               {{"header", header}, {"fit", fit_json(fit)}, {"fidelity", curve}});
    fmt::print("eps_L = {:.5f} [{:.5f}, {:.5f}], n0 = {:.3f}\n", fit.eps, fit.eps_lo, fit.eps_hi, fit.n0);
    return 0;
}

int cmd_analyze(const Paths &paths, const Overrides &ov) {
    auto cfg = resolve_config(paths, ov);
    auto layout = cfg.build_layout();
    auto ds = read_dataset(in_out(paths, paths.dataset, "dataset.bin"));
    auto traces = read_traces(in_out(paths, paths.traces, "traces.bin")).traces;
    if (traces.size() != ds.size()) {
        throw std::runtime_error("trace file does not match the dataset");
    }
    auto tracked = layout.tracked_qubits();
    auto params = ds.params();
    nlohmann::json qubits = nlohmann::json::array();
    std::ofstream pr((fs::path(paths.out) / "pr_curves.csv").string());
    pr << "qubit,threshold,recall,precision\n";
    for (size_t t = 0; t < tracked.size(); t++) {
        auto scored = collect_scores(ds, traces, t);
        auto curve = pr_curve(scored);
        for (const auto &pt : curve.points) {
            pr << tracked_name(layout, t) << ',' << pt.threshold << ',' << pt.recall << ',' << pt.precision << '\n';
        }
        auto rates = transition_rates(layout, tracked[t], params.leakage, params.coherence);
        auto pop = leak_population(ds, t, 0, cfg.seed);
        nlohmann::json q = {{"qubit", tracked_name(layout, t)},
                            {"leaked_fraction", (double)scored.positives() / (double)scored.truth.size()},
                            {"auc", curve.auc},
                            {"steady_state_model", steady_state(rates).p_l()},
                            {"population_last_cycle", pop.mean.empty() ? 0.0 : pop.mean.back()}};
        auto o = optimality(curve, scored);
        q["optimality"] = o ? nlohmann::json(*o) : nlohmann::json(nullptr);
        qubits.push_back(q);
    }

    auto matrix = crosstalk_matrix(ds, traces);
    std::ofstream ct((fs::path(paths.out) / "crosstalk.csv").string());
    ct << "leaked";
    for (size_t t = 0; t < tracked.size(); t++) {
        ct << ',' << tracked_name(layout, t);
    }
    ct << '\n';
    for (size_t i = 0; i < matrix.size(); i++) {
        ct << tracked_name(layout, i);
        for (double v : matrix[i]) {
            ct << ',' << v;
        }
        ct << '\n';
    }

    auto opt_json = [](const std::optional<double> &o) { return o ? nlohmann::json(*o) : nlohmann::json(nullptr); };
    nlohmann::json budget = nlohmann::json::array();
    for (const auto &b : optimality_budget(ds, layout, traces)) {
        budget.push_back({{"qubit", tracked_name(layout, b.tracked)},
                          {"all_runs", opt_json(b.all_runs)},
                          {"no_ancilla_leak", opt_json(b.no_ancilla_leak)},
                          {"no_other_leak", opt_json(b.no_other_leak)},
                          {"runs", {b.runs_a, b.runs_b, b.runs_c}}});
    }

    auto pulsed = pi_pulse_postprocess(ds, layout);
    auto pulsed_traces = filter_dataset(pulsed, layout, calibrate_models(pulsed, layout, params, cfg.hmm), cfg.workers);
    nlohmann::json pi = nlohmann::json::array();
    for (size_t t = 0; t < tracked.size(); t++) {
        if (layout.is_data(tracked[t])) {
            pi.push_back({{"qubit", tracked_name(layout, t)},
                          {"optimality", opt_json(optimality(collect_scores(pulsed, pulsed_traces, t)))}});
        }
    }
    write_json((fs::path(paths.out) / "analysis.json").string(), {{"header", output_header(cfg, "analyze")},
                                                                  {"qubits", qubits},
                                                                  {"budget", budget},
                                                                  {"pi_pulse", pi}});
    for (const auto &q : qubits) {
        fmt::print("{:>3}  leaked {:.4f}  optimality {}\n", q["qubit"].get<std::string>(),
                   q["leaked_fraction"].get<double>(), q["optimality"].dump());
    }
    return 0;
}

int cmd_pareto(const Paths &paths, const Overrides &ov) {
    auto cfg = resolve_config(paths, ov);
    auto traces = read_traces(in_out(paths, paths.traces, "traces.bin")).traces;
    auto success = read_success(in_out(paths, paths.decoded, "decoded.csv"));
    if (success.size() != traces.size()) {
        throw std::runtime_error("decode table does not match the trace file");
    }
    GaConfig ga = cfg.ga;
    ga.workers = cfg.workers;
    auto front = pareto_front(success, run_maxima(traces), ga);
    auto layout = cfg.build_layout();
    std::ofstream out((fs::path(paths.out) / "pareto.csv").string());
    out << "# " << output_header(cfg, "pareto").dump() << '\n';
    out << "discarded,eps,eps_lo,eps_hi,survivors";
    for (size_t t = 0; t < layout.tracked_qubits().size(); t++) {
        out << ",th_" << tracked_name(layout, t);
    }
    out << '\n';
    for (const auto &pt : front) {
        out << pt.discarded << ',' << pt.eps << ',' << pt.eps_lo << ',' << pt.eps_hi << ',' << pt.survivors;
        for (double th : pt.thresholds) {
            out << ',' << th;
        }
        out << '\n';
    }
    fmt::print("{} points on the front\n", front.size());
    return 0;
}

int cmd_oracle(const Paths &paths, const Overrides &ov) {
    auto cfg = resolve_config(paths, ov);
    nlohmann::json algebra = nlohmann::json::array();
    double worst = 0;
    for (int k = 0; k <= 8; k++) {
        double phi = std::numbers::pi * k / 4;
        auto a = anticommutation_checks(phi);
        worst = std::max({worst, a.anticommutator_c, a.commutator_l, a.check_anticommutator_la});
        algebra.push_back({{"phi", phi},
                           {"anticommutator_c", a.anticommutator_c},
                           {"commutator_l", a.commutator_l},
                           {"check_anticommutator_la", a.check_anticommutator_la},
                           {"projector_defect_x", a.projector_defect_x},
                           {"projector_defect_z", a.projector_defect_z}});
    }
    nlohmann::json plaquette = nlohmann::json::array();
    for (int k = 0; k <= 8; k++) {
        double phi = std::numbers::pi * k / 8;
        auto s = plaquette_outcome_distribution(phi);
        plaquette.push_back({{"phi", phi},
                             {"z_supercheck_defect", s.z_supercheck_defect},
                             {"x_supercheck_defect", s.x_supercheck_defect},
                             {"z_gauge_defect", s.z_gauge_defect},
                             {"x_gauge_defect", s.x_gauge_defect}});
    }
    nlohmann::json twirl = nlohmann::json::array();
    for (double t : {20.0, 40.0, 400.0, 800.0}) {
        twirl.push_back({{"t_ns", t}, {"max_deviation", twirl_compare(t, cfg.params.coherence.T1_us,
                                                                      cfg.params.coherence.Tphi_sweet_us)}});
    }
    fs::create_directories(paths.out);
    write_json((fs::path(paths.out) / "oracle.json").string(), {{"header", output_header(cfg, "oracle")},
                                                                {"algebra", algebra},
                                                                {"plaquette", plaquette},
                                                                {"twirl", twirl}});
    fmt::print("max algebra norm {:.2e}\n", worst);
    fmt::print("{:>8}  {:>10}\n", "phi", "p_defect");
    for (const auto &row : plaquette) {
        fmt::print("{:8.4f}  {:10.6f}\n", row["phi"].get<double>(), row["z_supercheck_defect"].get<double>());
    }
    return worst < 1e-12 ? 0 : 1;
}

int cmd_steady_state(const Paths &paths, const Overrides &ov) {
    auto cfg = resolve_config(paths, ov);
    auto layout = cfg.build_layout();
    auto tracked = layout.tracked_qubits();
    fs::create_directories(paths.out);
    std::ofstream table((fs::path(paths.out) / "steady_state.csv").string());
    std::ofstream curve((fs::path(paths.out) / "leak_evolution.csv").string());
    table << "qubit,gamma_cl,gamma_lc,gamma_l2l3,gamma_l3l2,p_c,p_l2,p_l3,p_l\n";
    curve << "qubit,cycle,p_l\n";
    for (size_t t = 0; t < tracked.size(); t++) {
        auto rates = transition_rates(layout, tracked[t], cfg.params.leakage, cfg.params.coherence);
        auto ss = steady_state(rates);
        auto name = tracked_name(layout, t);
        table << name << ',' << rates.gamma_cl << ',' << rates.gamma_lc << ',' << rates.gamma_l2l3 << ','
              << rates.gamma_l3l2 << ',' << ss.p_c << ',' << ss.p_l2 << ',' << ss.p_l3 << ',' << ss.p_l() << '\n';
        auto ev = leak_evolution(rates, cfg.n_cycles);
        for (size_t n = 0; n < ev.size(); n++) {
            curve << name << ',' << n + 1 << ',' << ev[n] << '\n';
        }
        fmt::print("{:>3}  p_L = {:.4f}\n", name, ss.p_l());
    }
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"leakmon: leakage simulation, detection and decoding for the distance-3 surface code"};
    app.require_subcommand(1);
    Paths paths;
    Overrides ov;
    app.add_option("--config", paths.config, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--seed", ov.seed, "Master seed (overrides config and LEAKMON_SEED)");
    app.add_option("--workers", ov.workers, "Worker threads");
    app.add_option("--out", paths.out, "Output directory");
    app.add_option("--dataset", paths.dataset, "Dataset file (default OUT/dataset.bin)");
    app.add_option("--models", paths.models, "HMM model file (default OUT/models.json)");
    app.add_option("--decoder", paths.decoder, "Decoder weights (default OUT/decoder.json)");
    app.add_option("--traces", paths.traces, "Trace file (default OUT/traces.bin)");
    app.add_option("--decoded", paths.decoded, "Decode table (default OUT/decoded.csv)");
    app.fallthrough();

    bool csv = false;
    size_t n_boot = 200;
    auto *sim = app.add_subcommand("simulate", "Generate a dataset");
    sim->add_flag("--csv", csv, "Also write OUT/dataset.csv");
    app.add_subcommand("calibrate", "Calibrate HMMs and train decoder weights");
    app.add_subcommand("detect", "Run the HMM filters over a dataset");
    auto *dec = app.add_subcommand("decode", "Decode every run and fit the logical error rate");
    dec->add_option("--boot", n_boot, "Bootstrap resamples for the fit");
    app.add_subcommand("analyze", "Detection metrics, crosstalk, budget and pi-pulse variant");
    app.add_subcommand("pareto", "Post-selection Pareto front");
    app.add_subcommand("oracle", "Exact operator and plaquette checks");
    app.add_subcommand("steady-state", "Analytic leakage populations");

    CLI11_PARSE(app, argc, argv);
    try {
        auto *sub = app.get_subcommands().front();
        const std::string name = sub->get_name();
        if (name == "simulate") {
            return cmd_simulate(paths, ov, csv);
        }
        if (name == "calibrate") {
            return cmd_calibrate(paths, ov);
        }
        if (name == "detect") {
            return cmd_detect(paths, ov);
        }
        if (name == "decode") {
            return cmd_decode(paths, ov, n_boot);
        }
        if (name == "analyze") {
            return cmd_analyze(paths, ov);
        }
        if (name == "pareto") {
            return cmd_pareto(paths, ov);
        }
        if (name == "oracle") {
            return cmd_oracle(paths, ov);
        }
        return cmd_steady_state(paths, ov);
    } catch (const std::exception &e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 2;
    }
}
