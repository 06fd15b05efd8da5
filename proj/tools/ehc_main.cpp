// ehc: allocate task flow graphs onto an edge/hub/cloud system.

#include "ehc/analysis.hpp"
#include "ehc/generator.hpp"
#include "ehc/io.hpp"
#include "ehc/mps.hpp"
#include "ehc/presets.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using namespace ehc;

namespace {

enum Exit { kOk = 0, kFailure = 1, kValidation = 2, kInfeasible = 3, kGap = 4 };

struct Options {
    std::string tfg;
    std::string config = "C1";
    std::string channel_profile;
    std::string objective = "latency";
    std::string lthr;
    std::string solver = "auto";
    double time_limit = 0;
    int threads = 1;
    std::uint64_t seed = 1;
    std::string out = ".";

    // generate
    std::string preset;
    std::string structure = "parallel";
    int nodes = 10;
    int max_in = 2;
    int max_out = 2;
    std::string fixed_edge = "0";
    std::string fixed_hub = "0";
    std::string gen_spec;
    std::string param_spec;
    std::string name;

    std::string format = "all";
};

SystemModel load_config(const Options& o) {
    bool preset = presets::is_configuration_name(o.config);
    presets::ChannelProfile profile = presets::ChannelProfile::Run1;
    if (!o.channel_profile.empty()) profile = presets::parse_channel_profile(o.channel_profile);
    if (preset) return presets::configuration(o.config, profile);
    SystemModel sys = load_system(o.config);
    if (!o.channel_profile.empty()) presets::apply_channel_profile(sys, profile);
    return sys;
}

std::optional<Rational> threshold(const Options& o, Objective obj) {
    if (o.lthr == "none") return std::nullopt;
    if (!o.lthr.empty()) return parse_quantity(o.lthr, Dimension::Time);
    if (obj == Objective::Energy) return presets::default_latency_threshold();
    return std::nullopt;
}

SolveConfig solve_config(const Options& o) {
    SolveConfig c;
    if (o.time_limit > 0) c.time_limit_seconds = o.time_limit;
    c.threads = o.threads;
    return c;
}

Etfg load_etfg(const Options& o) {
    if (o.tfg.empty()) throw Error("--tfg is required");
    return transform(load_task_graph(o.tfg), load_config(o));
}

void write(const Options& o, const std::string& file, const std::string& text) {
    fs::path p = fs::path(o.out) / file;
    write_text_file(p, text);
    std::cerr << "wrote " << p.string() << "\n";
}

int cmd_transform(const Options& o) {
    Etfg etfg = load_etfg(o);
    write(o, "etfg.json", etfg_to_json(etfg).dump(2) + "\n");
    write(o, "etfg.dot", etfg_to_dot(etfg));
    std::size_t indirect = 0;
    for (const EtfgArc& a : etfg.arcs()) indirect += a.indicator.indirect;
    std::printf("tasks %zu  arcs %zu  etfg nodes %zu  etfg arcs %zu  indirect %zu\n", etfg.task_count(),
                etfg.tfg_arcs().size(), etfg.nodes().size(), etfg.arcs().size(), indirect);
    return kOk;
}

int exit_for(const Allocation& a) {
    switch (a.optimality) {
        case Optimality::ProvenOptimal: return kOk;
        case Optimality::Infeasible: return kInfeasible;
        case Optimality::Incumbent:
        case Optimality::NoSolution: return kGap;
    }
    return kFailure;
}

int cmd_solve(const Options& o) {
    Etfg etfg = load_etfg(o);
    Objective obj = parse_objective(o.objective);
    Allocation a = solve(etfg, obj, threshold(o, obj), parse_method(o.solver), solve_config(o));
    nlohmann::json j = allocation_to_json(etfg, a);
    if (a.has_solution()) j["violations"] = a.breakdown.violations();
    write(o, "solution.json", j.dump(2) + "\n");
    std::printf("status %s\n", std::string(optimality_name(a.optimality)).c_str());
    if (a.has_solution()) {
        std::printf("objective %s = %s (%.9g)\n", std::string(objective_name(obj)).c_str(),
                    format_decimal(a.objective_value).c_str(), a.objective_value.get_d());
        std::printf("latency %.9g s  energy %.9g J\n", a.breakdown.total_latency.get_d(),
                    a.breakdown.total_energy.get_d());
        std::printf("allocation %s\n", assignment_to_string(a.assignment).c_str());
        if (a.optimality == Optimality::Incumbent) std::printf("gap %.6g\n", a.gap.get_d());
    }
    std::printf("nodes %llu  time %.3f s\n", static_cast<unsigned long long>(a.stats.nodes), a.stats.wall_seconds);
    return exit_for(a);
}

int cmd_baseline(const Options& o) {
    Etfg etfg = load_etfg(o);
    Objective obj = parse_objective(o.objective);
    AnalysisOptions opts;
    opts.method = parse_method(o.solver);
    opts.solve = solve_config(o);
    ComparisonReport r = run_baselines(etfg, obj, threshold(o, Objective::Energy), opts);
    write(o, "baselines.csv", report_to_csv(r));
    write(o, "baselines.json", report_to_json(etfg, r).dump(2) + "\n");
    write(o, "baselines.dat", report_to_gnuplot(r));
    for (const BaselineCase& c : r.cases) {
        std::printf("%-4s", std::string(case_name(c.kind)).c_str());
        if (!c.applicable || !c.allocation.has_solution()) {
            std::printf(" %s\n", c.applicable ? c.note.c_str() : "inapplicable");
            continue;
        }
        const ObjectiveBreakdown& b = c.allocation.breakdown;
        std::printf(" latency %12.6g s  energy %12.6g J  %s  %s\n", b.total_latency.get_d(), b.total_energy.get_d(),
                    c.feasible ? "feasible  " : "infeasible", assignment_to_string(c.allocation.assignment).c_str());
    }
    if (r.objectives_coincide) std::printf("O_L and O_E coincide\n");
    return kOk;
}

int cmd_generate(const Options& o) {
    GenSpec spec;
    if (!o.gen_spec.empty()) {
        spec = gen_spec_from_json(read_json_file(o.gen_spec));
    } else if (!o.preset.empty()) {
        spec = preset_spec(o.preset, o.seed);
    } else {
        spec.structure = parse_structure(o.structure);
        spec.node_count = o.nodes;
        spec.max_in_degree = o.max_in;
        spec.max_out_degree = o.max_out;
        spec.fixed_edge_fraction = parse_decimal(o.fixed_edge);
        spec.fixed_hub_fraction = parse_decimal(o.fixed_hub);
        spec.seed = o.seed;
    }
    ParamSpec pspec = o.param_spec.empty() ? default_param_spec() : param_spec_from_json(read_json_file(o.param_spec));
    SystemModel sys = load_config(o);
    TaskGraph g = synthesize_params(generate_tfg(spec), pspec, sys, spec.seed);
    StructuralStats st = structural_stats(g);

    nlohmann::json meta;
    meta["seed"] = spec.seed;
    meta["gen_spec"] = gen_spec_to_json(spec);
    meta["param_spec"] = param_spec_to_json(pspec);
    meta["system"] = sys.name;
    meta["structure"] = st.to_json();
    std::string stem = !o.name.empty() ? o.name : !o.preset.empty() ? o.preset : "tfg";
    write(o, stem + ".json", task_graph_to_json(g).dump(2) + "\n");
    write(o, stem + ".meta.json", meta.dump(2) + "\n");
    std::printf("nodes %d  arcs %d  avg degree %.2f  depth %d  max width %d  fixed e/h %d/%d\n", st.nodes, st.arcs,
                st.avg_degree, st.depth, st.max_width, st.fixed_edge, st.fixed_hub);
    return kOk;
}

int cmd_export(const Options& o) {
    bool all = o.format == "all";
    if (!all && o.format != "mps" && o.format != "lp" && o.format != "system")
        throw Error("unknown export format '" + o.format + "' (expected mps, lp, system or all)");
    if (o.format == "system") {
        write(o, "system.json", system_to_json(load_config(o)).dump(2) + "\n");
        return kOk;
    }
    Etfg etfg = load_etfg(o);
    Objective obj = parse_objective(o.objective);
    BilpModel m = build_model(etfg, obj, threshold(o, obj));
    if (all || o.format == "mps") write(o, "model.mps", export_mps(m));
    if (all || o.format == "lp") write(o, "model.lp", export_lp(m));
    if (all) write(o, "system.json", system_to_json(etfg.system()).dump(2) + "\n");
    return kOk;
}

int cmd_stats(const Options& o) {
    Etfg etfg = load_etfg(o);
    Objective obj = parse_objective(o.objective);
    BilpModel m = build_model(etfg, obj, threshold(o, obj));
    nlohmann::json j = statistics(m).to_json();
    j["tfg"] = structural_stats(etfg.graph()).to_json();
    j["etfg_nodes"] = etfg.nodes().size();
    j["etfg_arcs"] = etfg.arcs().size();
    std::printf("%s\n", j.dump(2).c_str());
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Task allocation for edge/hub/cloud systems"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* c, bool needs_tfg) {
        auto* t = c->add_option("--tfg", o.tfg, "task flow graph JSON");
        if (needs_tfg) t->required();
        c->add_option("--config", o.config, "system: C1, C2, C3 or a system JSON file")->capture_default_str();
        c->add_option("--channel-profile", o.channel_profile, "run1 or run2");
        c->add_option("--out", o.out, "output directory")->capture_default_str();
    };
    auto objective = [&](CLI::App* c) {
        c->add_option("--objective", o.objective, "latency or energy")->capture_default_str();
        c->add_option("--lthr", o.lthr, "latency threshold for the energy objective (e.g. 8000ms, none)");
    };
    auto solver = [&](CLI::App* c) {
        c->add_option("--solver", o.solver, "auto, bruteforce, tree-dp or bnb")->capture_default_str();
        c->add_option("--time-limit", o.time_limit, "seconds, 0 = unlimited")->capture_default_str();
        c->add_option("--threads", o.threads, "branch-and-bound worker threads")->capture_default_str();
    };

    auto* transform_cmd = app.add_subcommand("transform", "write the extended task flow graph (JSON + DOT)");
    common(transform_cmd, true);

    auto* solve_cmd = app.add_subcommand("solve", "find an optimal allocation");
    common(solve_cmd, true);
    objective(solve_cmd);
    solver(solve_cmd);

    auto* baseline_cmd = app.add_subcommand("baseline", "compare E/H/C allocations with O_L and O_E");
    common(baseline_cmd, true);
    objective(baseline_cmd);
    solver(baseline_cmd);

    auto* generate_cmd = app.add_subcommand("generate", "generate a synthetic benchmark");
    common(generate_cmd, false);
    generate_cmd->add_option("--preset", o.preset, "benchmark preset such as P1.1 or M3.2");
    generate_cmd->add_option("--structure", o.structure, "parallel, serial or mixed")->capture_default_str();
    generate_cmd->add_option("--nodes", o.nodes)->capture_default_str();
    generate_cmd->add_option("--max-in", o.max_in)->capture_default_str();
    generate_cmd->add_option("--max-out", o.max_out)->capture_default_str();
    generate_cmd->add_option("--fixed-edge", o.fixed_edge, "fraction of tasks fixed on e")->capture_default_str();
    generate_cmd->add_option("--fixed-hub", o.fixed_hub, "fraction of tasks fixed on h")->capture_default_str();
    generate_cmd->add_option("--gen-spec", o.gen_spec, "generator spec JSON (overrides the flags)");
    generate_cmd->add_option("--param-spec", o.param_spec, "parameter ranges JSON");
    generate_cmd->add_option("--seed", o.seed)->capture_default_str();
    generate_cmd->add_option("--name", o.name, "output file stem (default: the preset name, else tfg)");

    auto* export_cmd = app.add_subcommand("export", "write the BILP model as MPS/LP");
    common(export_cmd, false);
    objective(export_cmd);
    export_cmd->add_option("--format", o.format, "mps, lp, system or all")->capture_default_str();

    auto* stats_cmd = app.add_subcommand("stats", "print model statistics");
    common(stats_cmd, true);
    objective(stats_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kValidation;
    }

    try {
        if (*transform_cmd) return cmd_transform(o);
        if (*solve_cmd) return cmd_solve(o);
        if (*baseline_cmd) return cmd_baseline(o);
        if (*generate_cmd) return cmd_generate(o);
        if (*export_cmd) return cmd_export(o);
        if (*stats_cmd) return cmd_stats(o);
    } catch (const ValidationError& e) {
        std::cerr << "invalid task graph:\n" << e.report.to_string();
        return kValidation;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kFailure;
}
