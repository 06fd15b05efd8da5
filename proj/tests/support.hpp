#pragma once

#include "ehc/analysis.hpp"
#include "ehc/generator.hpp"
#include "ehc/io.hpp"
#include "ehc/milp.hpp"
#include "ehc/presets.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ehc::test {

inline Rational q(const char* text) { return parse_decimal(text); }

/// Canonical a/b; the two-argument mpq constructor does not reduce.
inline Rational ratio(std::uint64_t a, std::uint64_t b) {
    Rational r(static_cast<unsigned long>(a), static_cast<unsigned long>(b));
    r.canonicalize();
    return r;
}

/// Task with the same illustrative profile on every allowed device.
inline Task plain_task(int id, DeviceSet allowed, const Rational& latency = 1, const Rational& power = 1,
                       const Rational& data = 1000000) {
    Task t;
    t.id = TaskId{id};
    t.allowed = allowed;
    t.output_data = data;
    for (DeviceRole r : allowed.roles()) {
        t.latency[index_of(r)] = latency;
        t.power[index_of(r)] = power;
    }
    return t;
}

struct Table4Row {
    const char* name;
    int tfg_nodes;
    int tfg_arcs;
    int etfg_nodes;
    int etfg_arcs;
    int variables;
    int constraints;
};

inline const std::vector<Table4Row>& table4() {
    static const std::vector<Table4Row> rows{
        {"P1.1", 10, 11, 28, 93, 121, 118},           {"P1.2", 9, 10, 27, 90, 117, 112},
        {"P2.1", 100, 129, 288, 1077, 1365, 1261},    {"P2.2", 99, 136, 289, 1170, 1459, 1335},
        {"P3.1", 999, 1232, 2857, 10078, 12935, 11812}, {"P3.2", 1001, 1553, 2889, 12913, 15802, 14553},
        {"S1.1", 10, 17, 30, 153, 183, 181},          {"S1.2", 11, 40, 33, 360, 393, 390},
        {"S2.1", 100, 197, 286, 1605, 1891, 1813},    {"S2.2", 101, 490, 295, 4170, 4465, 4380},
        {"S3.1", 1000, 1997, 2840, 16089, 18929, 18097}, {"S3.2", 998, 4975, 2914, 42415, 45329, 44419},
        {"M1.1", 22, 33, 64, 261, 325, 313},          {"M1.2", 55, 65, 161, 561, 722, 679},
        {"M2.1", 109, 141, 319, 1210, 1529, 1436},    {"M2.2", 122, 147, 358, 1252, 1610, 1504},
        {"M3.1", 1000, 1224, 2864, 10055, 12919, 12063}, {"M3.2", 1017, 1181, 2993, 10218, 13211, 12260},
    };
    return rows;
}

/// Acyclic graph whose ETFG has exactly the requested node and arc counts.
/// Tasks allow three, two ({e,h}) or one ({e}) device; arcs join task pairs
/// whose allowed-set sizes multiply to 9, 6, 3 or 1.
inline std::optional<TaskGraph> graph_with_etfg_size(int n, int a, int etfg_nodes, int etfg_arcs) {
    int d = 3 * n - etfg_nodes;
    long r = 9L * a - etfg_arcs;
    if (d < 0 || r < 0) return std::nullopt;
    for (int f2 = 0; f2 <= d; ++f2) {
        if ((d - f2) % 2) continue;
        int f1 = (d - f2) / 2;
        int n3 = n - f1 - f2;
        if (n3 < 0) continue;
        for (long c8 = 0; c8 <= long(f1) * (f1 - 1) / 2; ++c8) {
            for (long c3 = 0; c3 <= std::min<long>(long(n3) * f2, a); ++c3) {
                long rest = r - 8 * c8 - 3 * c3;
                if (rest < 0) break;
                if (rest % 6) continue;
                long c6 = rest / 6;
                long c0 = a - c8 - c3 - c6;
                if (c0 < 0 || c6 > long(n3) * f1 || c0 > long(n3) * (n3 - 1) / 2) continue;

                TaskGraph g;
                for (int i = 0; i < n; ++i) {
                    DeviceSet s = i < n3        ? DeviceSet::all()
                                  : i < n3 + f2 ? DeviceSet{DeviceRole::Edge, DeviceRole::Hub}
                                                : DeviceSet{DeviceRole::Edge};
                    g.tasks.push_back(plain_task(i + 1, s));
                }
                auto add = [&](int i, int j) { g.arcs.push_back({TaskId{i + 1}, TaskId{j + 1}}); };
                long k = 0;
                for (int gap = 1; gap < n3 && k < c0; ++gap)
                    for (int i = 0; i + gap < n3 && k < c0; ++i, ++k) add(i, i + gap);
                k = 0;
                for (int j = n3; j < n3 + f2 && k < c3; ++j)
                    for (int i = 0; i < n3 && k < c3; ++i, ++k) add(i, j);
                k = 0;
                for (int j = n3 + f2; j < n && k < c6; ++j)
                    for (int i = 0; i < n3 && k < c6; ++i, ++k) add(i, j);
                k = 0;
                for (int gap = 1; gap < f1 && k < c8; ++gap)
                    for (int i = n3 + f2; i + gap < n && k < c8; ++i, ++k) add(i, i + gap);
                return g;
            }
        }
    }
    return std::nullopt;
}

/// Exhaustive search over the BILP itself: every assignment is mapped to its
/// 0/1 column vector, checked against every row and priced by the objective
/// vector. Returns the lexicographically first optimal assignment.
struct OracleResult {
    std::optional<Assignment> assignment;
    Rational value;
};

inline OracleResult bilp_oracle(const Etfg& etfg, const BilpModel& model) {
    const TaskGraph& g = etfg.graph();
    std::vector<std::vector<DeviceRole>> choices;
    for (const Task& t : g.tasks) choices.push_back(t.allowed.roles());
    std::vector<std::size_t> digit(g.size(), 0);
    OracleResult best;
    while (true) {
        Assignment a(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) a[i] = choices[i][digit[i]];
        std::vector<int> x = column_values(model, etfg, a);
        bool ok = true;
        for (const ConstraintRow& row : model.rows)
            if (!row_satisfied(row, x)) {
                ok = false;
                break;
            }
        if (ok) {
            Rational v = 0;
            for (std::size_t c = 0; c < x.size(); ++c)
                if (x[c]) v += model.objective[c];
            if (!best.assignment || v < best.value) {
                best.assignment = a;
                best.value = v;
            }
        }
        std::size_t pos = g.size();
        bool done = true;
        while (pos-- > 0) {
            if (++digit[pos] < choices[pos].size()) {
                done = false;
                break;
            }
            digit[pos] = 0;
        }
        if (done) break;
    }
    return best;
}

struct Instance {
    TaskGraph graph;
    SystemModel system;
    Objective objective = Objective::Latency;
    std::optional<Rational> latency_threshold;
    std::string label;
};

/// Random small instance: generated structure, synthesized parameters,
/// random restrictions of allowed sets, random budgets (often too tight) and
/// an optional latency threshold.
inline Instance random_instance(Rng& rng, int max_tasks, bool budgets = true) {
    Instance in;
    GenSpec spec;
    int kind = static_cast<int>(rng.uniform_int(0, 2));
    spec.structure = kind == 0 ? Structure::Parallel : kind == 1 ? Structure::Serial : Structure::Mixed;
    spec.node_count = static_cast<int>(rng.uniform_int(2, static_cast<std::uint64_t>(max_tasks)));
    spec.max_in_degree = static_cast<int>(rng.uniform_int(spec.structure == Structure::Mixed ? 2 : 1, 4));
    spec.max_out_degree = static_cast<int>(rng.uniform_int(spec.structure == Structure::Serial ? 1 : 2, 4));
    spec.fixed_edge_fraction = ratio(rng.uniform_int(0, 3), 10);
    spec.fixed_hub_fraction = ratio(rng.uniform_int(0, 2), 10);
    spec.seed = rng.next();

    std::string config = "C" + std::to_string(rng.uniform_int(1, 3));
    auto profile = rng.chance(0.5) ? presets::ChannelProfile::Run1 : presets::ChannelProfile::Run2;
    in.system = presets::configuration(config, profile);

    TaskGraph g = generate_tfg(spec);
    for (Task& t : g.tasks)
        if (!t.fixed() && rng.chance(0.15)) {
            std::vector<DeviceRole> keep;
            for (DeviceRole r : kAllRoles)
                if (rng.chance(0.6)) keep.push_back(r);
            if (!keep.empty()) {
                t.allowed = DeviceSet{};
                for (DeviceRole r : keep) t.allowed.insert(r);
            }
        }
    in.graph = synthesize_params(g, default_param_spec(), in.system, rng.next());
    in.objective = rng.chance(0.5) ? Objective::Latency : Objective::Energy;

    Rational mem = 0, sto = 0, nrg = 0, lat = 0;
    for (const Task& t : in.graph.tasks) {
        mem += t.memory;
        sto += t.storage;
        Rational e = 0, l = 0;
        for (DeviceRole r : t.allowed.roles()) {
            Rational x = *t.power[index_of(r)] * *t.latency[index_of(r)];
            if (x > e) e = x;
            if (*t.latency[index_of(r)] > l) l = *t.latency[index_of(r)];
        }
        nrg += e;
        lat += l;
    }
    auto fraction = [&](std::uint64_t lo, std::uint64_t hi) { return ratio(rng.uniform_int(lo, hi), 100); };
    for (DeviceRole r : kAllRoles) {
        Device& d = in.system.device(r);
        d.memory_budget.reset();
        d.storage_budget.reset();
        d.energy_budget.reset();
        if (!budgets) continue;
        if (rng.chance(0.4)) d.memory_budget = mem * fraction(10, 120);
        if (rng.chance(0.3)) d.storage_budget = sto * fraction(10, 120);
        if (rng.chance(0.4)) d.energy_budget = nrg * fraction(5, 150);
    }
    if (budgets && in.objective == Objective::Energy && rng.chance(0.6)) in.latency_threshold = lat * fraction(5, 80);
    in.label = std::string(structure_name(spec.structure)) + "/" + std::to_string(spec.node_count) + "/" + config;
    return in;
}

/// Random forest with randomly oriented arcs, synthesized parameters, no budgets.
inline Instance random_tree_instance(Rng& rng, int max_tasks) {
    Instance in;
    int n = static_cast<int>(rng.uniform_int(1, static_cast<std::uint64_t>(max_tasks)));
    in.system = presets::configuration("C" + std::to_string(rng.uniform_int(1, 3)),
                                       rng.chance(0.5) ? presets::ChannelProfile::Run1 : presets::ChannelProfile::Run2);
    for (DeviceRole r : kAllRoles) {
        Device& d = in.system.device(r);
        d.memory_budget.reset();
        d.storage_budget.reset();
        d.energy_budget.reset();
    }
    TaskGraph g;
    for (int i = 0; i < n; ++i) {
        Task t;
        t.id = TaskId{i + 1};
        t.allowed = DeviceSet::all();
        double u = rng.uniform01();
        if (u < 0.1) t.allowed = DeviceSet{DeviceRole::Edge};
        else if (u < 0.15) t.allowed = DeviceSet{DeviceRole::Hub};
        else if (u < 0.25) t.allowed = DeviceSet{DeviceRole::Hub, DeviceRole::Cloud};
        g.tasks.push_back(t);
    }
    for (int i = 1; i < n; ++i) {
        if (rng.chance(0.1)) continue;  // start another tree
        int other = static_cast<int>(rng.uniform_int(0, static_cast<std::uint64_t>(i - 1)));
        if (rng.chance(0.5))
            g.arcs.push_back({TaskId{other + 1}, TaskId{i + 1}});
        else
            g.arcs.push_back({TaskId{i + 1}, TaskId{other + 1}});
    }
    std::sort(g.arcs.begin(), g.arcs.end());
    in.graph = synthesize_params(g, default_param_spec(), in.system, rng.next());
    in.objective = rng.chance(0.5) ? Objective::Latency : Objective::Energy;
    in.label = "tree/" + std::to_string(n);
    return in;
}

}  // namespace ehc::test
