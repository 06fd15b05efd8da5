#include "ehc/generator.hpp"

#include "ehc/io.hpp"
#include "ehc/presets.hpp"

#include <algorithm>
#include <limits>

namespace ehc {

std::string_view structure_name(Structure s) {
    switch (s) {
        case Structure::Parallel: return "parallel";
        case Structure::Serial: return "serial";
        case Structure::Mixed: return "mixed";
    }
    return "?";
}

Structure parse_structure(std::string_view text) {
    if (text == "parallel" || text == "P") return Structure::Parallel;
    if (text == "serial" || text == "S") return Structure::Serial;
    if (text == "mixed" || text == "M") return Structure::Mixed;
    throw Error("unknown structure '" + std::string(text) + "' (expected parallel, serial or mixed)");
}

std::vector<std::string> GenSpec::check() const {
    std::vector<std::string> out;
    if (node_count < 2) out.push_back("node_count must be at least 2");
    if (max_in_degree < 1 || max_out_degree < 1) out.push_back("maximum degrees must be at least 1");
    if (fixed_edge_fraction < 0 || fixed_edge_fraction > 1 || fixed_hub_fraction < 0 || fixed_hub_fraction > 1)
        out.push_back("fixed fractions must lie in [0, 1]");
    if (fixed_edge_fraction + fixed_hub_fraction > 1) out.push_back("fixed fractions sum to more than 1");
    if (structure == Structure::Parallel && max_out_degree < 2)
        out.push_back("parallel structure needs max_out_degree >= 2");
    if (structure == Structure::Mixed && (max_out_degree < 2 || max_in_degree < 2))
        out.push_back("mixed structure needs max_in_degree and max_out_degree >= 2");
    return out;
}

std::vector<std::string> ParamSpec::check() const {
    std::vector<std::string> out;
    auto range = [&](const char* name, const Interval& r) {
        if (r.lo <= 0) out.push_back(std::string(name) + " range must have a positive lower bound");
        if (r.hi < r.lo) out.push_back(std::string(name) + " range is empty");
    };
    range("reference_latency", reference_latency);
    range("reference_power", reference_power);
    range("memory", memory);
    range("storage", storage);
    range("data", data);
    if (clamp_alpha.lo < 0 || clamp_alpha.hi >= 1 || clamp_alpha.hi < clamp_alpha.lo)
        out.push_back("clamp_alpha range must lie in [0, 1)");
    for (DeviceRole r : kAllRoles)
        if (perf_ratios[index_of(r)] && *perf_ratios[index_of(r)] <= 0)
            out.push_back("performance ratio of " + std::string(role_name(r)) + " must be positive");
    return out;
}

ParamSpec default_param_spec() {
    ParamSpec p;
    p.reference_latency = {parse_quantity("20ms", Dimension::Time), parse_quantity("2s", Dimension::Time)};
    p.reference_power = {parse_quantity("1.5W", Dimension::Power), parse_quantity("5W", Dimension::Power)};
    p.memory = {parse_quantity("16MiB", Dimension::Bytes), parse_quantity("256MiB", Dimension::Bytes)};
    p.storage = {parse_quantity("1MiB", Dimension::Bytes), parse_quantity("64MiB", Dimension::Bytes)};
    p.data = {parse_quantity("0.1Mbit", Dimension::DataBits), parse_quantity("8Mbit", Dimension::DataBits)};
    return p;
}

std::uint64_t Rng::uniform_int(std::uint64_t lo, std::uint64_t hi) {
    if (hi < lo) throw Error("empty integer range");
    std::uint64_t span = hi - lo;
    if (span == std::numeric_limits<std::uint64_t>::max()) return next();
    std::uint64_t n = span + 1;
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do x = next();
    while (x >= limit);
    return lo + x % n;
}

Rational Rng::uniform_grid(const Interval& range, const Rational& step) {
    if (range.hi < range.lo) throw Error("empty range");
    Rational q = (range.hi - range.lo) / step;
    mpz_class steps = q.get_num() / q.get_den();
    if (!steps.fits_ulong_p()) throw Error("range too wide for the sampling grid");
    return range.lo + Rational(static_cast<long>(uniform_int(0, steps.get_ui()))) * step;
}

int fixed_task_count(const Rational& fraction, int n) {
    Rational x = fraction * n + Rational(1, 2);
    mpz_class f = x.get_num() / x.get_den();
    return std::max(0, static_cast<int>(f.get_si()));
}

namespace {

struct Builder {
    int max_in, max_out;
    std::vector<int> in, out;
    std::vector<std::pair<int, int>> arcs;

    int add() {
        in.push_back(0);
        out.push_back(0);
        return static_cast<int>(in.size()) - 1;
    }
    void link(int a, int b) {
        arcs.push_back({a, b});
        ++out[a];
        ++in[b];
    }
    int size() const { return static_cast<int>(in.size()); }
};

void grow_serial(Builder& b, int n) {
    int w = std::min(b.max_in, b.max_out);
    for (int i = 0; i < n; ++i) b.add();
    for (int i = 0; i < n; ++i)
        for (int d = 1; d <= w && i + d < n; ++d) b.link(i, i + d);
}

void grow_parallel(Builder& b, int n, Rng& rng) {
    std::vector<int> frontier{b.add()};
    auto saturate = [&] {
        std::erase_if(frontier, [&](int v) { return b.out[v] >= b.max_out; });
    };
    while (b.size() < n) {
        int remaining = n - b.size();
        if (b.max_in >= 2 && frontier.size() >= 2 && rng.chance(0.35)) {
            int k = static_cast<int>(
                rng.uniform_int(2, static_cast<std::uint64_t>(std::min<std::size_t>(b.max_in, frontier.size()))));
            for (int j = 0; j < k; ++j) {
                std::size_t pick = j + rng.uniform_int(0, frontier.size() - 1 - j);
                std::swap(frontier[j], frontier[pick]);
            }
            int v = b.add();
            for (int j = 0; j < k; ++j) b.link(frontier[j], v);
            saturate();
            frontier.push_back(v);
        } else {
            int s = frontier[rng.uniform_int(0, frontier.size() - 1)];
            int r = static_cast<int>(rng.uniform_int(1, std::min(b.max_out - b.out[s], remaining)));
            for (int j = 0; j < r; ++j) {
                int v = b.add();
                b.link(s, v);
                frontier.push_back(v);
            }
            saturate();
        }
    }
}

void grow_mixed(Builder& b, int n, Rng& rng) {
    int tail = b.add();
    bool block = false;
    int width = std::min(b.max_in, b.max_out);
    while (b.size() < n) {
        int remaining = n - b.size();
        if (!block || remaining < 3) {
            int len = static_cast<int>(rng.uniform_int(1, std::min(3, remaining)));
            for (int j = 0; j < len; ++j) {
                int v = b.add();
                b.link(tail, v);
                tail = v;
            }
        } else {
            int k = static_cast<int>(rng.uniform_int(2, std::min(width, remaining - 1)));
            std::vector<int> lengths(k, 1);
            int spare = remaining - 1 - k;
            for (int j = 0; j < k && spare > 0; ++j) {
                int extra = static_cast<int>(rng.uniform_int(0, std::min(2, spare)));
                lengths[j] += extra;
                spare -= extra;
            }
            std::vector<int> ends;
            for (int len : lengths) {
                int prev = tail;
                for (int j = 0; j < len; ++j) {
                    int v = b.add();
                    b.link(prev, v);
                    prev = v;
                }
                ends.push_back(prev);
            }
            int join = b.add();
            for (int e : ends) b.link(e, join);
            tail = join;
        }
        block = !block;
    }
}

}  // namespace

TaskGraph generate_tfg(const GenSpec& spec) {
    if (auto problems = spec.check(); !problems.empty()) {
        std::string msg = "invalid generator spec:";
        for (const auto& p : problems) msg += " " + p + ";";
        throw Error(msg);
    }
    Rng rng(spec.seed);
    Builder b{spec.max_in_degree, spec.max_out_degree, {}, {}, {}};
    switch (spec.structure) {
        case Structure::Serial: grow_serial(b, spec.node_count); break;
        case Structure::Parallel: grow_parallel(b, spec.node_count, rng); break;
        case Structure::Mixed: grow_mixed(b, spec.node_count, rng); break;
    }

    TaskGraph g;
    for (int i = 0; i < spec.node_count; ++i) {
        Task t;
        t.id = TaskId{i + 1};
        t.name = "t" + std::to_string(i + 1);
        t.allowed = DeviceSet::all();
        g.tasks.push_back(std::move(t));
    }
    for (auto [a, c] : b.arcs) g.arcs.push_back({TaskId{a + 1}, TaskId{c + 1}});
    std::sort(g.arcs.begin(), g.arcs.end());

    int n = spec.node_count;
    int fe = std::min(fixed_task_count(spec.fixed_edge_fraction, n), n);
    int fh = std::min(fixed_task_count(spec.fixed_hub_fraction, n), n - fe);
    std::vector<int> ids(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) ids[static_cast<std::size_t>(i)] = i;
    for (int j = 0; j < fe + fh; ++j) {
        std::size_t pick = static_cast<std::size_t>(j) + rng.uniform_int(0, static_cast<std::uint64_t>(n - 1 - j));
        std::swap(ids[static_cast<std::size_t>(j)], ids[pick]);
    }
    for (int j = 0; j < fe + fh; ++j)
        g.tasks[static_cast<std::size_t>(ids[static_cast<std::size_t>(j)])].allowed =
            DeviceSet{j < fe ? DeviceRole::Edge : DeviceRole::Hub};
    return g;
}

TaskGraph synthesize_params(const TaskGraph& g, const ParamSpec& pspec, const SystemModel& sys, std::uint64_t seed) {
    if (auto problems = pspec.check(); !problems.empty()) {
        std::string msg = "invalid parameter spec:";
        for (const auto& p : problems) msg += " " + p + ";";
        throw Error(msg);
    }
    RoleMap<Rational> phi = presets::perf_ratios(sys);
    for (DeviceRole r : kAllRoles)
        if (pspec.perf_ratios[index_of(r)]) phi[index_of(r)] = pspec.perf_ratios[index_of(r)];

    const Rational latency_step(1, 1000000);
    const Rational power_step(1, 1000);
    const Rational alpha_step(1, 1000000);
    Rng rng(seed);
    TaskGraph out = g;
    for (Task& t : out.tasks) {
        Rational l_ref = rng.uniform_grid(pspec.reference_latency, latency_step);
        Rational p_ref = rng.uniform_grid(pspec.reference_power, power_step);
        t.memory = rng.uniform_grid(pspec.memory, 1);
        t.storage = rng.uniform_grid(pspec.storage, 1);
        t.output_data = rng.uniform_grid(pspec.data, 1);
        t.latency = {};
        t.power = {};
        for (DeviceRole r : t.allowed.roles()) {
            const auto& f = phi[index_of(r)];
            if (!f) throw Error("no performance ratio for device " + std::string(role_name(r)));
            const Device& d = sys.device(r);
            Rational p = p_ref * *f;
            if (p <= d.idle_power) {
                Rational alpha = rng.uniform_grid(pspec.clamp_alpha, alpha_step);
                p = d.idle_power * (1 + alpha);
            } else if (p > d.max_power) {
                Rational alpha = rng.uniform_grid(pspec.clamp_alpha, alpha_step);
                p = d.max_power * (1 - alpha);
            }
            if (p <= d.idle_power || p > d.max_power)
                throw Error("cannot clamp power into the idle/max range of " + std::string(role_name(r)));
            t.latency[index_of(r)] = l_ref / *f;
            t.power[index_of(r)] = p;
        }
    }
    return out;
}

nlohmann::json StructuralStats::to_json() const {
    return {{"nodes", nodes},
            {"arcs", arcs},
            {"avg_degree", avg_degree},
            {"max_in_degree", max_in_degree},
            {"max_out_degree", max_out_degree},
            {"depth", depth},
            {"max_width", max_width},
            {"fixed_edge", fixed_edge},
            {"fixed_hub", fixed_hub}};
}

StructuralStats structural_stats(const TaskGraph& g) {
    StructuralStats s;
    s.nodes = static_cast<int>(g.size());
    s.arcs = static_cast<int>(g.arcs.size());
    s.avg_degree = s.nodes ? static_cast<double>(s.arcs) / s.nodes : 0.0;
    auto order = topological_order(g);
    if (!order) throw Error("task graph contains a cycle");
    std::vector<int> in(g.size(), 0), out(g.size(), 0), level(g.size(), 1);
    std::vector<std::vector<int>> succ(g.size());
    for (auto [p, c] : g.arcs) {
        ++out[static_cast<std::size_t>(p.value - 1)];
        ++in[static_cast<std::size_t>(c.value - 1)];
        succ[static_cast<std::size_t>(p.value - 1)].push_back(c.value - 1);
    }
    for (TaskId id : *order) {
        int v = id.value - 1;
        for (int c : succ[static_cast<std::size_t>(v)])
            level[static_cast<std::size_t>(c)] = std::max(level[static_cast<std::size_t>(c)], level[static_cast<std::size_t>(v)] + 1);
    }
    std::vector<int> width(g.size() + 1, 0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        s.depth = std::max(s.depth, level[i]);
        s.max_width = std::max(s.max_width, ++width[static_cast<std::size_t>(level[i])]);
        s.max_in_degree = std::max(s.max_in_degree, in[i]);
        s.max_out_degree = std::max(s.max_out_degree, out[i]);
        if (g.tasks[i].allowed == DeviceSet{DeviceRole::Edge}) ++s.fixed_edge;
        if (g.tasks[i].allowed == DeviceSet{DeviceRole::Hub}) ++s.fixed_hub;
    }
    return s;
}

const std::vector<BenchmarkPreset>& benchmark_presets() {
    static const std::vector<BenchmarkPreset> list{
        {"P1.1", Structure::Parallel, 10, 2, 2, "5", "2"},
        {"P1.2", Structure::Parallel, 10, 2, 2, "4", "2"},
        {"P2.1", Structure::Parallel, 100, 2, 3, "4", "2"},
        {"P2.2", Structure::Parallel, 100, 5, 3, "3", "1"},
        {"P3.1", Structure::Parallel, 1000, 2, 3, "5", "2"},
        {"P3.2", Structure::Parallel, 1000, 5, 6, "4", "2"},
        {"S1.1", Structure::Serial, 10, 2, 2, "4", "2"},
        {"S1.2", Structure::Serial, 10, 5, 5, "4", "3"},
        {"S2.1", Structure::Serial, 100, 2, 2, "4", "3"},
        {"S2.2", Structure::Serial, 100, 5, 5, "1", "3"},
        {"S3.1", Structure::Serial, 1000, 2, 2, "5", "3"},
        {"S3.2", Structure::Serial, 1000, 5, 5, "2", "2"},
        {"M1.1", Structure::Mixed, 10, 9, 4, "4", "1"},
        {"M1.2", Structure::Mixed, 10, 8, 2, "1", "2"},
        {"M2.1", Structure::Mixed, 100, 10, 3, "1", "3"},
        {"M2.2", Structure::Mixed, 100, 8, 5, "2", "2"},
        {"M3.1", Structure::Mixed, 1000, 12, 4, "4.80", "2"},
        {"M3.2", Structure::Mixed, 1000, 18, 5, "1.86", "1"},
    };
    return list;
}

GenSpec preset_spec(std::string_view name, std::uint64_t seed) {
    for (const BenchmarkPreset& p : benchmark_presets()) {
        if (p.name != name) continue;
        GenSpec s;
        s.structure = p.structure;
        s.node_count = p.nodes;
        s.max_in_degree = p.max_in;
        s.max_out_degree = p.max_out;
        s.fixed_edge_fraction = parse_decimal(p.fixed_edge_percent) / 100;
        s.fixed_hub_fraction = parse_decimal(p.fixed_hub_percent) / 100;
        s.seed = seed;
        return s;
    }
    throw Error("unknown benchmark preset '" + std::string(name) + "'");
}

nlohmann::json gen_spec_to_json(const GenSpec& s) {
    return {{"structure", structure_name(s.structure)},
            {"node_count", s.node_count},
            {"max_in_degree", s.max_in_degree},
            {"max_out_degree", s.max_out_degree},
            {"fixed_edge_fraction", format_decimal(s.fixed_edge_fraction)},
            {"fixed_hub_fraction", format_decimal(s.fixed_hub_fraction)},
            {"seed", s.seed}};
}

GenSpec gen_spec_from_json(const nlohmann::json& j) {
    GenSpec s;
    s.structure = parse_structure(j.at("structure").get<std::string>());
    s.node_count = j.at("node_count").get<int>();
    s.max_in_degree = j.at("max_in_degree").get<int>();
    s.max_out_degree = j.at("max_out_degree").get<int>();
    if (j.contains("fixed_edge_fraction"))
        s.fixed_edge_fraction = quantity_from_json(j["fixed_edge_fraction"], Dimension::Dimensionless);
    if (j.contains("fixed_hub_fraction"))
        s.fixed_hub_fraction = quantity_from_json(j["fixed_hub_fraction"], Dimension::Dimensionless);
    if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
    return s;
}

namespace {

nlohmann::json interval_json(const Interval& r, std::initializer_list<std::string_view> units, Dimension dim) {
    return nlohmann::json::array({format_best(r.lo, units, dim), format_best(r.hi, units, dim)});
}

Interval interval_from(const nlohmann::json& j, Dimension dim) {
    if (!j.is_array() || j.size() != 2) throw ParseError("interval must be a two-element array");
    return {quantity_from_json(j[0], dim), quantity_from_json(j[1], dim)};
}

}  // namespace

nlohmann::json param_spec_to_json(const ParamSpec& p) {
    nlohmann::json j;
    j["reference_latency"] = interval_json(p.reference_latency, {"ms", "us", "s"}, Dimension::Time);
    j["reference_power"] = interval_json(p.reference_power, {"W"}, Dimension::Power);
    j["memory"] = interval_json(p.memory, {"MiB", "KiB", "B"}, Dimension::Bytes);
    j["storage"] = interval_json(p.storage, {"MiB", "KiB", "B"}, Dimension::Bytes);
    j["data"] = interval_json(p.data, {"Mbit", "bit"}, Dimension::DataBits);
    j["clamp_alpha"] = nlohmann::json::array({format_decimal(p.clamp_alpha.lo), format_decimal(p.clamp_alpha.hi)});
    nlohmann::json phi = nlohmann::json::object();
    for (DeviceRole r : kAllRoles)
        if (p.perf_ratios[index_of(r)]) phi[std::string(1, role_letter(r))] = format_decimal(*p.perf_ratios[index_of(r)]);
    if (!phi.empty()) j["perf_ratios"] = phi;
    return j;
}

ParamSpec param_spec_from_json(const nlohmann::json& j) {
    ParamSpec p = default_param_spec();
    if (j.contains("reference_latency")) p.reference_latency = interval_from(j["reference_latency"], Dimension::Time);
    if (j.contains("reference_power")) p.reference_power = interval_from(j["reference_power"], Dimension::Power);
    if (j.contains("memory")) p.memory = interval_from(j["memory"], Dimension::Bytes);
    if (j.contains("storage")) p.storage = interval_from(j["storage"], Dimension::Bytes);
    if (j.contains("data")) p.data = interval_from(j["data"], Dimension::DataBits);
    if (j.contains("clamp_alpha")) p.clamp_alpha = interval_from(j["clamp_alpha"], Dimension::Dimensionless);
    if (j.contains("perf_ratios"))
        for (auto& [key, value] : j["perf_ratios"].items())
            p.perf_ratios[index_of(parse_role(key))] = quantity_from_json(value, Dimension::Dimensionless);
    return p;
}

}  // namespace ehc
