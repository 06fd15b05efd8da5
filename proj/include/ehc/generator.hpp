#pragma once

#include "ehc/model.hpp"

#include <json.hpp>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace ehc {

enum class Structure { Parallel, Serial, Mixed };
std::string_view structure_name(Structure s);
Structure parse_structure(std::string_view text);

struct GenSpec {
    Structure structure = Structure::Parallel;
    int node_count = 10;
    int max_in_degree = 2;
    int max_out_degree = 2;
    Rational fixed_edge_fraction = 0;
    Rational fixed_hub_fraction = 0;
    std::uint64_t seed = 1;

    /// Empty when valid.
    std::vector<std::string> check() const;
};

struct Interval {
    Rational lo;
    Rational hi;
};

struct ParamSpec {
    Interval reference_latency;  // seconds
    Interval reference_power;    // watts
    Interval memory;             // bytes
    Interval storage;            // bytes
    Interval data;               // bits
    RoleMap<Rational> perf_ratios;  // unset roles fall back to the catalog
    Interval clamp_alpha{Rational(1, 1000), Rational(5, 1000)};

    std::vector<std::string> check() const;
};

/// Synthetic default ranges (listed in the README).
ParamSpec default_param_spec();

/// Seeded random source with platform-independent integer and real draws.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    std::uint64_t next() { return engine_(); }
    /// Uniform over [lo, hi] inclusive.
    std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);
    /// Uniform on [0, 1).
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    bool chance(double p) { return uniform01() < p; }
    /// Uniform draw on the grid lo, lo + step, ..., not exceeding hi.
    Rational uniform_grid(const Interval& range, const Rational& step);

private:
    std::mt19937_64 engine_;
};

/// Structure only: ids 1..n, arcs always point from lower to higher id,
/// allowed sets are all devices except for the fixed tasks.
TaskGraph generate_tfg(const GenSpec& spec);

/// round-half-up(fraction * n)
int fixed_task_count(const Rational& fraction, int n);

/// Draws reference latency/power and sizes per task and scales them by the
/// per-device performance ratios, clamping power into (idle, max].
TaskGraph synthesize_params(const TaskGraph& g, const ParamSpec& pspec, const SystemModel& sys, std::uint64_t seed);

struct StructuralStats {
    int nodes = 0;
    int arcs = 0;
    double avg_degree = 0;  // arcs / nodes; average in-degree equals average out-degree
    int max_in_degree = 0;
    int max_out_degree = 0;
    int depth = 0;          // nodes on the longest path
    int max_width = 0;      // largest level when levelled by longest path from a source
    int fixed_edge = 0;
    int fixed_hub = 0;

    nlohmann::json to_json() const;
};

StructuralStats structural_stats(const TaskGraph& g);

/// Generator inputs of the benchmark suite (P1.1 ... M3.2).
struct BenchmarkPreset {
    std::string_view name;
    Structure structure;
    int nodes;
    int max_in;
    int max_out;
    const char* fixed_edge_percent;
    const char* fixed_hub_percent;
};
const std::vector<BenchmarkPreset>& benchmark_presets();
GenSpec preset_spec(std::string_view name, std::uint64_t seed);

nlohmann::json gen_spec_to_json(const GenSpec& s);
GenSpec gen_spec_from_json(const nlohmann::json& j);
nlohmann::json param_spec_to_json(const ParamSpec& p);
ParamSpec param_spec_from_json(const nlohmann::json& j);

}  // namespace ehc
