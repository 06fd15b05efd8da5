#pragma once

#include "ehc/solver.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace ehc {

enum class CaseKind { E, H, C, OL, OE };
std::string_view case_name(CaseKind k);  // "E", "H", "C", "O_L", "O_E"

struct BaselineCase {
    CaseKind kind = CaseKind::E;
    bool applicable = true;  // false when a non-fixed task cannot run on the forced device
    bool feasible = false;
    std::string note;        // why the case is inapplicable or unsolved
    Allocation allocation;   // extreme cases are evaluated, O_L / O_E solved

    std::vector<std::string> violations() const;
};

struct ComparisonReport {
    std::vector<BaselineCase> cases;
    bool objectives_coincide = false;  // O_L and O_E picked the same assignment
};

struct AnalysisOptions {
    Method method = Method::Auto;
    SolveConfig solve;
};

/// Extreme allocation: every non-fixed task on `device`, fixed tasks on
/// their mandated device. nullopt when some task does not allow `device`.
std::optional<Assignment> extreme_assignment(const TaskGraph& g, DeviceRole device);

/// Cases E, H, C, O_L, O_E in that order. The latency threshold constrains
/// O_E and, when `objective` is energy, the feasibility of E/H/C.
ComparisonReport run_baselines(const Etfg& etfg, Objective objective, std::optional<Rational> latency_threshold,
                               const AnalysisOptions& options = {});

/// Cases O_L and O_E only.
ComparisonReport compare_objectives(const Etfg& etfg, std::optional<Rational> latency_threshold,
                                    const AnalysisOptions& options = {});

/// Per-device computational latency plus per-channel communication latency
/// equals the total latency, and per-device energy sums to the total energy.
bool breakdown_conserved(const ObjectiveBreakdown& b);

std::string report_to_csv(const ComparisonReport& r);
nlohmann::json report_to_json(const Etfg& etfg, const ComparisonReport& r);
/// Whitespace-separated columns for gnuplot histograms; one row per case.
std::string report_to_gnuplot(const ComparisonReport& r);

}  // namespace ehc
