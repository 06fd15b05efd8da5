#pragma once

#include "ehc/milp.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace ehc {

enum class Optimality {
    ProvenOptimal,
    Incumbent,   // time limit hit; `gap` bounds the suboptimality
    Infeasible,  // no assignment satisfies the budgets / latency threshold
    NoSolution,  // time limit hit before any feasible assignment was found
};
std::string_view optimality_name(Optimality o);

enum class Method { Auto, BruteForce, TreeDp, BranchAndBound };
Method parse_method(std::string_view text);
std::string_view method_name(Method m);

struct SolveConfig {
    std::optional<double> time_limit_seconds;  // nullopt = unlimited
    int threads = 1;
};

struct SolverStats {
    std::string method;
    std::uint64_t nodes = 0;
    std::uint64_t bound_prunes = 0;
    std::uint64_t budget_prunes = 0;
    std::uint64_t leaves = 0;
    std::uint64_t exact_checks = 0;
    double wall_seconds = 0;
    double lower_bound = 0;
    int threads = 1;

    nlohmann::json to_json() const;
};

/// Optimal assignment with its exact objective value and breakdown. When
/// several assignments tie, the one that is lexicographically smallest by
/// (task id, e < h < c) is returned, whichever method produced it.
struct Allocation {
    Objective objective = Objective::Latency;
    Assignment assignment;
    Rational objective_value;
    ObjectiveBreakdown breakdown;
    Optimality optimality = Optimality::Infeasible;
    Rational gap;  // (incumbent - bound) / incumbent, 0 when proven optimal
    SolverStats stats;

    bool has_solution() const { return !assignment.empty(); }
};

/// Task -> device for a partial assignment (nullopt = not yet assigned).
using PartialAssignment = std::vector<std::optional<DeviceRole>>;

/// Combinatorial lower bound used by branch-and-bound, computed exactly:
/// assigned cost + per unassigned task the cheapest device including arcs to
/// assigned neighbours + cheapest device pair of every arc between two
/// unassigned tasks. Budgets are ignored.
Rational lower_bound(const Etfg& etfg, Objective objective, const PartialAssignment& partial);

/// True when the undirected skeleton of the graph has no cycle.
bool is_forest(const TaskGraph& g);

/// Enumerates every assignment; throws Error when the product of allowed-set
/// sizes exceeds `kBruteForceLimit`.
inline constexpr double kBruteForceLimit = 1e7;
Allocation solve_bruteforce(const Etfg& etfg, Objective objective, std::optional<Rational> latency_threshold = {});

/// Exact dynamic program over a forest-shaped graph without finite budgets.
Allocation solve_tree_dp(const Etfg& etfg, Objective objective);

/// Depth-first branch-and-bound over task -> device decisions in topological order.
Allocation solve_branch_and_bound(const Etfg& etfg, Objective objective, std::optional<Rational> latency_threshold = {},
                                  const SolveConfig& config = {});

/// Auto: forest-shaped graphs use the tree DP when its unconstrained optimum
/// already satisfies every budget; everything else goes to branch-and-bound.
/// The latency threshold only applies to the energy objective.
Allocation solve(const Etfg& etfg, Objective objective, std::optional<Rational> latency_threshold, Method method,
                 const SolveConfig& config = {});

nlohmann::json allocation_to_json(const Etfg& etfg, const Allocation& a);

}  // namespace ehc
