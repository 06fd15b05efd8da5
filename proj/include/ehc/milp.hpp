#pragma once

#include "ehc/etfg.hpp"

#include <json.hpp>

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ehc {

enum class Objective { Latency, Energy };
std::string_view objective_name(Objective o);
Objective parse_objective(std::string_view text);

enum class Sense { LessEqual, Equal, GreaterEqual };

struct Variable {
    enum class Kind { Node, Arc };
    Kind kind;
    std::size_t etfg_index;  // into Etfg::nodes() or Etfg::arcs()
    std::size_t column;
    std::string name;        // x_1e or x_1e_2c
};

struct ConstraintRow {
    std::string label;   // family + subscripts, e.g. "link_1e_2c_a"
    std::string family;  // assign, outdeg, link, mem, sto, nrg, lthr
    std::vector<std::pair<std::size_t, Rational>> coefficients;  // sorted by column
    Sense sense = Sense::LessEqual;
    Rational rhs;
};

/// Solver-neutral BILP: all columns binary; node columns first in ETFG node
/// order, then arc columns in ETFG arc order.
struct BilpModel {
    std::vector<Variable> variables;
    std::vector<Rational> objective;  // dense, one entry per column, minimized
    std::vector<ConstraintRow> rows;
    Objective objective_kind = Objective::Latency;
    std::optional<Rational> latency_threshold;
    std::size_t node_columns = 0;
    std::size_t omitted_vacuous_rows = 0;  // out-degree rows of sink tasks
};

/// Row emission order: assignment, out-degree (non-sinks), linking (three
/// per arc), memory, storage and energy budgets for finite budgets, latency
/// threshold (energy objective only).
BilpModel build_model(const Etfg& etfg, Objective objective, std::optional<Rational> latency_threshold = {});

/// Energy budget row of device k: computational energy, first-hop transmit,
/// last-hop receive and relay energy for arcs routed through k.
ConstraintRow energy_budget_row(const Etfg& etfg, DeviceRole device);

struct ModelStatistics {
    std::size_t variables = 0;
    std::size_t algebraic_rows = 0;        // rows as exported
    std::size_t logical_constraints = 0;   // linking counted once per arc
    std::size_t logical_with_vacuous = 0;  // plus omitted sink out-degree rows
    std::size_t omitted_vacuous_rows = 0;
    std::size_t nonzeros = 0;
    std::size_t objective_nonzeros = 0;
    std::map<std::string, std::size_t> rows_by_family;

    nlohmann::json to_json() const;
};

ModelStatistics statistics(const BilpModel& model);

/// Device per task, indexed by task id - 1.
using Assignment = std::vector<DeviceRole>;

struct DeviceUsage {
    Rational comp_latency;
    Rational comp_energy;
    Rational tx_energy;
    Rational rx_energy;
    Rational relay_energy;
    Rational memory;
    Rational storage;

    Rational energy() const { return comp_energy + tx_energy + rx_energy + relay_energy; }
};

struct BudgetCheck {
    std::string resource;  // memory, storage, energy
    DeviceRole device;
    Rational used;
    Rational limit;
    bool ok = true;
};

struct ObjectiveBreakdown {
    Rational total_latency;
    Rational total_energy;
    Rational comp_latency;
    Rational comm_latency;
    Rational comp_energy;
    Rational comm_energy;
    std::array<DeviceUsage, kRoleCount> devices{};
    /// Indexed [from][to]; only directly connected pairs carry traffic.
    std::array<std::array<Rational, kRoleCount>, kRoleCount> channel_latency{};
    std::array<std::array<Rational, kRoleCount>, kRoleCount> channel_energy{};
    std::vector<BudgetCheck> budgets;  // finite budgets only
    std::optional<Rational> latency_threshold;
    bool latency_ok = true;

    bool feasible() const;
    std::vector<std::string> violations() const;
    const Rational& objective(Objective o) const { return o == Objective::Latency ? total_latency : total_energy; }
};

/// Throws Error when the assignment size mismatches or a task is placed
/// outside its allowed set.
ObjectiveBreakdown evaluate(const Etfg& etfg, const Assignment& assignment,
                            std::optional<Rational> latency_threshold = {});

/// 0/1 column vector induced by an assignment (arc columns = AND of endpoints).
std::vector<int> column_values(const BilpModel& model, const Etfg& etfg, const Assignment& assignment);
Rational row_activity(const ConstraintRow& row, const std::vector<int>& x);
bool row_satisfied(const ConstraintRow& row, const std::vector<int>& x);

std::string assignment_to_string(const Assignment& a);

}  // namespace ehc
