#include "ehc/milp.hpp"

#include <algorithm>
#include <map>

namespace ehc {

std::string_view objective_name(Objective o) { return o == Objective::Latency ? "latency" : "energy"; }

Objective parse_objective(std::string_view text) {
    if (text == "latency" || text == "L") return Objective::Latency;
    if (text == "energy" || text == "E") return Objective::Energy;
    throw Error("unknown objective '" + std::string(text) + "' (expected latency or energy)");
}

namespace {

std::string arc_suffix(const EtfgArc& a) {
    return node_label(a.from_task, a.from_device) + "_" + node_label(a.to_task, a.to_device);
}

ConstraintRow make_row(std::string label, std::string family, const std::map<std::size_t, Rational>& coeffs,
                       Sense sense, Rational rhs) {
    ConstraintRow row{std::move(label), std::move(family), {}, sense, std::move(rhs)};
    row.coefficients.reserve(coeffs.size());
    for (const auto& [col, v] : coeffs)
        if (v != 0) row.coefficients.emplace_back(col, v);
    return row;
}

ConstraintRow link_row(std::string label, std::vector<std::pair<std::size_t, Rational>> coeffs, Sense sense,
                       long rhs) {
    std::sort(coeffs.begin(), coeffs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return ConstraintRow{std::move(label), "link", std::move(coeffs), sense, Rational(rhs)};
}

std::string_view family_of_budget(int which) {
    static constexpr std::string_view names[] = {"mem", "sto"};
    return names[which];
}

}  // namespace

ConstraintRow energy_budget_row(const Etfg& etfg, DeviceRole device) {
    const Budget& budget = etfg.system().device(device).energy_budget;
    if (!budget) throw Error("device " + std::string(role_name(device)) + " has no finite energy budget");
    const std::size_t node_cols = etfg.nodes().size();
    std::map<std::size_t, Rational> coeffs;
    for (std::size_t n = 0; n < node_cols; ++n)
        if (etfg.nodes()[n].device == device) coeffs[n] += etfg.nodes()[n].energy;
    for (std::size_t a = 0; a < etfg.arcs().size(); ++a) {
        const EtfgArc& arc = etfg.arcs()[a];
        if (arc.hops.empty()) continue;
        if (arc.from_device == device) coeffs[node_cols + a] += arc.sender_energy();
        if (arc.to_device == device) coeffs[node_cols + a] += arc.receiver_energy();
        if (arc.indicator.via == device) coeffs[node_cols + a] += arc.relay_energy();
    }
    return make_row(std::string("nrg_") + role_letter(device), "nrg", coeffs, Sense::LessEqual, *budget);
}

BilpModel build_model(const Etfg& etfg, Objective objective, std::optional<Rational> latency_threshold) {
    if (latency_threshold && *latency_threshold <= 0) throw Error("latency threshold must be positive");

    BilpModel m;
    m.objective_kind = objective;
    if (objective == Objective::Energy) m.latency_threshold = latency_threshold;

    const auto& nodes = etfg.nodes();
    const auto& arcs = etfg.arcs();
    const std::size_t node_cols = nodes.size();
    m.node_columns = node_cols;
    m.variables.reserve(node_cols + arcs.size());
    m.objective.reserve(node_cols + arcs.size());
    for (std::size_t n = 0; n < node_cols; ++n) {
        m.variables.push_back({Variable::Kind::Node, n, n, "x_" + node_label(nodes[n].task, nodes[n].device)});
        m.objective.push_back(objective == Objective::Latency ? nodes[n].latency : nodes[n].energy);
    }
    for (std::size_t a = 0; a < arcs.size(); ++a) {
        m.variables.push_back({Variable::Kind::Arc, a, node_cols + a, "x_" + arc_suffix(arcs[a])});
        m.objective.push_back(objective == Objective::Latency ? arcs[a].comm_latency : arcs[a].comm_energy);
    }

    const TaskGraph& g = etfg.graph();
    m.rows.reserve(2 * g.size() + 3 * arcs.size() + 3 * kRoleCount + 1);
    for (const Task& t : g.tasks) {
        std::map<std::size_t, Rational> c;
        for (const CandidateNode& node : etfg.composite_node(t.id))
            c[etfg.node_index(node.task, node.device)] = 1;
        m.rows.push_back(make_row("assign_" + std::to_string(t.id.value), "assign", c, Sense::Equal, 1));
    }
    for (const Task& t : g.tasks) {
        const auto& outs = etfg.out_arcs(t.id);
        if (outs.empty()) {
            ++m.omitted_vacuous_rows;
            continue;
        }
        std::map<std::size_t, Rational> c;
        for (std::size_t tfg_arc : outs) {
            auto span = etfg.composite_arc(tfg_arc);
            std::size_t first = static_cast<std::size_t>(span.data() - arcs.data());
            for (std::size_t k = 0; k < span.size(); ++k) c[node_cols + first + k] = 1;
        }
        m.rows.push_back(make_row("outdeg_" + std::to_string(t.id.value), "outdeg", c, Sense::Equal,
                                  static_cast<long>(outs.size())));
    }
    for (std::size_t a = 0; a < arcs.size(); ++a) {
        const EtfgArc& arc = arcs[a];
        std::size_t col = node_cols + a;
        std::string s = arc_suffix(arc);
        m.rows.push_back(link_row("link_" + s + "_a", {{arc.from_node, -1}, {col, 1}}, Sense::LessEqual, 0));
        m.rows.push_back(link_row("link_" + s + "_b", {{arc.to_node, -1}, {col, 1}}, Sense::LessEqual, 0));
        m.rows.push_back(link_row("link_" + s + "_c", {{arc.from_node, -1}, {arc.to_node, -1}, {col, 1}},
                                  Sense::GreaterEqual, -1));
    }
    for (int which = 0; which < 2; ++which) {
        for (DeviceRole k : kAllRoles) {
            const Device& d = etfg.system().device(k);
            const Budget& budget = which == 0 ? d.memory_budget : d.storage_budget;
            if (!budget) continue;
            std::map<std::size_t, Rational> c;
            for (std::size_t n = 0; n < node_cols; ++n) {
                if (nodes[n].device != k) continue;
                const Task& t = g.task(nodes[n].task);
                c[n] = which == 0 ? t.memory : t.storage;
            }
            m.rows.push_back(make_row(std::string(family_of_budget(which)) + "_" + role_letter(k),
                                      std::string(family_of_budget(which)), c, Sense::LessEqual, *budget));
        }
    }
    for (DeviceRole k : kAllRoles)
        if (etfg.system().device(k).energy_budget) m.rows.push_back(energy_budget_row(etfg, k));
    if (m.latency_threshold) {
        std::map<std::size_t, Rational> c;
        for (std::size_t n = 0; n < node_cols; ++n) c[n] = nodes[n].latency;
        for (std::size_t a = 0; a < arcs.size(); ++a) c[node_cols + a] = arcs[a].comm_latency;
        m.rows.push_back(make_row("lthr", "lthr", c, Sense::LessEqual, *m.latency_threshold));
    }
    return m;
}

nlohmann::json ModelStatistics::to_json() const {
    return {{"variables", variables},
            {"algebraic_rows", algebraic_rows},
            {"logical_constraints", logical_constraints},
            {"logical_constraints_with_vacuous", logical_with_vacuous},
            {"omitted_vacuous_rows", omitted_vacuous_rows},
            {"nonzeros", nonzeros},
            {"objective_nonzeros", objective_nonzeros},
            {"rows_by_family", rows_by_family}};
}

ModelStatistics statistics(const BilpModel& model) {
    ModelStatistics s;
    s.variables = model.variables.size();
    s.algebraic_rows = model.rows.size();
    s.omitted_vacuous_rows = model.omitted_vacuous_rows;
    for (const ConstraintRow& r : model.rows) {
        ++s.rows_by_family[r.family];
        s.nonzeros += r.coefficients.size();
    }
    s.objective_nonzeros =
        static_cast<std::size_t>(std::count_if(model.objective.begin(), model.objective.end(), [](const Rational& v) {
            return v != 0;
        }));
    std::size_t link_rows = s.rows_by_family.count("link") ? s.rows_by_family.at("link") : 0;
    s.logical_constraints = s.algebraic_rows - link_rows + link_rows / 3;
    s.logical_with_vacuous = s.logical_constraints + s.omitted_vacuous_rows;
    return s;
}

bool ObjectiveBreakdown::feasible() const {
    return latency_ok && std::all_of(budgets.begin(), budgets.end(), [](const BudgetCheck& b) { return b.ok; });
}

std::vector<std::string> ObjectiveBreakdown::violations() const {
    std::vector<std::string> out;
    for (const BudgetCheck& b : budgets)
        if (!b.ok)
            out.push_back(b.resource + " budget of " + std::string(role_name(b.device)) + " exceeded (" +
                          std::to_string(b.used.get_d()) + " > " + std::to_string(b.limit.get_d()) + ")");
    if (!latency_ok)
        out.push_back("latency threshold exceeded (" + std::to_string(total_latency.get_d()) + " s > " +
                      std::to_string(latency_threshold->get_d()) + " s)");
    return out;
}

ObjectiveBreakdown evaluate(const Etfg& etfg, const Assignment& assignment, std::optional<Rational> latency_threshold) {
    const TaskGraph& g = etfg.graph();
    if (assignment.size() != g.size())
        throw Error("assignment covers " + std::to_string(assignment.size()) + " tasks, graph has " +
                    std::to_string(g.size()));
    ObjectiveBreakdown b;
    for (const Task& t : g.tasks) {
        DeviceRole k = assignment[static_cast<std::size_t>(t.id.value - 1)];
        std::size_t n = etfg.node_index(t.id, k);
        if (n == Etfg::npos)
            throw Error("task " + std::to_string(t.id.value) + " cannot be allocated on " + std::string(role_name(k)));
        const CandidateNode& node = etfg.nodes()[n];
        DeviceUsage& u = b.devices[index_of(k)];
        u.comp_latency += node.latency;
        u.comp_energy += node.energy;
        u.memory += t.memory;
        u.storage += t.storage;
        b.comp_latency += node.latency;
        b.comp_energy += node.energy;
    }
    for (std::size_t a = 0; a < etfg.tfg_arcs().size(); ++a) {
        auto [i, j] = etfg.tfg_arcs()[a];
        DeviceRole k = assignment[static_cast<std::size_t>(i.value - 1)];
        DeviceRole l = assignment[static_cast<std::size_t>(j.value - 1)];
        for (const EtfgArc& arc : etfg.composite_arc(a)) {
            if (arc.from_device != k || arc.to_device != l) continue;
            b.comm_latency += arc.comm_latency;
            b.comm_energy += arc.comm_energy;
            for (const Hop& h : arc.hops) {
                b.channel_latency[index_of(h.from)][index_of(h.to)] += h.latency;
                b.channel_energy[index_of(h.from)][index_of(h.to)] += h.tx_energy + h.rx_energy;
            }
            if (!arc.hops.empty()) {
                b.devices[index_of(k)].tx_energy += arc.sender_energy();
                b.devices[index_of(l)].rx_energy += arc.receiver_energy();
                if (arc.indicator.via) b.devices[index_of(*arc.indicator.via)].relay_energy += arc.relay_energy();
            }
        }
    }
    b.total_latency = b.comp_latency + b.comm_latency;
    b.total_energy = b.comp_energy + b.comm_energy;

    for (DeviceRole k : kAllRoles) {
        const Device& d = etfg.system().device(k);
        const DeviceUsage& u = b.devices[index_of(k)];
        auto check = [&](const char* resource, const Budget& limit, const Rational& used) {
            if (limit) b.budgets.push_back({resource, k, used, *limit, used <= *limit});
        };
        check("memory", d.memory_budget, u.memory);
        check("storage", d.storage_budget, u.storage);
        check("energy", d.energy_budget, u.energy());
    }
    b.latency_threshold = latency_threshold;
    b.latency_ok = !latency_threshold || b.total_latency <= *latency_threshold;
    return b;
}

std::vector<int> column_values(const BilpModel& model, const Etfg& etfg, const Assignment& assignment) {
    std::vector<int> x(model.variables.size(), 0);
    auto selected = [&](TaskId t, DeviceRole d) { return assignment.at(static_cast<std::size_t>(t.value - 1)) == d; };
    for (std::size_t n = 0; n < etfg.nodes().size(); ++n)
        x[n] = selected(etfg.nodes()[n].task, etfg.nodes()[n].device) ? 1 : 0;
    for (std::size_t a = 0; a < etfg.arcs().size(); ++a) {
        const EtfgArc& arc = etfg.arcs()[a];
        x[model.node_columns + a] = selected(arc.from_task, arc.from_device) && selected(arc.to_task, arc.to_device);
    }
    return x;
}

Rational row_activity(const ConstraintRow& row, const std::vector<int>& x) {
    Rational sum = 0;
    for (const auto& [col, v] : row.coefficients)
        if (x.at(col)) sum += v * x[col];
    return sum;
}

bool row_satisfied(const ConstraintRow& row, const std::vector<int>& x) {
    Rational act = row_activity(row, x);
    switch (row.sense) {
        case Sense::LessEqual: return act <= row.rhs;
        case Sense::Equal: return act == row.rhs;
        case Sense::GreaterEqual: return act >= row.rhs;
    }
    return false;
}

std::string assignment_to_string(const Assignment& a) {
    std::string s = "{";
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(i + 1) + "->" + role_letter(a[i]);
    }
    return s + "}";
}

}  // namespace ehc
