#include "ehc/analysis.hpp"

#include <cstdio>
#include <sstream>

namespace ehc {

std::string_view case_name(CaseKind k) {
    switch (k) {
        case CaseKind::E: return "E";
        case CaseKind::H: return "H";
        case CaseKind::C: return "C";
        case CaseKind::OL: return "O_L";
        case CaseKind::OE: return "O_E";
    }
    return "?";
}

std::vector<std::string> BaselineCase::violations() const {
    if (!applicable || !allocation.has_solution()) return {};
    return allocation.breakdown.violations();
}

std::optional<Assignment> extreme_assignment(const TaskGraph& g, DeviceRole device) {
    Assignment a;
    a.reserve(g.size());
    for (const Task& t : g.tasks) {
        if (t.fixed())
            a.push_back(t.allowed.roles().front());
        else if (t.allowed.contains(device))
            a.push_back(device);
        else
            return std::nullopt;
    }
    return a;
}

namespace {

BaselineCase extreme_case(const Etfg& etfg, CaseKind kind, DeviceRole device, Objective objective,
                          const std::optional<Rational>& lthr) {
    BaselineCase c;
    c.kind = kind;
    auto a = extreme_assignment(etfg.graph(), device);
    if (!a) {
        c.applicable = false;
        c.note = "some non-fixed task cannot run on " + std::string(role_name(device));
        return c;
    }
    Allocation& al = c.allocation;
    al.objective = objective;
    al.assignment = *a;
    al.breakdown = evaluate(etfg, *a, objective == Objective::Energy ? lthr : std::nullopt);
    al.objective_value = al.breakdown.objective(objective);
    c.feasible = al.breakdown.feasible();
    al.optimality = c.feasible ? Optimality::Incumbent : Optimality::Infeasible;
    al.stats.method = "fixed";
    return c;
}

BaselineCase solved_case(const Etfg& etfg, CaseKind kind, Objective objective, const std::optional<Rational>& lthr,
                         const AnalysisOptions& options) {
    BaselineCase c;
    c.kind = kind;
    c.allocation = solve(etfg, objective, lthr, options.method, options.solve);
    c.feasible = c.allocation.has_solution() && c.allocation.breakdown.feasible();
    if (!c.allocation.has_solution()) c.note = std::string(optimality_name(c.allocation.optimality));
    return c;
}

bool coincide(const ComparisonReport& r) {
    const BaselineCase* ol = nullptr;
    const BaselineCase* oe = nullptr;
    for (const BaselineCase& c : r.cases) {
        if (c.kind == CaseKind::OL) ol = &c;
        if (c.kind == CaseKind::OE) oe = &c;
    }
    return ol && oe && ol->allocation.has_solution() && oe->allocation.has_solution() &&
           ol->allocation.assignment == oe->allocation.assignment;
}

std::string num(const Rational& r) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", r.get_d());
    return buf;
}

constexpr std::pair<DeviceRole, DeviceRole> kChannels[] = {
    {DeviceRole::Edge, DeviceRole::Hub},
    {DeviceRole::Hub, DeviceRole::Edge},
    {DeviceRole::Hub, DeviceRole::Cloud},
    {DeviceRole::Cloud, DeviceRole::Hub},
};

std::string channel_key(DeviceRole a, DeviceRole b) { return std::string(1, role_letter(a)) + role_letter(b); }

// Numeric columns shared by the CSV and gnuplot writers; empty when unavailable.
std::vector<std::pair<std::string, std::string>> columns(const BaselineCase& c) {
    std::vector<std::pair<std::string, std::string>> out;
    bool has = c.applicable && c.allocation.has_solution();
    const ObjectiveBreakdown& b = c.allocation.breakdown;
    auto put = [&](std::string name, const Rational& v) { out.push_back({std::move(name), has ? num(v) : ""}); };
    put("total_latency_s", b.total_latency);
    put("total_energy_j", b.total_energy);
    for (DeviceRole r : kAllRoles) put(std::string("comp_latency_") + role_letter(r), b.devices[index_of(r)].comp_latency);
    for (auto [x, y] : kChannels) put("comm_latency_" + channel_key(x, y), b.channel_latency[index_of(x)][index_of(y)]);
    for (DeviceRole r : kAllRoles) put(std::string("comp_energy_") + role_letter(r), b.devices[index_of(r)].comp_energy);
    for (auto [x, y] : kChannels) put("comm_energy_" + channel_key(x, y), b.channel_energy[index_of(x)][index_of(y)]);
    for (DeviceRole r : kAllRoles) put(std::string("energy_") + role_letter(r), b.devices[index_of(r)].energy());
    for (const char* res : {"memory", "storage", "energy"})
        for (DeviceRole r : kAllRoles) {
            std::string name = std::string("util_") + res + "_" + role_letter(r);
            std::string v;
            if (has)
                for (const BudgetCheck& bc : b.budgets)
                    if (bc.resource == res && bc.device == r) v = num(bc.used / bc.limit);
            out.push_back({name, v});
        }
    return out;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

std::string status_of(const BaselineCase& c) {
    if (!c.applicable) return "inapplicable";
    if (!c.allocation.has_solution()) return std::string(optimality_name(c.allocation.optimality));
    return c.feasible ? "feasible" : "infeasible";
}

}  // namespace

ComparisonReport run_baselines(const Etfg& etfg, Objective objective, std::optional<Rational> latency_threshold,
                               const AnalysisOptions& options) {
    ComparisonReport r;
    r.cases.push_back(extreme_case(etfg, CaseKind::E, DeviceRole::Edge, objective, latency_threshold));
    r.cases.push_back(extreme_case(etfg, CaseKind::H, DeviceRole::Hub, objective, latency_threshold));
    r.cases.push_back(extreme_case(etfg, CaseKind::C, DeviceRole::Cloud, objective, latency_threshold));
    r.cases.push_back(solved_case(etfg, CaseKind::OL, Objective::Latency, std::nullopt, options));
    r.cases.push_back(solved_case(etfg, CaseKind::OE, Objective::Energy, latency_threshold, options));
    r.objectives_coincide = coincide(r);
    return r;
}

ComparisonReport compare_objectives(const Etfg& etfg, std::optional<Rational> latency_threshold,
                                    const AnalysisOptions& options) {
    ComparisonReport r;
    r.cases.push_back(solved_case(etfg, CaseKind::OL, Objective::Latency, std::nullopt, options));
    r.cases.push_back(solved_case(etfg, CaseKind::OE, Objective::Energy, latency_threshold, options));
    r.objectives_coincide = coincide(r);
    return r;
}

bool breakdown_conserved(const ObjectiveBreakdown& b) {
    Rational lat = 0, nrg = 0;
    for (DeviceRole r : kAllRoles) {
        lat += b.devices[index_of(r)].comp_latency;
        nrg += b.devices[index_of(r)].energy();
        for (DeviceRole s : kAllRoles) lat += b.channel_latency[index_of(r)][index_of(s)];
    }
    return lat == b.total_latency && nrg == b.total_energy;
}

std::string report_to_csv(const ComparisonReport& r) {
    std::ostringstream os;
    os << "case,status";
    BaselineCase empty;
    empty.applicable = false;
    for (const auto& [name, _] : columns(empty)) os << ',' << name;
    os << ",assignment,violations\n";
    for (const BaselineCase& c : r.cases) {
        os << case_name(c.kind) << ',' << status_of(c);
        for (const auto& [_, v] : columns(c)) os << ',' << v;
        std::string assign = c.allocation.has_solution() ? assignment_to_string(c.allocation.assignment) : "";
        std::string viol;
        for (const std::string& v : c.violations()) viol += (viol.empty() ? "" : "; ") + v;
        if (!c.note.empty()) viol += (viol.empty() ? "" : "; ") + c.note;
        os << ',' << csv_quote(assign) << ',' << csv_quote(viol) << '\n';
    }
    return os.str();
}

nlohmann::json report_to_json(const Etfg& etfg, const ComparisonReport& r) {
    nlohmann::json j;
    j["objectives_coincide"] = r.objectives_coincide;
    nlohmann::json cases = nlohmann::json::array();
    for (const BaselineCase& c : r.cases) {
        nlohmann::json cj;
        cj["case"] = case_name(c.kind);
        cj["status"] = status_of(c);
        cj["applicable"] = c.applicable;
        cj["feasible"] = c.feasible;
        if (!c.note.empty()) cj["note"] = c.note;
        if (c.applicable && c.allocation.has_solution()) {
            cj["allocation"] = allocation_to_json(etfg, c.allocation);
            nlohmann::json cols = nlohmann::json::object();
            for (const auto& [name, v] : columns(c))
                if (!v.empty()) cols[name] = std::stod(v);
            cj["breakdown"] = cols;
            cj["violations"] = c.violations();
        }
        cases.push_back(cj);
    }
    j["cases"] = cases;
    return j;
}

std::string report_to_gnuplot(const ComparisonReport& r) {
    std::ostringstream os;
    BaselineCase empty;
    empty.applicable = false;
    os << "# case";
    for (const auto& [name, _] : columns(empty)) os << ' ' << name;
    os << '\n';
    for (const BaselineCase& c : r.cases) {
        os << case_name(c.kind);
        for (const auto& [_, v] : columns(c)) os << ' ' << (v.empty() ? "NaN" : v);
        os << '\n';
    }
    return os.str();
}

}  // namespace ehc
