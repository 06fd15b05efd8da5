#include "ehc/model.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <sstream>

namespace ehc {

char role_letter(DeviceRole r) {
    switch (r) {
        case DeviceRole::Edge: return 'e';
        case DeviceRole::Hub: return 'h';
        case DeviceRole::Cloud: return 'c';
    }
    return '?';
}

std::string_view role_name(DeviceRole r) {
    switch (r) {
        case DeviceRole::Edge: return "edge";
        case DeviceRole::Hub: return "hub";
        case DeviceRole::Cloud: return "cloud";
    }
    return "?";
}

DeviceRole parse_role(std::string_view text) {
    if (text == "e" || text == "edge") return DeviceRole::Edge;
    if (text == "h" || text == "hub") return DeviceRole::Hub;
    if (text == "c" || text == "cloud") return DeviceRole::Cloud;
    throw ParseError("unknown device role '" + std::string(text) + "'");
}

std::vector<DeviceRole> DeviceSet::roles() const {
    std::vector<DeviceRole> out;
    for (DeviceRole r : kAllRoles)
        if (contains(r)) out.push_back(r);
    return out;
}

const Task& TaskGraph::task(TaskId id) const {
    auto idx = static_cast<std::size_t>(id.value - 1);
    if (id.value >= 1 && idx < tasks.size() && tasks[idx].id == id) return tasks[idx];
    for (const Task& t : tasks)
        if (t.id == id) return t;
    throw Error("unknown task id " + std::to_string(id.value));
}

bool ValidationReport::contains(std::string_view code) const {
    return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.code == code; });
}

std::string ValidationReport::to_string() const {
    std::ostringstream os;
    for (const Violation& v : violations) os << v.code << ": " << v.message << '\n';
    return os.str();
}

namespace {

// Kahn's algorithm over an arbitrary id set; arcs with unknown endpoints are ignored.
std::optional<std::vector<TaskId>> kahn(const std::vector<TaskId>& ids,
                                        const std::vector<std::pair<TaskId, TaskId>>& arcs) {
    std::map<TaskId, std::vector<TaskId>> succ;
    std::map<TaskId, int> indeg;
    for (TaskId id : ids) indeg[id] = 0;
    for (auto [from, to] : arcs) {
        if (!indeg.count(from) || !indeg.count(to)) continue;
        succ[from].push_back(to);
        ++indeg[to];
    }
    std::priority_queue<TaskId, std::vector<TaskId>, std::greater<>> ready;
    for (auto [id, d] : indeg)
        if (d == 0) ready.push(id);
    std::vector<TaskId> order;
    while (!ready.empty()) {
        TaskId id = ready.top();
        ready.pop();
        order.push_back(id);
        for (TaskId next : succ[id])
            if (--indeg[next] == 0) ready.push(next);
    }
    if (order.size() != indeg.size()) return std::nullopt;
    return order;
}

std::string task_label(TaskId id) { return "task " + std::to_string(id.value); }

}  // namespace

ValidationReport validate_task_graph(const TaskGraph& g) {
    ValidationReport report;
    auto add = [&](std::string code, std::string msg) { report.violations.push_back({std::move(code), std::move(msg)}); };

    std::set<TaskId> seen;
    std::vector<TaskId> ids;
    for (const Task& t : g.tasks) {
        if (!seen.insert(t.id).second) add("duplicate-task-id", "duplicate " + task_label(t.id));
        ids.push_back(t.id);
    }
    for (std::size_t i = 0; i < g.tasks.size(); ++i) {
        if (g.tasks[i].id.value != static_cast<int>(i) + 1) {
            add("non-dense-ids", "task ids must be 1..n in order; position " + std::to_string(i + 1) + " holds " +
                                     task_label(g.tasks[i].id));
            break;
        }
    }

    std::set<std::pair<TaskId, TaskId>> arcset;
    for (auto [from, to] : g.arcs) {
        std::string arc = std::to_string(from.value) + "->" + std::to_string(to.value);
        if (!seen.count(from) || !seen.count(to)) add("dangling-arc", "arc " + arc + " references an unknown task");
        if (from == to) add("self-arc", "self arc " + arc);
        if (!arcset.insert({from, to}).second) add("duplicate-arc", "duplicate arc " + arc);
    }
    std::vector<std::pair<TaskId, TaskId>> proper;
    for (auto a : g.arcs)
        if (a.first != a.second) proper.push_back(a);
    bool self_loop = proper.size() != g.arcs.size();
    if (!kahn(ids, proper) || self_loop) add("cycle", "arcs contain a cycle; the graph is not a DAG");

    for (const Task& t : g.tasks) {
        if (t.allowed.empty()) add("empty-allowed-set", "empty allowed-device set for " + task_label(t.id));
        if (t.memory < 0 || t.storage < 0 || t.output_data < 0)
            add("negative-value", "negative memory, storage or output data for " + task_label(t.id));
        for (DeviceRole r : kAllRoles) {
            const auto& lat = t.latency[index_of(r)];
            const auto& pow = t.power[index_of(r)];
            std::string where = task_label(t.id) + " on " + std::string(role_name(r));
            if (t.allowed.contains(r)) {
                if (!lat) add("missing-profile", "missing latency profile for " + where);
                if (!pow) add("missing-profile", "missing power profile for " + where);
            } else if (lat || pow) {
                add("profile-outside-allowed", "profile given for disallowed device: " + where);
            }
            if ((lat && *lat < 0) || (pow && *pow < 0)) add("negative-value", "negative latency or power for " + where);
        }
    }
    return report;
}

int out_degree(const TaskGraph& g, TaskId id) {
    (void)g.task(id);
    return static_cast<int>(std::count_if(g.arcs.begin(), g.arcs.end(), [&](const auto& a) { return a.first == id; }));
}

std::optional<std::vector<TaskId>> topological_order(const TaskGraph& g) {
    std::vector<TaskId> ids;
    for (const Task& t : g.tasks) ids.push_back(t.id);
    for (auto [from, to] : g.arcs)
        if (from == to) return std::nullopt;
    return kahn(ids, g.arcs);
}

const Channel* SystemModel::channel(DeviceRole from, DeviceRole to) const {
    const auto& c = channels_[index_of(from)][index_of(to)];
    return c ? &*c : nullptr;
}

void SystemModel::set_channel(Channel c) {
    auto& slot = channels_[index_of(c.from)][index_of(c.to)];
    slot = std::move(c);
}

void SystemModel::clear_channels() {
    for (auto& row : channels_)
        for (auto& c : row) c.reset();
}

void SystemModel::clear_relays() {
    for (auto& row : relay_)
        for (auto& r : row) r.reset();
}

std::vector<Channel> SystemModel::channels() const {
    std::vector<Channel> out;
    for (const auto& row : channels_)
        for (const auto& c : row)
            if (c) out.push_back(*c);
    return out;
}

std::vector<std::string> SystemModel::check() const {
    std::vector<std::string> problems;
    for (DeviceRole r : kAllRoles) {
        const Device& d = device(r);
        std::string who = std::string(role_name(r)) + " device";
        if (d.role != r) problems.push_back(who + " stored under the wrong role");
        if (d.idle_power < 0 || !(d.idle_power < d.max_power))
            problems.push_back(who + ": requires 0 <= idle power < max power");
        for (const Budget* b : {&d.memory_budget, &d.storage_budget, &d.energy_budget})
            if (*b && **b <= 0) problems.push_back(who + ": finite budgets must be positive");
    }
    for (const Channel& c : channels()) {
        std::string which = std::string(1, role_letter(c.from)) + "->" + role_letter(c.to);
        if (c.from == c.to) problems.push_back("channel " + which + " connects a device to itself");
        if (c.bandwidth <= 0) problems.push_back("channel " + which + ": bandwidth must be positive");
        if (c.tx_energy < 0 || c.rx_energy < 0) problems.push_back("channel " + which + ": negative energy per bit");
    }
    for (DeviceRole k : kAllRoles) {
        for (DeviceRole l : kAllRoles) {
            if (k == l) continue;
            std::string which = std::string(1, role_letter(k)) + "->" + role_letter(l);
            auto via = relay(k, l);
            if (channel(k, l)) {
                if (via) problems.push_back("pair " + which + " has both a direct channel and a relay");
                continue;
            }
            if (!via) {
                problems.push_back("pair " + which + " has neither a direct channel nor a relay");
            } else if (*via == k || *via == l || !channel(k, *via) || !channel(*via, l)) {
                problems.push_back("relay for " + which + " is not backed by two direct channels");
            }
        }
    }
    return problems;
}

}  // namespace ehc
