#include "ehc/etfg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace ehc {

namespace {

std::string pair_name(DeviceRole k, DeviceRole l) { return std::string(1, role_letter(k)) + "->" + role_letter(l); }

std::string num(const Rational& r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", r.get_d());
    return buf;
}

Hop make_hop(const Rational& bits, const Channel& c) {
    return Hop{c.from, c.to, Rational(bits / c.bandwidth), Rational(bits * c.tx_energy), Rational(bits * c.rx_energy)};
}

}  // namespace

Indicator indicator(DeviceRole from, DeviceRole to, const SystemModel& sys) {
    if (from == to || sys.channel(from, to)) return {};
    if (auto via = sys.relay(from, to)) return {true, via};
    throw Error("no channel or relay for device pair " + pair_name(from, to));
}

std::vector<Hop> route(const Rational& bits, DeviceRole from, DeviceRole to, const SystemModel& sys) {
    if (from == to) return {};
    if (const Channel* c = sys.channel(from, to)) return {make_hop(bits, *c)};
    auto via = sys.relay(from, to);
    const Channel* first = via ? sys.channel(from, *via) : nullptr;
    const Channel* second = via ? sys.channel(*via, to) : nullptr;
    if (!first || !second) throw Error("no channel or relay for device pair " + pair_name(from, to));
    return {make_hop(bits, *first), make_hop(bits, *second)};
}

Rational comm_latency(const Rational& bits, DeviceRole from, DeviceRole to, const SystemModel& sys) {
    Rational total = 0;
    for (const Hop& h : route(bits, from, to, sys)) total += h.latency;
    return total;
}

Rational comm_energy(const Rational& bits, DeviceRole from, DeviceRole to, const SystemModel& sys) {
    Rational total = 0;
    for (const Hop& h : route(bits, from, to, sys)) total += h.tx_energy + h.rx_energy;
    return total;
}

Rational EtfgArc::sender_energy() const { return hops.empty() ? Rational(0) : hops.front().tx_energy; }
Rational EtfgArc::receiver_energy() const { return hops.empty() ? Rational(0) : hops.back().rx_energy; }
Rational EtfgArc::relay_energy() const {
    return hops.size() == 2 ? Rational(hops[0].rx_energy + hops[1].tx_energy) : Rational(0);
}

std::span<const CandidateNode> Etfg::composite_node(TaskId task) const {
    std::size_t s = slot(task);
    if (task.value < 1 || s >= graph_.size()) throw Error("unknown task id " + std::to_string(task.value));
    return {nodes_.data() + node_offset_[s], node_offset_[s + 1] - node_offset_[s]};
}

std::span<const EtfgArc> Etfg::composite_arc(std::size_t tfg_arc) const {
    if (tfg_arc >= tfg_arcs_.size()) throw Error("TFG arc index out of range");
    return {arcs_.data() + arc_offset_[tfg_arc], arc_offset_[tfg_arc + 1] - arc_offset_[tfg_arc]};
}

std::size_t Etfg::node_index(TaskId task, DeviceRole device) const {
    std::size_t s = slot(task);
    if (task.value < 1 || s >= graph_.size()) return npos;
    for (std::size_t i = node_offset_[s]; i < node_offset_[s + 1]; ++i)
        if (nodes_[i].device == device) return i;
    return npos;
}

Etfg transform(const TaskGraph& g, const SystemModel& sys) {
    if (auto report = validate_task_graph(g); !report.ok()) throw ValidationError(std::move(report));

    Etfg out;
    out.graph_ = g;
    out.system_ = sys;
    out.tfg_arcs_ = g.arcs;
    std::sort(out.tfg_arcs_.begin(), out.tfg_arcs_.end());

    const std::size_t n = g.size();
    out.node_offset_.reserve(n + 1);
    for (const Task& t : g.tasks) {
        out.node_offset_.push_back(out.nodes_.size());
        for (DeviceRole r : t.allowed.roles()) {
            const Rational& lat = *t.latency[index_of(r)];
            const Rational& pow = *t.power[index_of(r)];
            out.nodes_.push_back(CandidateNode{t.id, r, lat, pow, comp_energy(pow, lat)});
        }
    }
    out.node_offset_.push_back(out.nodes_.size());

    out.out_arcs_.assign(n, {});
    out.in_arcs_.assign(n, {});
    std::size_t total = 0;
    for (auto [i, j] : out.tfg_arcs_) total += g.task(i).allowed.size() * g.task(j).allowed.size();
    out.arcs_.reserve(total);

    for (std::size_t a = 0; a < out.tfg_arcs_.size(); ++a) {
        auto [i, j] = out.tfg_arcs_[a];
        out.arc_offset_.push_back(out.arcs_.size());
        out.out_arcs_[out.slot(i)].push_back(a);
        out.in_arcs_[out.slot(j)].push_back(a);
        const Task& parent = g.task(i);
        for (DeviceRole k : parent.allowed.roles()) {
            for (DeviceRole l : g.task(j).allowed.roles()) {
                EtfgArc arc;
                arc.from_task = i;
                arc.from_device = k;
                arc.to_task = j;
                arc.to_device = l;
                arc.from_node = out.node_index(i, k);
                arc.to_node = out.node_index(j, l);
                arc.tfg_arc = a;
                arc.indicator = indicator(k, l, sys);
                arc.hops = route(parent.output_data, k, l, sys);
                for (const Hop& h : arc.hops) {
                    arc.comm_latency += h.latency;
                    arc.comm_energy += h.tx_energy + h.rx_energy;
                }
                out.arcs_.push_back(std::move(arc));
            }
        }
    }
    out.arc_offset_.push_back(out.arcs_.size());
    return out;
}

std::string node_label(TaskId task, DeviceRole device) { return std::to_string(task.value) + role_letter(device); }

nlohmann::json etfg_to_json(const Etfg& etfg) {
    using nlohmann::json;
    json doc;
    doc["schema"] = 1;
    json nodes = json::array();
    for (const CandidateNode& c : etfg.nodes()) {
        nodes.push_back({{"id", node_label(c.task, c.device)},
                         {"task", c.task.value},
                         {"device", std::string(1, role_letter(c.device))},
                         {"latency_s", c.latency.get_d()},
                         {"power_w", c.power.get_d()},
                         {"energy_j", c.energy.get_d()}});
    }
    json arcs = json::array();
    for (const EtfgArc& a : etfg.arcs()) {
        json ja{{"from", node_label(a.from_task, a.from_device)},
                {"to", node_label(a.to_task, a.to_device)},
                {"comm_latency_s", a.comm_latency.get_d()},
                {"comm_energy_j", a.comm_energy.get_d()},
                {"indirect", a.indicator.indirect ? 1 : 0}};
        ja["via"] = a.indicator.via ? json(std::string(1, role_letter(*a.indicator.via))) : json(nullptr);
        arcs.push_back(std::move(ja));
    }
    doc["nodes"] = std::move(nodes);
    doc["arcs"] = std::move(arcs);
    doc["summary"] = {{"tasks", etfg.task_count()},
                      {"tfg_arcs", etfg.tfg_arcs().size()},
                      {"nodes", etfg.nodes().size()},
                      {"arcs", etfg.arcs().size()}};
    return doc;
}

std::string etfg_to_dot(const Etfg& etfg) {
    std::ostringstream os;
    os << "digraph etfg {\n  rankdir=TB;\n  node [shape=ellipse,fontsize=10];\n";
    for (const Task& t : etfg.graph().tasks) {
        os << "  subgraph cluster_" << t.id.value << " {\n    label=\"N" << t.id.value << "'\";\n    style=rounded;\n";
        for (const CandidateNode& c : etfg.composite_node(t.id)) {
            os << "    \"" << node_label(c.task, c.device) << "\" [label=\"" << node_label(c.task, c.device)
               << "\\nL=" << num(c.latency) << "s E=" << num(c.energy) << "J\"];\n";
        }
        os << "  }\n";
    }
    for (const EtfgArc& a : etfg.arcs()) {
        os << "  \"" << node_label(a.from_task, a.from_device) << "\" -> \"" << node_label(a.to_task, a.to_device)
           << "\" [label=\"CL=" << num(a.comm_latency) << "s CE=" << num(a.comm_energy) << "J\"";
        if (a.indicator.indirect) os << ",style=dashed,color=orange";
        os << "];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace ehc
