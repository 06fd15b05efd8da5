#pragma once

#include "ehc/model.hpp"

#include <json.hpp>

#include <span>
#include <string>
#include <vector>

namespace ehc {

/// Indirect-communication indicator for a device pair: set when no direct
/// channel exists and the relay table supplies an intermediate device.
struct Indicator {
    bool indirect = false;
    std::optional<DeviceRole> via;
    bool operator==(const Indicator&) const = default;
};

Indicator indicator(DeviceRole from, DeviceRole to, const SystemModel& sys);

/// Transfer time of `bits` from k to l (0 when k == l, two hops when relayed).
Rational comm_latency(const Rational& bits, DeviceRole from, DeviceRole to, const SystemModel& sys);

/// Transmit + receive energy of `bits` over every hop from k to l.
Rational comm_energy(const Rational& bits, DeviceRole from, DeviceRole to, const SystemModel& sys);

inline Rational comp_energy(const Rational& power, const Rational& latency) { return power * latency; }

/// One physical transfer over a direct channel.
struct Hop {
    DeviceRole from;
    DeviceRole to;
    Rational latency;      // D / W
    Rational tx_energy;    // charged to `from`
    Rational rx_energy;    // charged to `to`
};

/// Hops used to move `bits` from k to l; empty when k == l.
std::vector<Hop> route(const Rational& bits, DeviceRole from, DeviceRole to, const SystemModel& sys);

struct CandidateNode {
    TaskId task;
    DeviceRole device;
    Rational latency;  // L_ik
    Rational power;    // P_ik
    Rational energy;   // E_ik = P_ik * L_ik
};

struct EtfgArc {
    TaskId from_task;
    DeviceRole from_device;
    TaskId to_task;
    DeviceRole to_device;
    std::size_t from_node = 0;  // indices into Etfg::nodes()
    std::size_t to_node = 0;
    std::size_t tfg_arc = 0;    // index into Etfg::tfg_arcs()
    Rational comm_latency;
    Rational comm_energy;
    Indicator indicator;
    std::vector<Hop> hops;

    Rational sender_energy() const;    // first-hop transmit energy
    Rational receiver_energy() const;  // last-hop receive energy
    Rational relay_energy() const;     // receive + forward at the intermediate device
};

/// Extended task flow graph: one candidate node per (task, allowed device),
/// one arc per (TFG arc, parent device, child device). Node order is
/// (task, e<h<c); arc order is (sorted TFG arc, parent device, child device).
class Etfg {
public:
    const TaskGraph& graph() const { return graph_; }
    const SystemModel& system() const { return system_; }

    const std::vector<CandidateNode>& nodes() const { return nodes_; }
    const std::vector<EtfgArc>& arcs() const { return arcs_; }
    /// TFG arcs in canonical (parent, child) order.
    const std::vector<std::pair<TaskId, TaskId>>& tfg_arcs() const { return tfg_arcs_; }

    std::size_t task_count() const { return graph_.size(); }
    std::span<const CandidateNode> composite_node(TaskId task) const;
    std::span<const EtfgArc> composite_arc(std::size_t tfg_arc) const;
    /// Index into nodes() for (task, device), or npos when the device is not allowed.
    std::size_t node_index(TaskId task, DeviceRole device) const;
    /// TFG arc indices leaving / entering a task.
    const std::vector<std::size_t>& out_arcs(TaskId task) const { return out_arcs_[slot(task)]; }
    const std::vector<std::size_t>& in_arcs(TaskId task) const { return in_arcs_[slot(task)]; }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    friend Etfg transform(const TaskGraph& g, const SystemModel& sys);
    std::size_t slot(TaskId t) const { return static_cast<std::size_t>(t.value - 1); }

    TaskGraph graph_;
    SystemModel system_;
    std::vector<CandidateNode> nodes_;
    std::vector<EtfgArc> arcs_;
    std::vector<std::pair<TaskId, TaskId>> tfg_arcs_;
    std::vector<std::size_t> node_offset_;  // size tasks + 1
    std::vector<std::size_t> arc_offset_;   // size tfg arcs + 1
    std::vector<std::vector<std::size_t>> out_arcs_;
    std::vector<std::vector<std::size_t>> in_arcs_;
};

/// Throws ValidationError for an invalid graph and Error when a required
/// device pair has no channel or relay.
Etfg transform(const TaskGraph& g, const SystemModel& sys);

std::string node_label(TaskId task, DeviceRole device);  // "1e"

nlohmann::json etfg_to_json(const Etfg& etfg);
/// Graphviz rendering; indirect arcs are drawn dashed orange.
std::string etfg_to_dot(const Etfg& etfg);

}  // namespace ehc
