#pragma once

#include "ehc/units.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ehc {

/// The three device roles of the edge/hub/cloud architecture, in canonical order.
enum class DeviceRole : std::uint8_t { Edge = 0, Hub = 1, Cloud = 2 };

inline constexpr std::size_t kRoleCount = 3;
inline constexpr std::array<DeviceRole, kRoleCount> kAllRoles{DeviceRole::Edge, DeviceRole::Hub, DeviceRole::Cloud};

constexpr std::size_t index_of(DeviceRole r) { return static_cast<std::size_t>(r); }
char role_letter(DeviceRole r);
std::string_view role_name(DeviceRole r);
/// Accepts "e", "edge", "h", "hub", "c", "cloud".
DeviceRole parse_role(std::string_view text);

/// Small set of device roles; iteration is always in canonical e, h, c order.
class DeviceSet {
public:
    constexpr DeviceSet() = default;
    constexpr DeviceSet(std::initializer_list<DeviceRole> roles) {
        for (DeviceRole r : roles) insert(r);
    }
    static constexpr DeviceSet all() { return DeviceSet{DeviceRole::Edge, DeviceRole::Hub, DeviceRole::Cloud}; }

    constexpr void insert(DeviceRole r) { bits_ |= static_cast<std::uint8_t>(1u << index_of(r)); }
    constexpr bool contains(DeviceRole r) const { return (bits_ >> index_of(r)) & 1u; }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr std::size_t size() const { return std::size_t((bits_ & 1) + ((bits_ >> 1) & 1) + ((bits_ >> 2) & 1)); }
    std::vector<DeviceRole> roles() const;
    constexpr bool operator==(const DeviceSet&) const = default;

private:
    std::uint8_t bits_ = 0;
};

/// Per-role optional values (profile tables).
template <typename T>
using RoleMap = std::array<std::optional<T>, kRoleCount>;

struct TaskId {
    int value = 0;
    constexpr auto operator<=>(const TaskId&) const = default;
};

struct Task {
    TaskId id;
    std::string name;
    Rational memory;       // bytes
    Rational storage;      // bytes
    Rational output_data;  // bits
    DeviceSet allowed;
    RoleMap<Rational> latency;  // seconds
    RoleMap<Rational> power;    // watts

    bool fixed() const { return allowed.size() == 1; }
};

/// Application task flow graph. Tasks are stored by id order once validated
/// (tasks[i].id == i + 1); arcs are (parent, child) id pairs.
struct TaskGraph {
    std::vector<Task> tasks;
    std::vector<std::pair<TaskId, TaskId>> arcs;

    std::size_t size() const { return tasks.size(); }
    const Task& task(TaskId id) const;
};

struct Violation {
    std::string code;  // "cycle", "dangling-arc", "empty-allowed-set", ...
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    bool contains(std::string_view code) const;
    std::string to_string() const;
};

ValidationReport validate_task_graph(const TaskGraph& g);

class ValidationError : public Error {
public:
    explicit ValidationError(ValidationReport r) : Error("invalid task graph:\n" + r.to_string()), report(std::move(r)) {}
    ValidationReport report;
};

/// Number of immediate successors (NC_i). Throws on unknown id.
int out_degree(const TaskGraph& g, TaskId id);

/// Kahn order by ascending id among ready tasks; nullopt if the arcs contain a cycle.
std::optional<std::vector<TaskId>> topological_order(const TaskGraph& g);

struct Device {
    DeviceRole role = DeviceRole::Edge;
    std::string name;
    Budget memory_budget;   // bytes
    Budget storage_budget;  // bytes
    Budget energy_budget;   // joules
    Rational idle_power;    // watts
    Rational max_power;     // watts
};

struct Channel {
    DeviceRole from = DeviceRole::Edge;
    DeviceRole to = DeviceRole::Hub;
    Rational bandwidth;   // bits/s
    Rational tx_energy;   // J/bit
    Rational rx_energy;   // J/bit
};

/// Devices, directed channels and the relay table of the target system.
class SystemModel {
public:
    std::string name;

    const Device& device(DeviceRole r) const { return devices_[index_of(r)]; }
    Device& device(DeviceRole r) { return devices_[index_of(r)]; }
    void set_device(Device d) { devices_[index_of(d.role)] = std::move(d); }

    const Channel* channel(DeviceRole from, DeviceRole to) const;
    void set_channel(Channel c);
    void clear_channels();
    std::vector<Channel> channels() const;

    std::optional<DeviceRole> relay(DeviceRole from, DeviceRole to) const { return relay_[index_of(from)][index_of(to)]; }
    void set_relay(DeviceRole from, DeviceRole to, DeviceRole via) { relay_[index_of(from)][index_of(to)] = via; }
    void clear_relays();

    /// Empty when every invariant holds (power ordering, positive budgets and
    /// bandwidths, every ordered pair routable directly or via one relay).
    std::vector<std::string> check() const;

private:
    std::array<Device, kRoleCount> devices_{};
    std::array<std::array<std::optional<Channel>, kRoleCount>, kRoleCount> channels_{};
    std::array<std::array<std::optional<DeviceRole>, kRoleCount>, kRoleCount> relay_{};
};

}  // namespace ehc
