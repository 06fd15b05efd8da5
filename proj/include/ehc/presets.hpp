#pragma once

#include "ehc/model.hpp"

#include <string_view>
#include <vector>

namespace ehc::presets {

/// Catalogued device: budgets, average performance ratio relative to the
/// Raspberry Pi 3 reference, and idle/max power.
/// Idle/max power are synthetic placeholders, only used to clamp
/// synthesized benchmark power draws.
struct CatalogDevice {
    std::string_view key;
    std::string_view name;
    DeviceRole role;
    const char* memory_budget;   // parse_quantity strings
    const char* storage_budget;
    const char* energy_budget;   // nullptr = unbounded
    const char* idle_power;
    const char* max_power;
    const char* perf_ratio;
};

const std::vector<CatalogDevice>& catalog();
const CatalogDevice& find_device(std::string_view key_or_name);
Device make_device(const CatalogDevice& entry);

enum class ChannelProfile { Run1, Run2 };
ChannelProfile parse_channel_profile(std::string_view text);

/// Replaces only the channel table of `sys`; devices and relays are untouched.
void apply_channel_profile(SystemModel& sys, ChannelProfile profile);

/// Default relay table: e <-> c through the hub.
void apply_default_relays(SystemModel& sys);

/// C1 = Jetson TX2, C2 = Odroid XU4, C3 = Raspberry Pi 3 as edge; hub and
/// cloud shared. Channels default to Run 1.
SystemModel configuration(std::string_view name, ChannelProfile profile = ChannelProfile::Run1);
bool is_configuration_name(std::string_view name);

/// Performance ratio per role for a system assembled from catalog devices.
RoleMap<Rational> perf_ratios(const SystemModel& sys);

/// Latency threshold used for the energy objective when none is given.
Rational default_latency_threshold();

}  // namespace ehc::presets
