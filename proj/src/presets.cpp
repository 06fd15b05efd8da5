#include "ehc/presets.hpp"

namespace ehc::presets {

const std::vector<CatalogDevice>& catalog() {
    static const std::vector<CatalogDevice> devices{
        {"jetson-tx2", "Jetson TX2", DeviceRole::Edge, "8GiB", "32GiB", "129.96Wh", "2.0W", "15.0W", "6.99"},
        {"odroid-xu4", "Odroid XU4", DeviceRole::Edge, "2GiB", "16GiB", "129.96Wh", "2.7W", "10.0W", "2.99"},
        {"rpi3b", "Raspberry Pi 3 Model B", DeviceRole::Edge, "1GiB", "16GiB", "129.96Wh", "1.4W", "5.1W", "1"},
        {"mi-notebook-pro", "Mi Notebook Pro", DeviceRole::Hub, "8GiB", "512GiB", "60.00Wh", "5.0W", "45.0W",
         "50.77"},
        {"hpe-dl580", "HPE ProLiant DL580 Gen10", DeviceRole::Cloud, "400GiB", "10TiB", nullptr, "250W", "1600W",
         "105.55"},
    };
    return devices;
}

const CatalogDevice& find_device(std::string_view key_or_name) {
    for (const CatalogDevice& d : catalog())
        if (d.key == key_or_name || d.name == key_or_name) return d;
    throw Error("unknown catalog device '" + std::string(key_or_name) + "'");
}

Device make_device(const CatalogDevice& entry) {
    Device d;
    d.role = entry.role;
    d.name = std::string(entry.name);
    d.memory_budget = parse_quantity(entry.memory_budget, Dimension::Bytes);
    d.storage_budget = parse_quantity(entry.storage_budget, Dimension::Bytes);
    if (entry.energy_budget) d.energy_budget = parse_quantity(entry.energy_budget, Dimension::Energy);
    d.idle_power = parse_quantity(entry.idle_power, Dimension::Power);
    d.max_power = parse_quantity(entry.max_power, Dimension::Power);
    return d;
}

ChannelProfile parse_channel_profile(std::string_view text) {
    if (text == "run1" || text == "Run1" || text == "1") return ChannelProfile::Run1;
    if (text == "run2" || text == "Run2" || text == "2") return ChannelProfile::Run2;
    throw Error("unknown channel profile '" + std::string(text) + "' (expected run1 or run2)");
}

void apply_channel_profile(SystemModel& sys, ChannelProfile profile) {
    struct Row {
        DeviceRole from, to;
        const char* bandwidth;
        const char* tx;
        const char* rx;
    };
    using R = DeviceRole;
    static const Row run1[] = {{R::Edge, R::Hub, "15Mbit/s", "1.0uJ/bit", "0.70uJ/bit"},
                               {R::Hub, R::Edge, "20Mbit/s", "1.0uJ/bit", "0.70uJ/bit"},
                               {R::Hub, R::Cloud, "25Mbit/s", "2.5uJ/bit", "1.25uJ/bit"},
                               {R::Cloud, R::Hub, "35Mbit/s", "2.5uJ/bit", "1.25uJ/bit"}};
    static const Row run2[] = {{R::Edge, R::Hub, "10Mbit/s", "1.0uJ/bit", "0.7uJ/bit"},
                               {R::Hub, R::Edge, "10Mbit/s", "1.0uJ/bit", "0.7uJ/bit"},
                               {R::Hub, R::Cloud, "0.5Mbit/s", "6.5uJ/bit", "4.5uJ/bit"},
                               {R::Cloud, R::Hub, "1.5Mbit/s", "6.5uJ/bit", "4.5uJ/bit"}};
    sys.clear_channels();
    for (const Row& row : profile == ChannelProfile::Run1 ? run1 : run2) {
        sys.set_channel(Channel{row.from, row.to, parse_quantity(row.bandwidth, Dimension::Bandwidth),
                                parse_quantity(row.tx, Dimension::EnergyPerBit),
                                parse_quantity(row.rx, Dimension::EnergyPerBit)});
    }
}

void apply_default_relays(SystemModel& sys) {
    sys.clear_relays();
    sys.set_relay(DeviceRole::Edge, DeviceRole::Cloud, DeviceRole::Hub);
    sys.set_relay(DeviceRole::Cloud, DeviceRole::Edge, DeviceRole::Hub);
}

bool is_configuration_name(std::string_view name) {
    return name == "C1" || name == "C2" || name == "C3" || name == "c1" || name == "c2" || name == "c3";
}

SystemModel configuration(std::string_view name, ChannelProfile profile) {
    std::string_view edge;
    if (name == "C1" || name == "c1") edge = "jetson-tx2";
    else if (name == "C2" || name == "c2") edge = "odroid-xu4";
    else if (name == "C3" || name == "c3") edge = "rpi3b";
    else throw Error("unknown configuration '" + std::string(name) + "' (expected C1, C2 or C3)");

    SystemModel sys;
    sys.name = std::string(1, 'C') + name.back();
    sys.set_device(make_device(find_device(edge)));
    sys.set_device(make_device(find_device("mi-notebook-pro")));
    sys.set_device(make_device(find_device("hpe-dl580")));
    apply_channel_profile(sys, profile);
    apply_default_relays(sys);
    return sys;
}

RoleMap<Rational> perf_ratios(const SystemModel& sys) {
    RoleMap<Rational> out;
    for (DeviceRole r : kAllRoles)
        for (const CatalogDevice& d : catalog())
            if (d.name == sys.device(r).name) out[index_of(r)] = parse_decimal(d.perf_ratio);
    return out;
}

Rational default_latency_threshold() { return parse_quantity("8000ms", Dimension::Time); }

}  // namespace ehc::presets
