#include "ehc/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace ehc {

using nlohmann::json;

namespace {

void check_schema(const json& doc, const char* what) {
    if (!doc.is_object()) throw ParseError(std::string(what) + ": document must be a JSON object");
    if (doc.contains("schema") && doc.at("schema") != kSchemaVersion)
        throw ParseError(std::string(what) + ": unsupported schema version " + doc.at("schema").dump());
}

RoleMap<Rational> profile_from_json(const json& obj, Dimension dim) {
    RoleMap<Rational> out;
    if (obj.is_null()) return out;
    if (!obj.is_object()) throw ParseError("profile must be an object keyed by device role");
    for (auto it = obj.begin(); it != obj.end(); ++it)
        out[index_of(parse_role(it.key()))] = quantity_from_json(it.value(), dim);
    return out;
}

json profile_to_json(const RoleMap<Rational>& profile, std::initializer_list<std::string_view> units, Dimension dim) {
    json obj = json::object();
    for (DeviceRole r : kAllRoles)
        if (const auto& v = profile[index_of(r)]) obj[std::string(1, role_letter(r))] = format_best(*v, units, dim);
    return obj;
}

json budget_to_json(const Budget& b, std::initializer_list<std::string_view> units, Dimension dim) {
    if (!b) return nullptr;
    return format_best(*b, units, dim);
}

}  // namespace

Rational quantity_from_json(const json& value, Dimension dim) {
    if (value.is_number_integer()) return Rational(mpz_class(value.dump(), 10));
    if (value.is_number()) return rational_from_double(value.get<double>());
    if (value.is_string()) return parse_quantity(value.get<std::string>(), dim);
    throw ParseError("expected a number or quantity string, got " + value.dump());
}

Budget budget_from_json(const json& value, Dimension dim) {
    if (value.is_null()) return std::nullopt;
    if (value.is_string()) {
        auto s = value.get<std::string>();
        if (s == "inf" || s == "unbounded" || s == "-") return std::nullopt;
    }
    return quantity_from_json(value, dim);
}

std::string format_best(const Rational& value, std::initializer_list<std::string_view> units, Dimension dim) {
    for (std::string_view u : units) {
        Rational scaled = value / unit_factor(u, dim);
        mpz_class den = scaled.get_den();
        mpz_class rest = den >> mpz_scan1(den.get_mpz_t(), 0);
        while (rest % 5 == 0) rest /= 5;
        if (rest == 1) return format_decimal(scaled) + std::string(u);
    }
    return format_quantity(value, *(units.end() - 1), dim);
}

TaskGraph task_graph_from_json(const json& doc) {
    check_schema(doc, "task graph");
    TaskGraph g;
    for (const json& jt : doc.at("tasks")) {
        Task t;
        t.id = TaskId{jt.at("id").get<int>()};
        t.name = jt.value("name", std::string{});
        t.memory = quantity_from_json(jt.value("memory", json(0)), Dimension::Bytes);
        t.storage = quantity_from_json(jt.value("storage", json(0)), Dimension::Bytes);
        t.output_data = quantity_from_json(jt.value("output_data", json(0)), Dimension::DataBits);
        if (jt.contains("allowed"))
            for (const json& r : jt.at("allowed")) t.allowed.insert(parse_role(r.get<std::string>()));
        t.latency = profile_from_json(jt.value("latency", json()), Dimension::Time);
        t.power = profile_from_json(jt.value("power", json()), Dimension::Power);
        g.tasks.push_back(std::move(t));
    }
    std::stable_sort(g.tasks.begin(), g.tasks.end(), [](const Task& a, const Task& b) { return a.id < b.id; });
    if (doc.contains("arcs")) {
        for (const json& ja : doc.at("arcs")) {
            if (!ja.is_array() || ja.size() != 2) throw ParseError("arc must be a [from, to] pair: " + ja.dump());
            g.arcs.emplace_back(TaskId{ja[0].get<int>()}, TaskId{ja[1].get<int>()});
        }
    }
    return g;
}

json task_graph_to_json(const TaskGraph& g) {
    json doc;
    doc["schema"] = kSchemaVersion;
    json tasks = json::array();
    for (const Task& t : g.tasks) {
        json jt;
        jt["id"] = t.id.value;
        if (!t.name.empty()) jt["name"] = t.name;
        jt["memory"] = format_best(t.memory, {"MiB", "KiB", "B"}, Dimension::Bytes);
        jt["storage"] = format_best(t.storage, {"MiB", "KiB", "B"}, Dimension::Bytes);
        jt["output_data"] = format_best(t.output_data, {"Mbit", "bit"}, Dimension::DataBits);
        json allowed = json::array();
        for (DeviceRole r : t.allowed.roles()) allowed.push_back(std::string(1, role_letter(r)));
        jt["allowed"] = allowed;
        jt["latency"] = profile_to_json(t.latency, {"ms", "s"}, Dimension::Time);
        jt["power"] = profile_to_json(t.power, {"W"}, Dimension::Power);
        tasks.push_back(std::move(jt));
    }
    doc["tasks"] = std::move(tasks);
    json arcs = json::array();
    for (auto [from, to] : g.arcs) arcs.push_back({from.value, to.value});
    doc["arcs"] = std::move(arcs);
    return doc;
}

SystemModel system_from_json(const json& doc) {
    check_schema(doc, "system model");
    SystemModel sys;
    sys.name = doc.value("name", std::string{});
    const json& devices = doc.at("devices");
    for (DeviceRole r : kAllRoles) {
        std::string key(1, role_letter(r));
        if (!devices.contains(key)) throw ParseError("system model: missing device '" + key + "'");
        const json& jd = devices.at(key);
        Device d;
        d.role = r;
        d.name = jd.value("name", std::string(role_name(r)));
        d.memory_budget = budget_from_json(jd.value("memory_budget", json()), Dimension::Bytes);
        d.storage_budget = budget_from_json(jd.value("storage_budget", json()), Dimension::Bytes);
        d.energy_budget = budget_from_json(jd.value("energy_budget", json()), Dimension::Energy);
        d.idle_power = quantity_from_json(jd.at("idle_power"), Dimension::Power);
        d.max_power = quantity_from_json(jd.at("max_power"), Dimension::Power);
        sys.set_device(std::move(d));
    }
    for (const json& jc : doc.at("channels")) {
        Channel c;
        c.from = parse_role(jc.at("from").get<std::string>());
        c.to = parse_role(jc.at("to").get<std::string>());
        c.bandwidth = quantity_from_json(jc.at("bandwidth"), Dimension::Bandwidth);
        c.tx_energy = quantity_from_json(jc.at("tx_energy"), Dimension::EnergyPerBit);
        c.rx_energy = quantity_from_json(jc.at("rx_energy"), Dimension::EnergyPerBit);
        sys.set_channel(std::move(c));
    }
    if (doc.contains("relays")) {
        for (const json& jr : doc.at("relays"))
            sys.set_relay(parse_role(jr.at("from").get<std::string>()), parse_role(jr.at("to").get<std::string>()),
                          parse_role(jr.at("via").get<std::string>()));
    }
    if (auto problems = sys.check(); !problems.empty()) {
        std::string msg = "system model is inconsistent:";
        for (const auto& p : problems) msg += "\n  " + p;
        throw ParseError(msg);
    }
    return sys;
}

json system_to_json(const SystemModel& sys) {
    json doc;
    doc["schema"] = kSchemaVersion;
    if (!sys.name.empty()) doc["name"] = sys.name;
    json devices = json::object();
    for (DeviceRole r : kAllRoles) {
        const Device& d = sys.device(r);
        json jd;
        jd["name"] = d.name;
        jd["memory_budget"] = budget_to_json(d.memory_budget, {"GiB", "MiB", "B"}, Dimension::Bytes);
        jd["storage_budget"] = budget_to_json(d.storage_budget, {"GiB", "MiB", "B"}, Dimension::Bytes);
        jd["energy_budget"] = budget_to_json(d.energy_budget, {"Wh", "J"}, Dimension::Energy);
        jd["idle_power"] = format_best(d.idle_power, {"W"}, Dimension::Power);
        jd["max_power"] = format_best(d.max_power, {"W"}, Dimension::Power);
        devices[std::string(1, role_letter(r))] = std::move(jd);
    }
    doc["devices"] = std::move(devices);
    json channels = json::array();
    for (const Channel& c : sys.channels()) {
        channels.push_back({{"from", std::string(1, role_letter(c.from))},
                            {"to", std::string(1, role_letter(c.to))},
                            {"bandwidth", format_best(c.bandwidth, {"Mbit/s", "bit/s"}, Dimension::Bandwidth)},
                            {"tx_energy", format_best(c.tx_energy, {"uJ/bit", "J/bit"}, Dimension::EnergyPerBit)},
                            {"rx_energy", format_best(c.rx_energy, {"uJ/bit", "J/bit"}, Dimension::EnergyPerBit)}});
    }
    doc["channels"] = std::move(channels);
    json relays = json::array();
    for (DeviceRole k : kAllRoles)
        for (DeviceRole l : kAllRoles)
            if (auto via = sys.relay(k, l))
                relays.push_back({{"from", std::string(1, role_letter(k))},
                                  {"to", std::string(1, role_letter(l))},
                                  {"via", std::string(1, role_letter(*via))}});
    doc["relays"] = std::move(relays);
    return doc;
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

TaskGraph load_task_graph(const std::filesystem::path& path) {
    try {
        return task_graph_from_json(read_json_file(path));
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

SystemModel load_system(const std::filesystem::path& path) {
    try {
        return system_from_json(read_json_file(path));
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

}  // namespace ehc
