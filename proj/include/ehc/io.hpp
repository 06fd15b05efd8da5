#pragma once

#include "ehc/model.hpp"

#include <json.hpp>

#include <filesystem>
#include <initializer_list>
#include <string>

namespace ehc {

inline constexpr int kSchemaVersion = 1;

/// Reads a quantity that may be a JSON number (already SI) or a string with a unit.
Rational quantity_from_json(const nlohmann::json& value, Dimension dim);

/// null, "inf" or "unbounded" map to an unbounded budget.
Budget budget_from_json(const nlohmann::json& value, Dimension dim);

/// Renders in the first unit of `units` that gives an exact decimal, falling
/// back to the last one.
std::string format_best(const Rational& value, std::initializer_list<std::string_view> units, Dimension dim);

TaskGraph task_graph_from_json(const nlohmann::json& doc);
nlohmann::json task_graph_to_json(const TaskGraph& g);

SystemModel system_from_json(const nlohmann::json& doc);
nlohmann::json system_to_json(const SystemModel& sys);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

TaskGraph load_task_graph(const std::filesystem::path& path);
SystemModel load_system(const std::filesystem::path& path);

}  // namespace ehc
