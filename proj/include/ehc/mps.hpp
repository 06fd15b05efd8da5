#pragma once

#include "ehc/milp.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ehc {

/// Fixed-format MPS. Columns are named C0000001.., rows R0000001.. so every
/// name fits the 8-character fields; the readable labels are listed in
/// leading comment lines. Every column is marked integer with a BV bound.
/// Coefficients carry 12 significant digits, one entry per line.
std::string export_mps(const BilpModel& model, std::string_view name = "EHCALLOC");

/// CPLEX LP text with the readable variable and row labels.
std::string export_lp(const BilpModel& model);

struct MpsRow {
    std::string name;
    char type = 'N';  // N, E, L, G
};

struct MpsColumn {
    std::string name;
    bool integer = false;
    Rational lower = 0;
    std::optional<Rational> upper;
};

struct MpsModel {
    std::string name;
    std::vector<MpsRow> rows;  // constraint rows, objective excluded
    std::vector<MpsColumn> columns;
    std::vector<Rational> objective;
    std::vector<std::vector<std::pair<std::size_t, Rational>>> row_entries;  // per row, (column, value)
    std::vector<Rational> rhs;
};

/// Reads fixed or free MPS (whitespace separated); RANGES are rejected.
MpsModel parse_mps(std::string_view text);

/// Differences between a parsed MPS model and the model it was written
/// from; empty when they agree to 12 significant digits.
std::vector<std::string> compare_with_model(const MpsModel& parsed, const BilpModel& model);

}  // namespace ehc
