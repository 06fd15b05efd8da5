#include "ehc/mps.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <unordered_map>

namespace ehc {

namespace {

std::string fmt12(const Rational& v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v.get_d());
    return buf;
}

std::string code(char prefix, std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%c%07zu", prefix, index + 1);
    return buf;
}

char sense_letter(Sense s) {
    switch (s) {
        case Sense::LessEqual: return 'L';
        case Sense::Equal: return 'E';
        case Sense::GreaterEqual: return 'G';
    }
    return 'N';
}

std::string pad8(std::string_view s) {
    std::string out(s);
    if (out.size() < 8) out.append(8 - out.size(), ' ');
    return out;
}

std::vector<std::string_view> tokens(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

}  // namespace

std::string export_mps(const BilpModel& model, std::string_view name) {
    const std::size_t ncols = model.variables.size();
    // column-major entries
    std::vector<std::vector<std::pair<std::size_t, const Rational*>>> by_col(ncols);
    for (std::size_t r = 0; r < model.rows.size(); ++r)
        for (const auto& [col, v] : model.rows[r].coefficients) by_col[col].emplace_back(r, &v);

    std::ostringstream os;
    os << "* BILP task allocation model, objective: " << objective_name(model.objective_kind) << '\n';
    os << "* columns: " << ncols << "  rows: " << model.rows.size() << '\n';
    for (const Variable& v : model.variables) os << "* " << code('C', v.column) << ' ' << v.name << '\n';
    for (std::size_t r = 0; r < model.rows.size(); ++r) os << "* " << code('R', r) << ' ' << model.rows[r].label << '\n';

    os << "NAME          " << name << '\n';
    os << "ROWS\n N  OBJ\n";
    for (std::size_t r = 0; r < model.rows.size(); ++r) os << ' ' << sense_letter(model.rows[r].sense) << "  " << code('R', r) << '\n';
    os << "COLUMNS\n";
    os << "    MARKER                 'MARKER'                 'INTORG'\n";
    for (std::size_t c = 0; c < ncols; ++c) {
        std::string col = pad8(code('C', c));
        bool wrote = false;
        if (model.objective[c] != 0) {
            os << "    " << col << "  OBJ       " << fmt12(model.objective[c]) << '\n';
            wrote = true;
        }
        for (const auto& [r, v] : by_col[c]) {
            os << "    " << col << "  " << code('R', r) << "  " << fmt12(*v) << '\n';
            wrote = true;
        }
        if (!wrote) os << "    " << col << "  OBJ       0\n";
    }
    os << "    MARKER                 'MARKER'                 'INTEND'\n";
    os << "RHS\n";
    for (std::size_t r = 0; r < model.rows.size(); ++r)
        if (model.rows[r].rhs != 0) os << "    RHS       " << code('R', r) << "  " << fmt12(model.rows[r].rhs) << '\n';
    os << "BOUNDS\n";
    for (std::size_t c = 0; c < ncols; ++c) os << " BV BND       " << code('C', c) << '\n';
    os << "ENDATA\n";
    return os.str();
}

std::string export_lp(const BilpModel& model) {
    std::ostringstream os;
    auto write_terms = [&](const auto& terms) {
        int on_line = 0;
        bool first = true;
        for (const auto& [col, v] : terms) {
            if (on_line == 6) {
                os << "\n   ";
                on_line = 0;
            }
            std::string value = fmt12(v);
            bool negative = value.front() == '-';
            if (negative) value.erase(0, 1);
            if (first) os << (negative ? " -" : " ");
            else os << (negative ? " - " : " + ");
            os << (value == "1" ? "" : value + " ") << model.variables[col].name;
            first = false;
            ++on_line;
        }
        if (first) os << " 0 " << model.variables.front().name;
    };

    os << "\\ BILP task allocation model, objective: " << objective_name(model.objective_kind) << '\n';
    os << "Minimize\n obj:";
    std::vector<std::pair<std::size_t, Rational>> obj;
    for (std::size_t c = 0; c < model.objective.size(); ++c)
        if (model.objective[c] != 0) obj.emplace_back(c, model.objective[c]);
    write_terms(obj);
    os << "\nSubject To\n";
    for (const ConstraintRow& r : model.rows) {
        os << ' ' << r.label << ':';
        write_terms(r.coefficients);
        const char* op = r.sense == Sense::LessEqual ? " <= " : r.sense == Sense::Equal ? " = " : " >= ";
        os << op << fmt12(r.rhs) << '\n';
    }
    os << "Binary\n";
    for (const Variable& v : model.variables) os << ' ' << v.name << '\n';
    os << "End\n";
    return os.str();
}

MpsModel parse_mps(std::string_view text) {
    MpsModel m;
    enum class Section { None, Rows, Columns, Rhs, Bounds, Done } section = Section::None;
    std::string objective_row;
    std::unordered_map<std::string, std::size_t> row_index;
    std::unordered_map<std::string, std::size_t> col_index;
    bool integer_block = false;
    std::size_t line_no = 0;

    auto fail = [&](const std::string& msg) { throw ParseError("MPS line " + std::to_string(line_no) + ": " + msg); };
    auto column = [&](std::string_view name) -> std::size_t {
        auto [it, inserted] = col_index.try_emplace(std::string(name), m.columns.size());
        if (inserted) {
            m.columns.push_back({std::string(name), integer_block, 0, std::nullopt});
            m.objective.emplace_back(0);
        }
        return it->second;
    };
    auto add_entry = [&](std::size_t col, std::string_view row, std::string_view value) {
        Rational v = parse_decimal(value);
        if (row == objective_row) {
            m.objective[col] += v;
            return;
        }
        auto it = row_index.find(std::string(row));
        if (it == row_index.end()) fail("unknown row '" + std::string(row) + "'");
        m.row_entries[it->second].emplace_back(col, v);
    };

    std::size_t pos = 0;
    while (pos <= text.size() && section != Section::Done) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (line.empty() || line.front() == '*') {
            if (end == text.size()) break;
            continue;
        }
        auto tok = tokens(line);
        if (tok.empty()) continue;
        bool header = line.front() != ' ' && line.front() != '\t';
        if (header) {
            if (tok[0] == "NAME") m.name = tok.size() > 1 ? std::string(tok[1]) : "";
            else if (tok[0] == "ROWS") section = Section::Rows;
            else if (tok[0] == "COLUMNS") section = Section::Columns;
            else if (tok[0] == "RHS") section = Section::Rhs;
            else if (tok[0] == "BOUNDS") section = Section::Bounds;
            else if (tok[0] == "ENDATA") section = Section::Done;
            else if (tok[0] == "RANGES") fail("RANGES section is not supported");
            else fail("unknown section '" + std::string(tok[0]) + "'");
            continue;
        }
        switch (section) {
            case Section::Rows: {
                if (tok.size() != 2) fail("expected '<type> <name>'");
                char type = tok[0].front();
                if (type == 'N') {
                    if (objective_row.empty()) objective_row = tok[1];
                    continue;
                }
                if (type != 'E' && type != 'L' && type != 'G') fail("bad row type");
                row_index[std::string(tok[1])] = m.rows.size();
                m.rows.push_back({std::string(tok[1]), type});
                m.row_entries.emplace_back();
                m.rhs.emplace_back(0);
                break;
            }
            case Section::Columns: {
                if (tok.size() >= 3 && tok[1] == "'MARKER'") {
                    if (tok[2] == "'INTORG'") integer_block = true;
                    else if (tok[2] == "'INTEND'") integer_block = false;
                    else fail("bad marker");
                    continue;
                }
                if (tok.size() != 3 && tok.size() != 5) fail("expected column entries");
                std::size_t col = column(tok[0]);
                for (std::size_t i = 1; i + 1 < tok.size(); i += 2) add_entry(col, tok[i], tok[i + 1]);
                break;
            }
            case Section::Rhs: {
                if (tok.size() != 3 && tok.size() != 5) fail("expected rhs entries");
                for (std::size_t i = 1; i + 1 < tok.size(); i += 2) {
                    if (tok[i] == objective_row) continue;
                    auto it = row_index.find(std::string(tok[i]));
                    if (it == row_index.end()) fail("unknown row in RHS");
                    m.rhs[it->second] = parse_decimal(tok[i + 1]);
                }
                break;
            }
            case Section::Bounds: {
                if (tok.size() < 3) fail("expected bound entry");
                auto it = col_index.find(std::string(tok[2]));
                if (it == col_index.end()) fail("unknown column in BOUNDS");
                MpsColumn& c = m.columns[it->second];
                std::string_view type = tok[0];
                if (type == "BV") {
                    c.integer = true;
                    c.lower = 0;
                    c.upper = Rational(1);
                } else if (tok.size() == 4) {
                    Rational v = parse_decimal(tok[3]);
                    if (type == "UP") c.upper = v;
                    else if (type == "LO") c.lower = v;
                    else if (type == "FX") c.lower = v, c.upper = v;
                    else fail("unsupported bound type");
                } else {
                    fail("unsupported bound entry");
                }
                break;
            }
            default: fail("data outside of a section");
        }
    }
    if (section != Section::Done) throw ParseError("MPS: missing ENDATA");
    return m;
}

std::vector<std::string> compare_with_model(const MpsModel& parsed, const BilpModel& model) {
    std::vector<std::string> diffs;
    auto close = [](const Rational& a, const Rational& b) {
        double x = a.get_d(), y = b.get_d();
        return std::fabs(x - y) <= 1e-11 * std::max({1.0, std::fabs(x), std::fabs(y)});
    };
    if (parsed.columns.size() != model.variables.size())
        diffs.push_back("column count " + std::to_string(parsed.columns.size()) + " != " +
                        std::to_string(model.variables.size()));
    if (parsed.rows.size() != model.rows.size())
        diffs.push_back("row count " + std::to_string(parsed.rows.size()) + " != " + std::to_string(model.rows.size()));
    if (!diffs.empty()) return diffs;

    for (std::size_t c = 0; c < parsed.columns.size(); ++c) {
        const MpsColumn& col = parsed.columns[c];
        if (col.name != code('C', c)) diffs.push_back("column order differs at " + col.name);
        if (!col.integer || col.lower != 0 || !col.upper || *col.upper != 1)
            diffs.push_back("column " + col.name + " is not binary");
        if (!close(parsed.objective[c], model.objective[c])) diffs.push_back("objective differs at " + col.name);
    }
    for (std::size_t r = 0; r < parsed.rows.size(); ++r) {
        const ConstraintRow& row = model.rows[r];
        if (parsed.rows[r].type != sense_letter(row.sense)) diffs.push_back("sense differs at " + row.label);
        if (!close(parsed.rhs[r], row.rhs)) diffs.push_back("rhs differs at " + row.label);
        std::map<std::size_t, Rational> got;
        for (const auto& [col, v] : parsed.row_entries[r]) got[col] += v;
        if (got.size() != row.coefficients.size()) {
            diffs.push_back("entry count differs at " + row.label);
            continue;
        }
        for (const auto& [col, v] : row.coefficients) {
            auto it = got.find(col);
            if (it == got.end() || !close(it->second, v)) diffs.push_back("coefficient differs at " + row.label);
        }
    }
    return diffs;
}

}  // namespace ehc
