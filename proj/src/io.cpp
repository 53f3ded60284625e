#include "ordeal/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ordeal/error.hpp"

namespace ordeal::io {

namespace {

class Parser {
public:
    explicit Parser(const std::string& text) : s_(text) {}

    TomlTable parse() {
        TomlTable root;
        TomlTable* current = &root;
        for (;;) {
            skip_blank_lines();
            if (at_end()) break;
            if (peek() == '[') {
                ++pos_;
                skip_spaces();
                std::string name = key();
                skip_spaces();
                expect(']');
                if (root.tables.count(name)) fail("duplicate table [" + name + "]");
                end_of_line();
                current = &root.tables[name];
                continue;
            }
            std::string k = key();
            if (current->values.count(k)) fail("duplicate key '" + k + "'");
            skip_spaces();
            expect('=');
            skip_spaces();
            TomlValue v = value();
            end_of_line();
            current->values[k] = std::move(v);
        }
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ValidationError("line " + std::to_string(line_) + ": " + what);
    }
    bool at_end() const { return pos_ >= s_.size(); }
    char peek() const { return at_end() ? '\0' : s_[pos_]; }
    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }
    void skip_spaces() {
        while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) ++pos_;
    }
    void skip_comment() {
        if (peek() == '#')
            while (!at_end() && peek() != '\n') ++pos_;
    }
    void skip_blank_lines() {
        for (;;) {
            skip_spaces();
            skip_comment();
            if (peek() != '\n') return;
            ++pos_;
            ++line_;
        }
    }
    void end_of_line() {
        skip_spaces();
        skip_comment();
        if (at_end()) return;
        if (peek() != '\n') fail("unexpected text after value");
        ++pos_;
        ++line_;
    }
    std::string key() {
        if (peek() == '"') return quoted();
        std::size_t start = pos_;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-' ||
                             peek() == '.'))
            ++pos_;
        if (pos_ == start) fail("expected a key");
        return s_.substr(start, pos_ - start);
    }
    std::string quoted() {
        expect('"');
        std::string out;
        for (;;) {
            if (at_end() || peek() == '\n') fail("unterminated string");
            char c = s_[pos_++];
            if (c == '"') break;
            if (c == '\\') {
                char e = s_[pos_++];
                switch (e) {
                    case 'n': out += '\n'; break;
                    case 't': out += '\t'; break;
                    case '"': out += '"'; break;
                    case '\\': out += '\\'; break;
                    default: fail("unsupported escape");
                }
                continue;
            }
            out += c;
        }
        return out;
    }
    void skip_array_space() {
        for (;;) {
            skip_spaces();
            skip_comment();
            if (peek() != '\n') return;
            ++pos_;
            ++line_;
        }
    }
    TomlValue value() {
        TomlValue v;
        v.line = line_;
        char c = peek();
        if (c == '"') {
            v.kind = TomlValue::Kind::string;
            v.string = quoted();
            return v;
        }
        if (c == '[') {
            ++pos_;
            v.kind = TomlValue::Kind::array;
            for (;;) {
                skip_array_space();
                if (at_end()) {
                    line_ = v.line;
                    fail("array not closed");
                }
                if (peek() == ']') {
                    ++pos_;
                    return v;
                }
                v.items.push_back(value());
                skip_array_space();
                if (peek() == ',') {
                    ++pos_;
                    continue;
                }
                if (at_end()) {
                    line_ = v.line;
                    fail("array not closed");
                }
                if (peek() != ']') fail("expected ',' or ']' in array");
            }
        }
        std::size_t start = pos_;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '+' || peek() == '-' ||
                             peek() == '.' || peek() == '_'))
            ++pos_;
        std::string tok = s_.substr(start, pos_ - start);
        if (tok == "true" || tok == "false") {
            v.kind = TomlValue::Kind::boolean;
            v.boolean = tok == "true";
            return v;
        }
        std::string digits;
        for (char ch : tok)
            if (ch != '_') digits += ch;
        if (digits == "inf" || digits == "+inf") v.number = HUGE_VAL;
        else if (digits == "-inf") v.number = -HUGE_VAL;
        else if (digits == "nan" || digits == "+nan" || digits == "-nan") v.number = std::nan("");
        else {
            char* endp = nullptr;
            v.number = std::strtod(digits.c_str(), &endp);
            if (digits.empty() || endp != digits.c_str() + digits.size()) fail("invalid value '" + tok + "'");
        }
        v.kind = TomlValue::Kind::number;
        return v;
    }

    const std::string& s_;
    std::size_t pos_ = 0;
    int line_ = 1;
};

const TomlValue& require(const TomlTable& t, const std::string& key, const std::string& field) {
    auto it = t.values.find(key);
    if (it == t.values.end()) throw ValidationError(field + ": missing");
    return it->second;
}

double as_number(const TomlValue& v, const std::string& field) {
    if (v.kind != TomlValue::Kind::number)
        throw ValidationError(field + ": expected a number (line " + std::to_string(v.line) + ")");
    return v.number;
}

std::string format(const char* fmt, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, x);
    return buf;
}

std::string rows_to_toml(const std::string& key, const std::vector<std::pair<double, double>>& rows) {
    std::string out = key + " = [";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i) out += ", ";
        out += "[" + toml_number(rows[i].first) + ", " + toml_number(rows[i].second) + "]";
    }
    return out + "]\n";
}

template <class T>
std::vector<std::pair<double, double>> pairs(std::span<const T> xs) {
    std::vector<std::pair<double, double>> out;
    for (const auto& x : xs) {
        if constexpr (std::is_same_v<T, MenuOption>) out.push_back({x.quality, x.ordeal});
        else if constexpr (std::is_same_v<T, Point>) out.push_back({x.a, x.b});
        else out.push_back({x.x, x.y});
    }
    return out;
}

}  // namespace

const TomlTable* TomlTable::table(const std::string& name) const {
    auto it = tables.find(name);
    return it == tables.end() ? nullptr : &it->second;
}

TomlTable parse_toml(const std::string& text) { return Parser(text).parse(); }

double get_number(const TomlTable& t, const std::string& key, const std::string& field) {
    return as_number(require(t, key, field), field);
}

double get_number(const TomlTable& t, const std::string& key, const std::string& field, double fallback) {
    return t.has(key) ? get_number(t, key, field) : fallback;
}

bool get_bool(const TomlTable& t, const std::string& key, const std::string& field, bool fallback) {
    if (!t.has(key)) return fallback;
    const auto& v = require(t, key, field);
    if (v.kind != TomlValue::Kind::boolean) throw ValidationError(field + ": expected true or false");
    return v.boolean;
}

std::string get_string(const TomlTable& t, const std::string& key, const std::string& field,
                       const std::string& fallback) {
    if (!t.has(key)) return fallback;
    const auto& v = require(t, key, field);
    if (v.kind != TomlValue::Kind::string) throw ValidationError(field + ": expected a string");
    return v.string;
}

std::vector<double> get_numbers(const TomlTable& t, const std::string& key, const std::string& field) {
    const auto& v = require(t, key, field);
    if (v.kind != TomlValue::Kind::array) throw ValidationError(field + ": expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.items.size(); ++i)
        out.push_back(as_number(v.items[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<std::vector<double>> get_rows(const TomlTable& t, const std::string& key, const std::string& field,
                                          std::size_t width) {
    const auto& v = require(t, key, field);
    if (v.kind != TomlValue::Kind::array) throw ValidationError(field + ": expected an array of rows");
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < v.items.size(); ++i) {
        std::string name = field + "[" + std::to_string(i) + "]";
        const auto& row = v.items[i];
        if (row.kind != TomlValue::Kind::array || row.items.size() != width)
            throw ValidationError(name + ": expected " + std::to_string(width) + " numbers");
        std::vector<double> r;
        for (std::size_t j = 0; j < width; ++j) r.push_back(as_number(row.items[j], name));
        out.push_back(std::move(r));
    }
    return out;
}

std::string csv_number(double x) { return format("%.9g", x); }

std::string toml_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    std::string s(buf, res.ptr);
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
}

std::string mechanism_to_toml(const Mechanism& mech) {
    return rows_to_toml("menu_a", pairs(mech.menu_a())) + rows_to_toml("menu_b", pairs(mech.menu_b()));
}

Mechanism mechanism_from_toml(const std::string& text) {
    auto t = parse_toml(text);
    auto menu = [&](const std::string& key) {
        std::vector<MenuOption> out;
        for (const auto& r : get_rows(t, key, key, 2)) out.push_back({r[0], r[1]});
        return out;
    };
    try {
        return Mechanism(menu("menu_a"), menu("menu_b"));
    } catch (const ParameterError& e) {
        throw ValidationError(std::string("menu: ") + e.what());
    }
}

std::string boundary_to_toml(const Boundary& z) { return rows_to_toml("knots", pairs(z.knots())); }

Boundary boundary_from_toml(const std::string& text) {
    auto t = parse_toml(text);
    std::vector<Point> pts;
    for (const auto& r : get_rows(t, "knots", "knots", 2)) pts.push_back({r[0], r[1]});
    try {
        return Boundary(std::move(pts));
    } catch (const ParameterError& e) {
        throw ValidationError(std::string("knots: ") + e.what());
    }
}

std::string bundle_to_toml(const ImplementationBundle& b) {
    std::string out = boundary_to_toml(b.boundary);
    out += rows_to_toml("ua", pairs(b.ua.knots()));
    out += rows_to_toml("ub", pairs(b.ub.knots()));
    out += mechanism_to_toml(b.mech);
    out += "c_scale = " + toml_number(b.c_scale) + "\n";
    return out;
}

std::string bundle_to_csv(const ImplementationBundle& b, const DensityModel& model, int samples) {
    std::string out = "a,ua_slope,z_hat,F\n";
    for (int i = 0; i < samples; ++i) {
        double a = double(i) / (samples - 1);
        double z = extended(b.boundary, a);
        out += csv_number(a) + "," + csv_number(b.ua.slope_right(a)) + "," + csv_number(z) + "," +
               csv_number(model.cdf(a, z)) + "\n";
    }
    return out;
}

std::string clearing_to_toml(const ClearingResult& r) {
    std::string out;
    out += "c_a = " + toml_number(r.c_a) + "\n";
    out += "c_b = " + toml_number(r.c_b) + "\n";
    out += "demand = [" + toml_number(r.demand.mass_a) + ", " + toml_number(r.demand.mass_b) + "]\n";
    out += "iterations = " + std::to_string(r.iterations) + "\n";
    out += "residual = " + toml_number(r.residual) + "\n";
    out += "slack = [" + toml_number(r.slack_a) + ", " + toml_number(r.slack_b) + "]\n";
    return out;
}

DensityModel grid_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto next = [&]() {
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) return true;
        }
        return false;
    };
    if (!next()) throw ValidationError("grid: empty file");
    std::size_t n = 0;
    {
        auto comma = line.find(',');
        if (comma == std::string::npos || line.substr(0, comma) != "density")
            throw ValidationError("grid: line 1: expected header 'density,N'");
        try {
            long v = std::stol(line.substr(comma + 1));
            if (v < 1) throw std::out_of_range("n");
            n = static_cast<std::size_t>(v);
        } catch (const std::exception&) {
            throw ValidationError("grid: line 1: invalid N");
        }
    }
    std::vector<double> cells;
    cells.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!next()) throw ValidationError("grid: expected " + std::to_string(n) + " rows");
        std::istringstream row(line);
        std::string cell;
        std::size_t count = 0;
        while (std::getline(row, cell, ',')) {
            char* endp = nullptr;
            double v = std::strtod(cell.c_str(), &endp);
            if (cell.empty() || *endp != '\0' || !(v >= 0.0) || !std::isfinite(v))
                throw ValidationError("grid: line " + std::to_string(lineno) + ": invalid cell '" + cell + "'");
            cells.push_back(v);
            ++count;
        }
        if (count != n)
            throw ValidationError("grid: line " + std::to_string(lineno) + ": expected " + std::to_string(n) +
                                  " cells");
    }
    if (next()) throw ValidationError("grid: line " + std::to_string(lineno) + ": extra row");
    try {
        return DensityModel::grid(n, std::move(cells));
    } catch (const ParameterError& e) {
        throw ValidationError(std::string("grid: ") + e.what());
    }
}

std::string grid_to_csv(const GridTable& grid) {
    std::string out = "density," + std::to_string(grid.n()) + "\n";
    for (std::size_t i = 0; i < grid.n(); ++i) {
        for (std::size_t j = 0; j < grid.n(); ++j) {
            if (j) out += ",";
            out += toml_number(grid.cell(i, j));
        }
        out += "\n";
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError(path + ": cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError(path + ": cannot write");
    out << contents;
}

}  // namespace ordeal::io
