#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ordeal/boundary.hpp"
#include "ordeal/density.hpp"
#include "ordeal/implement.hpp"
#include "ordeal/market.hpp"
#include "ordeal/mechanism.hpp"

namespace ordeal::io {

/// Value of the TOML subset used by scenario and artifact files.
struct TomlValue {
    enum class Kind { number, boolean, string, array };
    Kind kind = Kind::number;
    double number = 0.0;
    bool boolean = false;
    std::string string;
    std::vector<TomlValue> items;
    int line = 0;
};

struct TomlTable {
    std::map<std::string, TomlValue> values;
    std::map<std::string, TomlTable> tables;

    bool has(const std::string& key) const { return values.count(key) != 0; }
    const TomlTable* table(const std::string& name) const;
};

/// Parses key/value pairs, [tables], strings, numbers, booleans and nested arrays.
/// Syntax errors throw ValidationError naming the line.
TomlTable parse_toml(const std::string& text);

/// Typed accessors; `field` is the dotted name reported in errors.
double get_number(const TomlTable& t, const std::string& key, const std::string& field);
double get_number(const TomlTable& t, const std::string& key, const std::string& field, double fallback);
bool get_bool(const TomlTable& t, const std::string& key, const std::string& field, bool fallback);
std::string get_string(const TomlTable& t, const std::string& key, const std::string& field,
                       const std::string& fallback);
std::vector<double> get_numbers(const TomlTable& t, const std::string& key, const std::string& field);
/// Array of fixed-width numeric rows, e.g. [[x, c], ...].
std::vector<std::vector<double>> get_rows(const TomlTable& t, const std::string& key, const std::string& field,
                                          std::size_t width);

/// %.9g, the fixed CSV number format.
std::string csv_number(double x);
/// Shortest round-tripping representation for TOML artifacts.
std::string toml_number(double x);

std::string mechanism_to_toml(const Mechanism& mech);
Mechanism mechanism_from_toml(const std::string& text);

std::string boundary_to_toml(const Boundary& z);
Boundary boundary_from_toml(const std::string& text);

std::string bundle_to_toml(const ImplementationBundle& bundle);
/// Columns a, ua_slope, z_hat, F at `samples` points of [0, 1].
std::string bundle_to_csv(const ImplementationBundle& bundle, const DensityModel& model, int samples = 201);

std::string clearing_to_toml(const ClearingResult& r);

/// Header "density,N" then N rows of N cells; row i holds cells with a in [i/N, (i+1)/N).
DensityModel grid_from_csv(const std::string& text);
std::string grid_to_csv(const GridTable& grid);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace ordeal::io
