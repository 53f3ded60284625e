#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ordeal {

/// A type (a, b) in the unit square.
struct Point {
    double a = 0.0;
    double b = 0.0;
    friend bool operator==(const Point&, const Point&) = default;
};

/// Densities below this are treated as zero by ratio computations.
inline constexpr double kDensityFloor = 1e-12;

/// Piecewise-constant density on a uniform N x N grid with exact prefix integrals.
/// cells[i * n + j] is the value on [i/n, (i+1)/n) x [j/n, (j+1)/n): i indexes a, j indexes b.
class GridTable {
public:
    GridTable() = default;
    GridTable(std::size_t n, std::vector<double> cells);

    std::size_t n() const { return n_; }
    double h() const { return 1.0 / static_cast<double>(n_); }
    double cell(std::size_t i, std::size_t j) const { return cells_[i * n_ + j]; }
    std::span<const double> cells() const { return cells_; }
    double total() const { return prefix(n_, n_); }

    double density(double a, double b) const;
    double cdf(double a, double b) const;
    double partial_mass_a(double a, double b) const;
    double partial_mass_b(double a, double b) const;

    /// Parameters t in (0,1) where the segment p -> q crosses a cell edge.
    void crossings(Point p, Point q, std::vector<double>& ts) const;

private:
    double prefix(std::size_t i, std::size_t j) const { return prefix_[i * (n_ + 1) + j]; }
    std::size_t index(double x) const;

    std::size_t n_ = 0;
    std::vector<double> cells_;
    std::vector<double> prefix_;
};

enum class DensityKind { grid, uniform, example1, custom };

std::string to_string(DensityKind kind);

/// Joint value density on [0,1]^2. Immutable; copies share state.
class DensityModel {
public:
    /// Uniform density.
    DensityModel();
    static DensityModel uniform();
    /// The three-band density of the damage counterexample.
    static DensityModel example1(double epsilon, double k);
    /// cells as in GridTable; normalized to unit mass.
    static DensityModel grid(std::size_t n, std::vector<double> cells);
    /// Closed-form density discretized into n x n cell averages (3x3 Gauss-Legendre per cell).
    static DensityModel custom(const std::function<double(double, double)>& f, std::size_t n = 200);

    DensityKind kind() const;
    double epsilon() const;
    double k() const;

    double density(double a, double b) const;
    double cdf(double a, double b) const;
    /// Integral of f(v, b) over v in [0, a].
    double partial_mass_a(double a, double b) const;
    /// Integral of f(a, w) over w in [0, b].
    double partial_mass_b(double a, double b) const;
    /// F_{A|B}(a|b) / f_{A|B}(a|b); throws DensityFloorError where f <= floor.
    double inv_anti_hazard_a(double a, double b) const;
    double inv_anti_hazard_b(double a, double b) const;

    /// The model of (b, a).
    DensityModel transposed() const;

    /// Parameters t in (0,1) at which the segment p -> q crosses a line where the
    /// density (or one of its partial integrals) changes formula.
    void feature_crossings(Point p, Point q, std::vector<double>& ts) const;

    /// Grid data for grid and custom models, null otherwise.
    const GridTable* grid_table() const;
    /// Closed-form models declare continuity; grid models return nullopt and are tested.
    std::optional<bool> declared_continuity() const;

    struct Impl;

private:
    explicit DensityModel(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

enum class Direction { a, b, neither };

std::string to_string(Direction d);

struct Violation {
    Point at;
    std::string detail;
    friend bool operator==(const Violation&, const Violation&) = default;
};

struct ConditionReport {
    bool passes = false;
    /// Strict direction of the A-rate F_{A|B}/f_{A|B}.
    Direction strict_direction = Direction::neither;
    /// Strict direction of the B-rate.
    Direction strict_direction_b = Direction::neither;
    bool continuity_ok = false;
    std::vector<Violation> violations;
    /// Sampled rates at ((i+1/2)/res, (j+1/2)/res), stored at i * res + j; NaN below the floor.
    std::size_t resolution = 0;
    std::vector<double> rate_a;
    std::vector<double> rate_b;

    friend bool operator==(const ConditionReport&, const ConditionReport&) = default;
};

ConditionReport check_assumption1(const DensityModel& model, std::size_t resolution);

/// Adjacent-cell jump test for piecewise-constant grids.
bool grid_is_continuous(const GridTable& grid);

struct ValueSample {
    double a = 0.0;
    double b = 0.0;
    double r = 1.0;
};

/// Transformed-type density g with welfare weights lambda (per-cell mean of r).
struct WeightedModel {
    DensityModel gdensity;
    std::size_t n = 0;
    /// weights[i * n + j]; empty cells carry weight 1 and zero density.
    std::vector<double> weights;
    /// Support extent of the transformed types before rescaling (1 / r_min).
    double scale = 1.0;
    std::size_t empty_cells = 0;

    double weight(std::size_t i, std::size_t j) const { return weights[i * n + j]; }
};

/// Histogram of (a, b) samples as a grid model (r ignored).
DensityModel histogram_model(std::span<const ValueSample> samples, std::size_t resolution);

WeightedModel hetero_transform(std::span<const ValueSample> samples, std::size_t resolution);

ConditionReport check_weighted_condition(const WeightedModel& model, std::size_t resolution);

}  // namespace ordeal
