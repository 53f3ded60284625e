#pragma once

#include <span>
#include <vector>

#include "ordeal/density.hpp"
#include "ordeal/pwl.hpp"

namespace ordeal {

/// Which side of the unit square the sorting curve reaches: b = 1 or a = 1.
/// A curve ending in the corner (1, 1) counts as ceiling.
enum class Orientation { ceiling, wall };

inline constexpr double kMinKnotSpacing = 1e-6;
inline constexpr double kMinSlope = 1e-6;
inline constexpr double kMaxSlope = 1e6;

/// Strictly increasing piecewise-linear sorting curve z from the lowest participating
/// values (a_low, b_low) to the top or right edge of the unit square.
class Boundary {
public:
    explicit Boundary(std::vector<Point> knots);

    /// Straight line of the given slope from `start` to the first edge it meets.
    static Boundary linear(Point start, double slope);

    std::span<const Point> knots() const { return knots_; }
    double a_low() const { return knots_.front().a; }
    double b_low() const { return knots_.front().b; }
    double a_bar() const { return knots_.back().a; }
    double b_bar() const { return knots_.back().b; }
    Orientation orientation() const;

    /// z(a) for a in [a_low, a_bar].
    double value(double a) const;
    /// z^{-1}(b) for b in [b_low, b_bar].
    double inverse_value(double b) const;
    std::vector<double> slopes() const;
    double slope_left(double a) const { return curve_.slope_left(a); }
    double slope_right(double a) const { return curve_.slope_right(a); }
    const Pwl& curve() const { return curve_; }

    friend bool operator==(const Boundary& x, const Boundary& y) { return x.knots_ == y.knots_; }

private:
    std::vector<Point> knots_;
    Pwl curve_;
};

/// z extended by 0 below a_low and 1 above a_bar.
double extended(const Boundary& z, double a);
/// The same extension of z^{-1}.
double extended_inverse(const Boundary& z, double b);

/// Coordinates swapped; an involution.
Boundary inverse(const Boundary& z);

struct SupplyMasses {
    double below = 0.0;  ///< types taking A
    double above = 0.0;  ///< types taking B
    double excluded = 0.0;
};

SupplyMasses supply_masses(const Boundary& z, const DensityModel& model);

struct FeasibilityReport {
    bool feasible = false;
    /// U_A' non-decreasing and at most 1; U_A vanishes exactly up to a_low.
    bool ua_monotone = false;
    /// U_A'/z' non-decreasing and at most 1 on [a_low, a_bar].
    bool ratio_monotone = false;
    bool slopes_ok = false;
    bool supply_ok = false;
    double slack_a = 0.0;
    double slack_b = 0.0;
};

FeasibilityReport check_feasible_pair(const Boundary& z, const PwlConvex& ua, const DensityModel& model,
                                      double mu_a, double mu_b);

/// Breakpoints in [a_low, a_bar] where z or ua changes slope, sorted.
std::vector<double> merged_breaks(const Boundary& z, const PwlConvex& ua);

}  // namespace ordeal
