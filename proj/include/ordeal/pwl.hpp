#pragma once

#include <span>
#include <vector>

namespace ordeal {

struct Knot {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Knot&, const Knot&) = default;
};

/// One linear piece [x0, x1] with value y0 at x0.
struct Segment {
    double x0 = 0.0;
    double x1 = 0.0;
    double y0 = 0.0;
    double slope = 0.0;
    double at(double x) const { return y0 + slope * (x - x0); }
};

/// Continuous piecewise-linear function on [x_front, x_back].
class Pwl {
public:
    Pwl() = default;
    /// Knots must have strictly increasing x; at least two knots.
    explicit Pwl(std::vector<Knot> knots);

    double value(double x) const;
    /// Right derivative (left derivative at the right end).
    double slope_right(double x) const;
    /// Left derivative (right derivative at the left end).
    double slope_left(double x) const;

    double x_front() const { return knots_.front().x; }
    double x_back() const { return knots_.back().x; }
    std::span<const Knot> knots() const { return knots_; }
    std::vector<Segment> segments() const;
    std::size_t segment_count() const { return knots_.size() - 1; }
    Segment segment(std::size_t i) const;

    /// Drops interior knots whose neighbouring slopes agree within tol.
    Pwl simplified(double tol = 1e-12) const;

    friend bool operator==(const Pwl&, const Pwl&) = default;

private:
    std::size_t locate(double x) const;
    std::vector<Knot> knots_;
};

/// Convex, non-decreasing, non-negative piecewise-linear function on [0, 1].
/// Indirect utilities U_A and U_B live here.
class PwlConvex {
public:
    PwlConvex() : PwlConvex(std::vector<Knot>{{0.0, 0.0}, {1.0, 0.0}}) {}
    explicit PwlConvex(std::vector<Knot> knots);

    /// Integrates a step profile of slopes: slope[i] holds on [breaks[i], breaks[i+1]].
    /// breaks must start at 0 and end at 1; the value at 0 is `start`.
    static PwlConvex from_slopes(std::span<const double> breaks, std::span<const double> slopes,
                                 double start = 0.0);

    double value(double v) const { return f_.value(v); }
    double operator()(double v) const { return f_.value(v); }
    double slope_right(double v) const { return f_.slope_right(v); }
    double slope_left(double v) const { return f_.slope_left(v); }

    std::span<const Knot> knots() const { return f_.knots(); }
    std::vector<Segment> segments() const { return f_.segments(); }
    const Pwl& function() const { return f_; }

    /// sup{v in [0,1] : U(v) == 0}; 1 when U vanishes identically.
    double zero_end() const;
    /// sup{v in [0,1] : U(v) <= y}.
    double sup_at_most(double y) const;
    /// inf{v in [0,1] : U(v) >= y}; 1 when U(1) < y.
    double inf_at_least(double y) const;

    friend bool operator==(const PwlConvex&, const PwlConvex&) = default;

private:
    Pwl f_;
};

/// Largest absolute difference between two functions on [0,1], checked at the union of knots.
double max_abs_diff(const Pwl& f, const Pwl& g);

}  // namespace ordeal
