#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ordeal/density.hpp"

namespace ordeal {

/// Vertex of a polyline in the unit square together with the integration variable s.
struct PathPoint {
    double s = 0.0;
    double a = 0.0;
    double b = 0.0;
};

/// Integrates g(s, a, b) ds along a polyline whose s-coordinate is non-decreasing.
///
/// Each polyline segment is split where it crosses a model feature line and at every
/// `extra_breaks` value of s; on the resulting pieces the integrands used in this library
/// are polynomials of degree <= 3, so three-point Gauss-Legendre is exact. The rule
/// never evaluates at piece endpoints, so one-sided values at cell edges are respected.
double integrate_along(const DensityModel& model, std::span<const PathPoint> path,
                       std::span<const double> extra_breaks,
                       const std::function<double(double s, double a, double b)>& g);

/// Polyline b = curve(a) sampled at the knots of a piecewise-linear curve.
std::vector<PathPoint> path_over_a(std::span<const double> as, std::span<const double> bs);
/// Polyline a = curve(b), parameterized by b.
std::vector<PathPoint> path_over_b(std::span<const double> as, std::span<const double> bs);

}  // namespace ordeal
