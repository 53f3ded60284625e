#pragma once

#include <vector>

#include "ordeal/boundary.hpp"
#include "ordeal/density.hpp"
#include "ordeal/mechanism.hpp"
#include "ordeal/pwl.hpp"

namespace ordeal {

/// Right-continuous step function: values[i] on [breaks[i], breaks[i+1]).
struct StepProfile {
    std::vector<double> breaks;
    std::vector<double> values;
    double at(double x) const;
};

/// How U_B continues above b_bar when the boundary ends on the wall a = 1.
enum class UbExtension {
    unit,        ///< slope 1, the point-wise best choice
    last_slope,  ///< last interior slope, capped at 1
};

struct ImplementationBundle {
    Boundary boundary;
    PwlConvex ua;
    PwlConvex ub;
    Mechanism mech;
    StepProfile m_profile;
    double c_scale = 1.0;
};

/// Product of the upward slope jumps of z, one value per boundary piece.
StepProfile m_profile(const Boundary& z);

/// The welfare-maximizing U_A among those implementing z.
PwlConvex optimal_UA(const Boundary& z);
/// The constant c scaling m into U_A' (computed in the swapped frame for wall boundaries).
double c_scale(const Boundary& z);

/// U_B with U_B(z(a)) = U_A(a); throws InfeasibleError when U_A'/z' is not non-decreasing
/// or exceeds one, or when U_A does not vanish at a_low.
PwlConvex ub_from(const Boundary& z, const PwlConvex& ua, UbExtension ext = UbExtension::unit);

/// Menus whose indirect utilities are ua and ub_from(z, ua).
Mechanism mechanism_from(const Boundary& z, const PwlConvex& ua, UbExtension ext = UbExtension::unit);

ImplementationBundle implement_boundary(const Boundary& z);

/// Sorting curve of a mechanism; throws DegenerateMechanismError when one good is never chosen.
Boundary extract_boundary(const Mechanism& mech);

/// Welfare written as a functional of the boundary and U_A.
double wstar_welfare(const Boundary& z, const PwlConvex& ua, const DensityModel& model);

struct BruteForceResult {
    PwlConvex ua;
    double welfare = 0.0;
};

/// Test oracle: best slope profile on a refined grid by backward greedy ascent.
BruteForceResult brute_force_best_UA(const Boundary& z, const DensityModel& model, int grid);

}  // namespace ordeal
