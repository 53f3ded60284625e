#pragma once

#include <functional>

#include "ordeal/density.hpp"
#include "ordeal/mechanism.hpp"

namespace ordeal {

struct ClearingResult {
    double c_a = 0.0;
    double c_b = 0.0;
    Demand demand;
    int iterations = 0;
    /// Largest |demand - supply| over goods whose constraint binds.
    double residual = 0.0;
    /// Supply left over at zero ordeal (0 when the constraint binds).
    double slack_a = 0.0;
    double slack_b = 0.0;
};

/// Solves masses(x, y) = (mu_a, mu_b) over [0,1]^2 where the first mass falls in x and the
/// second falls in y (gross substitutes). Components that cannot bind stay at 0.
ClearingResult nested_bisection(const std::function<Demand(double x, double y)>& masses, double mu_a,
                                double mu_b, double tol);

ClearingResult market_clearing_ordeals(const DensityModel& model, double mu_a, double mu_b, double tol = 1e-6);

Mechanism theorem1_mechanism(const DensityModel& model, double mu_a, double mu_b);

}  // namespace ordeal
