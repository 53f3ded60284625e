#include "ordeal/market.hpp"

#include <algorithm>
#include <cmath>

#include "ordeal/error.hpp"

namespace ordeal {

namespace {

constexpr int kMaxIterations = 200;
constexpr double kWidth = 1e-14;

void validate_supplies(double mu_a, double mu_b) {
    if (!(mu_a > 0.0 && mu_a <= 1.0)) throw ParameterError("mu_a must lie in (0, 1]");
    if (!(mu_b > 0.0 && mu_b <= 1.0)) throw ParameterError("mu_b must lie in (0, 1]");
    if (mu_a + mu_b > 1.0 + 1e-12) throw ParameterError("mu_a + mu_b must not exceed 1");
}

/// Smallest t in [0,1] with h(t) <= target for a non-increasing h; 0 when h(0) <= target.
double solve_decreasing(const std::function<double(double)>& h, double target, double tol, int& iters) {
    if (h(0.0) <= target) return 0.0;
    double lo = 0.0;
    double hi = 1.0;
    for (int i = 0; i < kMaxIterations && hi - lo > kWidth; ++i) {
        ++iters;
        double mid = 0.5 * (lo + hi);
        double v = h(mid);
        if (std::abs(v - target) <= tol * 1e-3) return mid;
        (v > target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

ClearingResult nested_bisection(const std::function<Demand(double, double)>& masses, double mu_a, double mu_b,
                                double tol) {
    if (!(tol > 0.0)) throw ParameterError("tol must be positive");
    ClearingResult r;
    int inner_iters = 0;
    auto inner = [&](double x) {
        return solve_decreasing([&](double y) { return masses(x, y).mass_b; }, mu_b, tol, inner_iters);
    };
    double x = solve_decreasing([&](double t) { return masses(t, inner(t)).mass_a; }, mu_a, tol, r.iterations);
    double y = inner(x);
    r.c_a = x;
    r.c_b = y;
    r.demand = masses(x, y);
    double res_a = std::abs(r.demand.mass_a - mu_a);
    double res_b = std::abs(r.demand.mass_b - mu_b);
    if (x == 0.0 && r.demand.mass_a <= mu_a) {
        r.slack_a = mu_a - r.demand.mass_a;
        res_a = 0.0;
    }
    if (y == 0.0 && r.demand.mass_b <= mu_b) {
        r.slack_b = mu_b - r.demand.mass_b;
        res_b = 0.0;
    }
    r.residual = std::max(res_a, res_b);
    if (r.residual > tol) throw ConvergenceError("market clearing did not converge");
    return r;
}

ClearingResult market_clearing_ordeals(const DensityModel& model, double mu_a, double mu_b, double tol) {
    validate_supplies(mu_a, mu_b);
    return nested_bisection(
        [&](double x, double y) { return demand(Mechanism::posted(x, y), model); }, mu_a, mu_b, tol);
}

Mechanism theorem1_mechanism(const DensityModel& model, double mu_a, double mu_b) {
    auto r = market_clearing_ordeals(model, mu_a, mu_b, 1e-6);
    if (r.residual > 1e-4) throw ConvergenceError("supply not fully allocated");
    return Mechanism::posted(r.c_a, r.c_b);
}

}  // namespace ordeal
