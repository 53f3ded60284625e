#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "ordeal/boundary.hpp"
#include "ordeal/density.hpp"
#include "ordeal/mechanism.hpp"
#include "ordeal/pwl.hpp"

namespace gen {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
inline int integer(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline std::vector<ordeal::MenuOption> menu(Rng& rng, int max_options = 4) {
    std::vector<ordeal::MenuOption> out;
    int n = integer(rng, 1, max_options);
    for (int i = 0; i < n; ++i) out.push_back({uniform(rng, 0.05, 1.0), uniform(rng, 0.0, 0.8)});
    return out;
}

inline ordeal::Mechanism mechanism(Rng& rng, int max_options = 4) {
    return ordeal::Mechanism(menu(rng, max_options), menu(rng, max_options));
}

/// Smooth strictly positive density exp(polynomial) sampled at cell centres.
inline ordeal::DensityModel grid_model(Rng& rng, std::size_t n = 200) {
    double c[6];
    for (double& x : c) x = uniform(rng, -1.5, 1.5);
    std::vector<double> cells(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double a = (i + 0.5) / n;
            double b = (j + 0.5) / n;
            cells[i * n + j] = std::exp(c[0] * a + c[1] * b + c[2] * a * b + c[3] * a * a + c[4] * b * b +
                                        c[5] * std::sin(3.0 * a));
        }
    return ordeal::DensityModel::grid(n, std::move(cells));
}

/// Piecewise-linear boundary with at most max_knots knots.
inline ordeal::Boundary boundary(Rng& rng, int max_knots = 6) {
    for (;;) {
        ordeal::Point p{uniform(rng, 0.05, 0.7), uniform(rng, 0.05, 0.7)};
        std::vector<ordeal::Point> pts{p};
        int pieces = integer(rng, 1, max_knots - 1);
        for (int k = 0; k < pieces; ++k) {
            double s = std::exp(uniform(rng, std::log(0.3), std::log(3.0)));
            ordeal::Point last = pts.back();
            double to_edge = std::min(1.0 - last.a, (1.0 - last.b) / s);
            double step = k + 1 == pieces ? to_edge : to_edge * uniform(rng, 0.15, 0.6);
            ordeal::Point q{last.a + step, last.b + s * step};
            if (k + 1 == pieces) {
                if (1.0 - last.a <= (1.0 - last.b) / s) q = {1.0, last.b + s * (1.0 - last.a)};
                else q = {last.a + (1.0 - last.b) / s, 1.0};
            }
            pts.push_back(q);
        }
        try {
            return ordeal::Boundary(pts);
        } catch (const std::exception&) {
        }
    }
}

/// Random U_A feasible for z: slopes below the greedy maximum, monotone with monotone ratio.
inline ordeal::PwlConvex feasible_ua(Rng& rng, const ordeal::Boundary& z) {
    std::vector<double> xs;
    for (const auto& k : z.knots()) xs.push_back(k.a);
    std::size_t segs = xs.size() - 1;
    for (std::size_t i = 0; i < segs; ++i)
        if (uniform(rng, 0.0, 1.0) < 0.5) xs.push_back(xs[i] + (xs[i + 1] - xs[i]) * uniform(rng, 0.2, 0.8));
    std::sort(xs.begin(), xs.end());
    std::vector<double> s;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) s.push_back(z.slope_right(0.5 * (xs[i] + xs[i + 1])));
    std::vector<double> ub(s.size());
    for (std::size_t k = s.size(); k-- > 0;) {
        ub[k] = std::min(1.0, s[k]);
        if (k + 1 < s.size()) ub[k] = std::min({ub[k], ub[k + 1], s[k] * ub[k + 1] / s[k + 1]});
    }
    std::vector<double> u(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        double lower = i == 0 ? 0.0 : std::max(u[i - 1], s[i] * u[i - 1] / s[i - 1]);
        double t = i == 0 ? uniform(rng, 0.05, 1.0) : uniform(rng, 0.0, 1.0);
        u[i] = std::min(ub[i], lower + t * (ub[i] - lower));
    }
    std::vector<double> breaks{0.0};
    std::vector<double> slopes;
    if (z.a_low() > 0.0) {
        breaks.push_back(z.a_low());
        slopes.push_back(0.0);
    }
    for (std::size_t i = 1; i < xs.size(); ++i) {
        breaks.push_back(xs[i]);
        slopes.push_back(u[i - 1]);
    }
    if (z.a_bar() < 1.0) {
        breaks.push_back(1.0);
        slopes.push_back(uniform(rng, u.back(), 1.0));
    }
    return ordeal::PwlConvex::from_slopes(breaks, slopes);
}

}  // namespace gen
