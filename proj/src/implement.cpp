#include "ordeal/implement.hpp"

#include <algorithm>
#include <cmath>

#include "ordeal/error.hpp"
#include "ordeal/integrate.hpp"

namespace ordeal {

namespace {

constexpr double kTol = 1e-9;

/// Slopes on [0, a_low], the boundary pieces, and [a_bar, 1], skipping empty pieces.
PwlConvex assemble(const Boundary& z, const std::vector<double>& piece_slopes, double top_slope) {
    std::vector<double> breaks{0.0};
    std::vector<double> slopes;
    if (z.a_low() > 0.0) {
        breaks.push_back(z.a_low());
        slopes.push_back(0.0);
    }
    auto knots = z.knots();
    for (std::size_t i = 1; i < knots.size(); ++i) {
        breaks.push_back(knots[i].a);
        slopes.push_back(piece_slopes[i - 1]);
    }
    if (z.a_bar() < 1.0) {
        breaks.push_back(1.0);
        slopes.push_back(top_slope);
    }
    return PwlConvex::from_slopes(breaks, slopes);
}

std::vector<MenuOption> menu_of(const PwlConvex& u) {
    std::vector<MenuOption> menu;
    for (const auto& seg : u.function().simplified().segments()) {
        if (seg.slope <= 0.0) continue;
        double q = std::min(seg.slope, 1.0);
        double c = std::max(0.0, seg.x0 * seg.slope - seg.y0);
        menu.push_back({q, c});
    }
    if (menu.empty()) menu.push_back({0.0, 0.0});
    return menu;
}

/// Greedy slopes on pieces with boundary slopes s: the largest profile with
/// u <= 1, u/s <= 1, u non-decreasing and u/s non-decreasing, given the top slope 1.
std::vector<double> greedy(const std::vector<double>& s) {
    std::vector<double> u(s.size());
    for (std::size_t k = s.size(); k-- > 0;) {
        double bound = std::min(1.0, s[k]);
        if (k + 1 < s.size()) bound = std::min({bound, u[k + 1], s[k] * u[k + 1] / s[k + 1]});
        u[k] = bound;
    }
    return u;
}

}  // namespace

double StepProfile::at(double x) const {
    auto it = std::upper_bound(breaks.begin(), breaks.end(), x);
    std::size_t i = it == breaks.begin() ? 0 : static_cast<std::size_t>(it - breaks.begin()) - 1;
    return values[std::min(i, values.size() - 1)];
}

StepProfile m_profile(const Boundary& z) {
    StepProfile p;
    for (const auto& k : z.knots()) p.breaks.push_back(k.a);
    auto s = z.slopes();
    double m = 1.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i > 0 && s[i] > s[i - 1]) m *= s[i] / s[i - 1];
        p.values.push_back(m);
    }
    return p;
}

double c_scale(const Boundary& z) {
    if (z.orientation() == Orientation::wall) return c_scale(inverse(z));
    auto m = m_profile(z);
    double m_last = m.values.back();
    double s_last = z.slopes().back();
    return 1.0 / std::max(m_last, m_last / s_last);
}

PwlConvex optimal_UA(const Boundary& z) {
    auto s = z.slopes();
    std::vector<double> piece(s.size());
    if (z.orientation() == Orientation::ceiling) {
        auto m = m_profile(z);
        double c = c_scale(z);
        for (std::size_t i = 0; i < s.size(); ++i) piece[i] = m.values[i] * c;
    } else {
        // Same formula in the (b, a) frame gives U_B'; U_A' = U_B'(z) z'.
        Boundary w = inverse(z);
        auto m = m_profile(w);
        double c = c_scale(w);
        for (std::size_t i = 0; i < s.size(); ++i) piece[i] = std::min(1.0, m.values[i] * c * s[i]);
    }
    return assemble(z, piece, 1.0);
}

PwlConvex ub_from(const Boundary& z, const PwlConvex& ua, UbExtension ext) {
    if (ua.value(z.a_low()) > kTol) throw InfeasibleError("U_A must vanish at a_low");
    auto xs = merged_breaks(z, ua);
    std::vector<Knot> knots;
    if (z.b_low() > 0.0) knots.push_back({0.0, 0.0});
    knots.push_back({z.b_low(), 0.0});
    double prev_ratio = 0.0;
    double last_ratio = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        double mid = 0.5 * (xs[i] + xs[i + 1]);
        double ratio = ua.slope_right(mid) / z.slope_right(mid);
        if (ratio < prev_ratio - kTol * std::max(1.0, ratio)) throw InfeasibleError("U_A'/z' decreases");
        if (ratio > 1.0 + kTol) throw InfeasibleError("U_B' would exceed one");
        prev_ratio = std::max(prev_ratio, ratio);
        last_ratio = std::min(ratio, 1.0);
        double b = z.value(xs[i + 1]);
        if (b > knots.back().x + 1e-12) knots.push_back({b, knots.back().y + last_ratio * (b - knots.back().x)});
    }
    if (z.b_bar() < 1.0) {
        double slope = ext == UbExtension::unit ? 1.0 : std::min(1.0, last_ratio);
        knots.push_back({1.0, knots.back().y + slope * (1.0 - z.b_bar())});
    }
    return PwlConvex(std::move(knots));
}

Mechanism mechanism_from(const Boundary& z, const PwlConvex& ua, UbExtension ext) {
    for (const auto& seg : ua.segments())
        if (seg.slope > 1.0 + kTol) throw InfeasibleError("U_A' exceeds one");
    PwlConvex ub = ub_from(z, ua, ext);
    return Mechanism(menu_of(ua), menu_of(ub));
}

ImplementationBundle implement_boundary(const Boundary& z) {
    PwlConvex ua = optimal_UA(z);
    PwlConvex ub = ub_from(z, ua);
    Mechanism mech(menu_of(ua), menu_of(ub));
    StepProfile m = z.orientation() == Orientation::ceiling ? m_profile(z) : m_profile(inverse(z));
    return {z, ua, ub, mech, m, c_scale(z)};
}

Boundary extract_boundary(const Mechanism& mech) {
    PwlConvex ua = indirect_utility(mech.menu_a());
    PwlConvex ub = indirect_utility(mech.menu_b());
    double a_low = ua.zero_end();
    double b_low = ub.zero_end();
    if (a_low >= 1.0 || b_low >= 1.0) throw DegenerateMechanismError("a good is never chosen");
    double top_a = ua.value(1.0);
    double top_b = ub.value(1.0);
    double a_bar = top_a >= top_b ? ua.inf_at_least(top_b) : 1.0;
    if (!(a_bar > a_low)) throw DegenerateMechanismError("a good is never chosen");

    std::vector<double> as{a_low, a_bar};
    for (const auto& k : ua.knots())
        if (k.x > a_low && k.x < a_bar) as.push_back(k.x);
    for (const auto& k : ub.knots()) {
        if (k.y <= 0.0) continue;
        double a = ua.inf_at_least(k.y);
        if (a > a_low && a < a_bar) as.push_back(a);
    }
    std::sort(as.begin(), as.end());
    std::vector<Point> pts;
    for (double a : as) {
        double b = a == a_low ? b_low : ub.sup_at_most(ua.value(a));
        if (a == a_bar && top_a >= top_b) b = 1.0;
        pts.push_back({a, b});
    }
    // Merge near-coincident knots, keeping both ends.
    std::vector<Point> kept{pts.front()};
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const Point& p = pts[i];
        bool last = i + 1 == pts.size();
        double gap = std::hypot(p.a - kept.back().a, p.b - kept.back().b);
        if (gap >= kMinKnotSpacing) {
            kept.push_back(p);
        } else if (last) {
            if (kept.size() > 1) kept.back() = p;
            else kept.push_back(p);
        }
    }
    // Drop collinear interior knots.
    std::vector<Point> out{kept.front()};
    for (std::size_t i = 1; i + 1 < kept.size(); ++i) {
        const Point& p = out.back();
        const Point& q = kept[i];
        const Point& r = kept[i + 1];
        double s1 = (q.b - p.b) / (q.a - p.a);
        double s2 = (r.b - q.b) / (r.a - q.a);
        if (std::abs(s1 - s2) > 1e-9 * std::max(1.0, std::abs(s1))) out.push_back(q);
    }
    out.push_back(kept.back());
    return Boundary(std::move(out));
}

double wstar_welfare(const Boundary& z, const PwlConvex& ua, const DensityModel& model) {
    if (ua.value(1.0) <= 0.0) return 0.0;
    if (z.orientation() == Orientation::ceiling) {
        std::vector<PathPoint> path;
        for (const auto& p : z.knots()) path.push_back({p.a, p.a, p.b});
        if (z.a_bar() < 1.0) path.push_back({1.0, 1.0, 1.0});
        std::vector<double> breaks;
        for (const auto& k : ua.knots()) breaks.push_back(k.x);
        double loss = integrate_along(model, path, breaks, [&](double s, double a, double b) {
            return ua.slope_right(s) * model.cdf(a, b);
        });
        return ua.value(1.0) - loss;
    }
    PwlConvex ub = ub_from(z, ua);
    std::vector<PathPoint> path;
    for (const auto& p : z.knots()) path.push_back({p.b, p.a, p.b});
    path.push_back({1.0, 1.0, 1.0});
    std::vector<double> breaks;
    for (const auto& k : ub.knots()) breaks.push_back(k.x);
    double loss = integrate_along(model, path, breaks, [&](double s, double a, double b) {
        return ub.slope_right(s) * model.cdf(a, b);
    });
    return ub.value(1.0) - loss;
}

BruteForceResult brute_force_best_UA(const Boundary& z, const DensityModel& model, int grid) {
    if (grid < 16) throw ParameterError("grid must be at least 16");
    bool wall = z.orientation() == Orientation::wall;
    Boundary w = wall ? inverse(z) : z;  // ceiling frame: (x, y) = (a, b) or (b, a)

    std::vector<double> xs;
    for (const auto& k : w.knots()) xs.push_back(k.a);
    double lo = w.a_low();
    double hi = w.a_bar();
    for (int i = 1; i < grid; ++i) xs.push_back(lo + (hi - lo) * i / grid);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end(), [](double p, double q) { return q - p <= 1e-12; }), xs.end());

    std::vector<double> s;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) s.push_back(w.slope_right(0.5 * (xs[i] + xs[i + 1])));
    std::vector<double> u = greedy(s);

    // Objective weights: integral of 1 - F along the boundary in the chosen frame.
    double welfare = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        Point p = wall ? Point{w.value(xs[i]), xs[i]} : Point{xs[i], w.value(xs[i])};
        Point q = wall ? Point{w.value(xs[i + 1]), xs[i + 1]} : Point{xs[i + 1], w.value(xs[i + 1])};
        std::vector<PathPoint> path{{xs[i], p.a, p.b}, {xs[i + 1], q.a, q.b}};
        double weight = integrate_along(model, path, {}, [&](double, double a, double b) {
            return 1.0 - model.cdf(a, b);
        });
        welfare += u[i] * weight;
    }
    if (hi < 1.0) {
        std::vector<PathPoint> path;
        if (wall) path = {{hi, 1.0, hi}, {1.0, 1.0, 1.0}};
        else path = {{hi, hi, 1.0}, {1.0, 1.0, 1.0}};
        welfare += integrate_along(model, path, {}, [&](double, double a, double b) { return 1.0 - model.cdf(a, b); });
    }

    // Slopes in the original a-frame.
    std::vector<double> breaks{0.0};
    std::vector<double> slopes;
    if (z.a_low() > 0.0) {
        breaks.push_back(z.a_low());
        slopes.push_back(0.0);
    }
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        double x1 = wall ? w.value(xs[i + 1]) : xs[i + 1];
        if (i + 2 == xs.size()) x1 = z.a_bar();
        breaks.push_back(x1);
        slopes.push_back(wall ? std::min(1.0, u[i] / s[i]) : u[i]);
    }
    if (z.a_bar() < 1.0) {
        breaks.push_back(1.0);
        slopes.push_back(1.0);
    }
    return {PwlConvex::from_slopes(breaks, slopes), welfare};
}

}  // namespace ordeal
