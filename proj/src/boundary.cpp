#include "ordeal/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ordeal/error.hpp"
#include "ordeal/integrate.hpp"

namespace ordeal {

namespace {

constexpr double kEdge = 1e-12;
constexpr double kMonotoneTol = 1e-9;

std::vector<Knot> as_knots(const std::vector<Point>& pts) {
    std::vector<Knot> out;
    out.reserve(pts.size());
    for (const auto& p : pts) out.push_back({p.a, p.b});
    return out;
}

std::vector<Point> validated(std::vector<Point> knots) {
    if (knots.size() < 2) throw ParameterError("boundary needs at least two knots");
    for (auto& p : knots) {
        if (!(p.a >= -kEdge && p.a <= 1.0 + kEdge && p.b >= -kEdge && p.b <= 1.0 + kEdge))
            throw ParameterError("boundary knot outside the unit square");
        p.a = std::clamp(p.a, 0.0, 1.0);
        p.b = std::clamp(p.b, 0.0, 1.0);
    }
    Point& last = knots.back();
    if (last.a >= 1.0 - 1e-12) last.a = 1.0;
    if (last.b >= 1.0 - 1e-12) last.b = 1.0;
    if (last.a != 1.0 && last.b != 1.0) throw ParameterError("boundary must end on a = 1 or b = 1");
    for (std::size_t i = 1; i < knots.size(); ++i) {
        double da = knots[i].a - knots[i - 1].a;
        double db = knots[i].b - knots[i - 1].b;
        if (!(da > 0.0 && db > 0.0))
            throw ParameterError("boundary must be strictly increasing (knot " + std::to_string(i) + ")");
        if (std::hypot(da, db) < kMinKnotSpacing)
            throw ParameterError("boundary knots closer than the minimum spacing");
        double s = db / da;
        if (s < kMinSlope || s > kMaxSlope) throw ParameterError("boundary slope outside [1e-6, 1e6]");
        if (i + 1 < knots.size() && (knots[i].a >= 1.0 || knots[i].b >= 1.0))
            throw ParameterError("interior boundary knot on the edge of the square");
    }
    return knots;
}

}  // namespace

Boundary::Boundary(std::vector<Point> knots) : knots_(validated(std::move(knots))), curve_(as_knots(knots_)) {}

Boundary Boundary::linear(Point start, double slope) {
    if (!(slope > 0.0)) throw ParameterError("slope must be positive");
    if (!(start.a < 1.0 && start.b < 1.0)) throw ParameterError("line must start inside the square");
    double to_ceiling = (1.0 - start.b) / slope;
    Point end = start.a + to_ceiling <= 1.0 ? Point{start.a + to_ceiling, 1.0}
                                            : Point{1.0, start.b + slope * (1.0 - start.a)};
    return Boundary({start, end});
}

Orientation Boundary::orientation() const { return b_bar() == 1.0 ? Orientation::ceiling : Orientation::wall; }

double Boundary::value(double a) const { return curve_.value(a); }

double Boundary::inverse_value(double b) const {
    if (b <= b_low()) return a_low();
    if (b >= b_bar()) return a_bar();
    auto it = std::lower_bound(knots_.begin(), knots_.end(), b, [](const Point& p, double v) { return p.b < v; });
    const Point& q = *it;
    const Point& p = *(it - 1);
    return p.a + (b - p.b) * (q.a - p.a) / (q.b - p.b);
}

std::vector<double> Boundary::slopes() const {
    std::vector<double> out;
    for (std::size_t i = 1; i < knots_.size(); ++i)
        out.push_back((knots_[i].b - knots_[i - 1].b) / (knots_[i].a - knots_[i - 1].a));
    return out;
}

double extended(const Boundary& z, double a) {
    if (a < z.a_low()) return 0.0;
    if (a > z.a_bar()) return 1.0;
    return z.value(a);
}

double extended_inverse(const Boundary& z, double b) {
    if (b < z.b_low()) return 0.0;
    if (b > z.b_bar()) return 1.0;
    return z.inverse_value(b);
}

Boundary inverse(const Boundary& z) {
    std::vector<Point> pts;
    for (const auto& p : z.knots()) pts.push_back({p.b, p.a});
    return Boundary(std::move(pts));
}

SupplyMasses supply_masses(const Boundary& z, const DensityModel& model) {
    std::vector<PathPoint> below_path;
    for (const auto& p : z.knots()) below_path.push_back({p.a, p.a, p.b});
    if (z.a_bar() < 1.0) below_path.push_back({1.0, 1.0, 1.0});
    std::vector<PathPoint> above_path;
    for (const auto& p : z.knots()) above_path.push_back({p.b, p.a, p.b});
    if (z.b_bar() < 1.0) above_path.push_back({1.0, 1.0, 1.0});
    SupplyMasses out;
    out.below = integrate_along(model, below_path, {}, [&](double, double a, double b) {
        return model.partial_mass_b(a, b);
    });
    out.above = integrate_along(model, above_path, {}, [&](double, double a, double b) {
        return model.partial_mass_a(a, b);
    });
    out.excluded = model.cdf(z.a_low(), z.b_low());
    return out;
}

std::vector<double> merged_breaks(const Boundary& z, const PwlConvex& ua) {
    std::vector<double> xs;
    for (const auto& p : z.knots()) xs.push_back(p.a);
    for (const auto& k : ua.knots())
        if (k.x > z.a_low() && k.x < z.a_bar()) xs.push_back(k.x);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end(), [](double p, double q) { return q - p <= 1e-10; }), xs.end());
    if (xs.back() != z.a_bar()) xs.back() = z.a_bar();
    return xs;
}

FeasibilityReport check_feasible_pair(const Boundary& z, const PwlConvex& ua, const DensityModel& model,
                                      double mu_a, double mu_b) {
    FeasibilityReport r;
    // Condition 1a: convex utility with qualities at most one, participating exactly above a_low.
    r.ua_monotone = true;
    double prev = 0.0;
    for (const auto& seg : ua.segments()) {
        double tol = kMonotoneTol * std::max(1.0, std::abs(seg.slope));
        if (seg.slope < prev - tol || seg.slope > 1.0 + kMonotoneTol) r.ua_monotone = false;
        prev = std::max(prev, seg.slope);
    }
    if (ua.value(z.a_low()) > kMonotoneTol) r.ua_monotone = false;
    if (z.a_low() < 1.0 && !(ua.slope_right(z.a_low()) > 0.0)) r.ua_monotone = false;

    // Condition 1b: U_A'/z' non-decreasing (U_B convex), with U_B' at most one.
    r.ratio_monotone = true;
    auto xs = merged_breaks(z, ua);
    double prev_ratio = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        double mid = 0.5 * (xs[i] + xs[i + 1]);
        double ratio = ua.slope_right(mid) / z.slope_right(mid);
        double tol = kMonotoneTol * std::max(1.0, ratio);
        if (ratio < prev_ratio - tol || ratio > 1.0 + kMonotoneTol) r.ratio_monotone = false;
        prev_ratio = std::max(prev_ratio, ratio);
    }

    r.slopes_ok = true;
    for (double s : z.slopes())
        if (!(s >= kMinSlope && s <= kMaxSlope && std::isfinite(s))) r.slopes_ok = false;

    auto masses = supply_masses(z, model);
    r.slack_a = mu_a - masses.below;
    r.slack_b = mu_b - masses.above;
    r.supply_ok = r.slack_a >= -kMonotoneTol && r.slack_b >= -kMonotoneTol;
    r.feasible = r.ua_monotone && r.ratio_monotone && r.slopes_ok && r.supply_ok;
    return r;
}

}  // namespace ordeal
