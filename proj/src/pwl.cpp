#include "ordeal/pwl.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ordeal/error.hpp"

namespace ordeal {

namespace {
constexpr double kZeroUtility = 1e-14;
constexpr double kDomainSlack = 1e-12;
}  // namespace

Pwl::Pwl(std::vector<Knot> knots) : knots_(std::move(knots)) {
    if (knots_.size() < 2) throw ParameterError("piecewise-linear function needs at least two knots");
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        if (!(knots_[i].x > knots_[i - 1].x))
            throw ParameterError("knot abscissae must be strictly increasing (index " +
                                 std::to_string(i) + ")");
    }
    for (const auto& k : knots_)
        if (!std::isfinite(k.x) || !std::isfinite(k.y)) throw ParameterError("non-finite knot");
}

std::size_t Pwl::locate(double x) const {
    if (x < x_front() - kDomainSlack || x > x_back() + kDomainSlack)
        throw DomainError("abscissa " + std::to_string(x) + " outside [" + std::to_string(x_front()) +
                          ", " + std::to_string(x_back()) + "]");
    auto it = std::upper_bound(knots_.begin(), knots_.end(), x,
                               [](double v, const Knot& k) { return v < k.x; });
    std::size_t i = it == knots_.begin() ? 0 : static_cast<std::size_t>(it - knots_.begin()) - 1;
    return std::min(i, knots_.size() - 2);
}

Segment Pwl::segment(std::size_t i) const {
    const Knot& p = knots_[i];
    const Knot& q = knots_[i + 1];
    return {p.x, q.x, p.y, (q.y - p.y) / (q.x - p.x)};
}

double Pwl::value(double x) const {
    std::size_t i = locate(x);
    const Knot& p = knots_[i];
    const Knot& q = knots_[i + 1];
    if (x <= p.x) return p.y;
    if (x >= q.x) return q.y;
    double t = (x - p.x) / (q.x - p.x);
    return p.y + t * (q.y - p.y);
}

double Pwl::slope_right(double x) const {
    std::size_t i = locate(x);
    if (i + 2 < knots_.size() && x >= knots_[i + 1].x) ++i;
    return segment(i).slope;
}

double Pwl::slope_left(double x) const {
    std::size_t i = locate(x);
    if (i > 0 && x <= knots_[i].x) --i;
    return segment(i).slope;
}

std::vector<Segment> Pwl::segments() const {
    std::vector<Segment> out;
    out.reserve(segment_count());
    for (std::size_t i = 0; i < segment_count(); ++i) out.push_back(segment(i));
    return out;
}

Pwl Pwl::simplified(double tol) const {
    std::vector<Knot> out{knots_.front()};
    for (std::size_t i = 1; i + 1 < knots_.size(); ++i) {
        const Knot& p = out.back();
        const Knot& k = knots_[i];
        const Knot& q = knots_[i + 1];
        double s1 = (k.y - p.y) / (k.x - p.x);
        double s2 = (q.y - k.y) / (q.x - k.x);
        if (std::abs(s1 - s2) > tol * std::max(1.0, std::max(std::abs(s1), std::abs(s2))))
            out.push_back(k);
    }
    out.push_back(knots_.back());
    return Pwl(std::move(out));
}

PwlConvex::PwlConvex(std::vector<Knot> knots) : f_(std::move(knots)) {
    if (std::abs(f_.x_front()) > kDomainSlack || std::abs(f_.x_back() - 1.0) > kDomainSlack)
        throw ParameterError("convex utility must be defined on [0, 1]");
    double prev = -1e-12;
    for (const auto& s : f_.segments()) {
        double tol = 1e-9 * std::max(1.0, std::abs(s.slope));
        if (s.slope < prev - tol) throw ParameterError("utility slopes must be non-decreasing");
        if (s.slope < -1e-12) throw ParameterError("utility must be non-decreasing");
        prev = std::max(prev, s.slope);
    }
    for (const auto& k : f_.knots())
        if (k.y < -1e-12) throw ParameterError("utility must be non-negative");
}

PwlConvex PwlConvex::from_slopes(std::span<const double> breaks, std::span<const double> slopes,
                                 double start) {
    if (breaks.size() != slopes.size() + 1) throw ParameterError("breaks/slopes size mismatch");
    std::vector<Knot> knots;
    knots.reserve(breaks.size());
    double y = start;
    knots.push_back({breaks[0], y});
    for (std::size_t i = 0; i < slopes.size(); ++i) {
        y += slopes[i] * (breaks[i + 1] - breaks[i]);
        knots.push_back({breaks[i + 1], y});
    }
    return PwlConvex(std::move(knots));
}

double PwlConvex::zero_end() const {
    double end = 0.0;
    for (const auto& k : f_.knots()) {
        if (k.y > kZeroUtility) break;
        end = k.x;
    }
    return end;
}

double PwlConvex::sup_at_most(double y) const {
    auto ks = f_.knots();
    if (y >= ks.back().y) return 1.0;
    if (y < ks.front().y) return 0.0;
    // Non-decreasing: the last knot with value <= y, then interpolate inside the next piece.
    std::size_t i = 0;
    while (i + 1 < ks.size() && ks[i + 1].y <= y) ++i;
    const Knot& p = ks[i];
    const Knot& q = ks[i + 1];
    if (q.y <= p.y) return q.x;
    return std::clamp(p.x + (y - p.y) * (q.x - p.x) / (q.y - p.y), p.x, q.x);
}

double PwlConvex::inf_at_least(double y) const {
    auto ks = f_.knots();
    if (y <= ks.front().y) return 0.0;
    if (y > ks.back().y) return 1.0;
    std::size_t i = 0;
    while (i + 1 < ks.size() && ks[i + 1].y < y) ++i;
    const Knot& p = ks[i];
    const Knot& q = ks[i + 1];
    if (q.y <= p.y) return p.x;
    return std::clamp(p.x + (y - p.y) * (q.x - p.x) / (q.y - p.y), p.x, q.x);
}

double max_abs_diff(const Pwl& f, const Pwl& g) {
    std::vector<double> xs;
    for (const auto& k : f.knots()) xs.push_back(k.x);
    for (const auto& k : g.knots()) xs.push_back(k.x);
    double lo = std::max(f.x_front(), g.x_front());
    double hi = std::min(f.x_back(), g.x_back());
    double worst = 0.0;
    for (double x : xs) {
        if (x < lo || x > hi) continue;
        worst = std::max(worst, std::abs(f.value(x) - g.value(x)));
    }
    return worst;
}

}  // namespace ordeal
