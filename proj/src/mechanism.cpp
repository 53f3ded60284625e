#include "ordeal/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ordeal/error.hpp"
#include "ordeal/integrate.hpp"

namespace ordeal {

namespace {

constexpr double kTie = 1e-12;

void validate_option(const MenuOption& o) {
    if (!std::isfinite(o.quality) || o.quality < 0.0 || o.quality > 1.0)
        throw ParameterError("menu quality must lie in [0, 1]");
    if (!std::isfinite(o.ordeal) || o.ordeal < 0.0) throw ParameterError("menu ordeal must be >= 0");
}

std::vector<double> sorted_unique(std::vector<double> xs, double lo, double hi) {
    std::vector<double> out;
    for (double x : xs)
        if (x >= lo && x <= hi) out.push_back(x);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(), [](double p, double q) { return q - p <= 1e-15; }),
              out.end());
    return out;
}

// The choice-region curve on one side: for the A side, the path (a, beta(a)) with
// beta(a) = sup{b : U_B(b) <= U_A(a)} on [a_low, 1]; the B side swaps roles using
// alpha(b) = inf{a : U_A(a) >= U_B(b)}.
std::vector<PathPoint> side_path(const PwlConvex& own, const PwlConvex& other, bool a_side) {
    double low = own.zero_end();
    if (low >= 1.0) return {};
    std::vector<double> xs{low, 1.0};
    for (const auto& k : own.knots()) xs.push_back(k.x);
    for (const auto& k : other.knots())
        if (k.y > 0.0) xs.push_back(own.sup_at_most(k.y));
    xs.push_back(own.sup_at_most(other.value(1.0)));
    xs = sorted_unique(std::move(xs), low, 1.0);
    std::vector<PathPoint> path;
    path.reserve(xs.size());
    for (double x : xs) {
        double u = own.value(x);
        double y = a_side ? other.sup_at_most(u) : u > 0.0 ? other.inf_at_least(u) : other.zero_end();
        if (a_side)
            path.push_back({x, x, y});
        else
            path.push_back({x, y, x});
    }
    return path;
}

std::vector<double> knot_xs(const PwlConvex& u) {
    std::vector<double> xs;
    for (const auto& k : u.knots()) xs.push_back(k.x);
    return xs;
}

template <class F>
double side_integral(const DensityModel& model, const PwlConvex& own, const PwlConvex& other, bool a_side,
                     F weight) {
    auto path = side_path(own, other, a_side);
    if (path.size() < 2) return 0.0;
    auto breaks = knot_xs(own);
    return integrate_along(model, path, breaks, [&](double s, double a, double b) {
        double mass = a_side ? model.partial_mass_b(a, b) : model.partial_mass_a(a, b);
        return weight(s) * mass;
    });
}

}  // namespace

std::vector<MenuOption> canonical_menu(std::vector<MenuOption> menu) {
    for (const auto& o : menu) validate_option(o);
    std::vector<MenuOption> out;
    for (std::size_t j = 0; j < menu.size(); ++j) {
        bool dominated = false;
        for (std::size_t i = 0; i < menu.size() && !dominated; ++i) {
            if (i == j) continue;
            const auto& p = menu[i];
            const auto& q = menu[j];
            bool weakly = p.quality >= q.quality && p.ordeal <= q.ordeal;
            bool identical = p == q;
            // Among duplicates keep the first occurrence.
            dominated = weakly && (!identical || i < j);
        }
        if (!dominated) out.push_back(menu[j]);
    }
    std::sort(out.begin(), out.end(), [](const MenuOption& p, const MenuOption& q) {
        return p.quality != q.quality ? p.quality < q.quality : p.ordeal < q.ordeal;
    });
    return out;
}

Mechanism::Mechanism(std::vector<MenuOption> menu_a, std::vector<MenuOption> menu_b)
    : menu_a_(canonical_menu(std::move(menu_a))), menu_b_(canonical_menu(std::move(menu_b))) {
    if (menu_a_.empty() || menu_b_.empty()) throw ParameterError("each menu needs at least one option");
}

BestOption best_option(std::span<const MenuOption> menu, double value) {
    if (menu.empty()) throw ParameterError("best_option on an empty menu");
    if (!(value >= -1e-12 && value <= 1.0 + 1e-12)) throw DomainError("value outside [0, 1]");
    std::optional<std::size_t> best;
    double best_u = 0.0;
    for (std::size_t i = 0; i < menu.size(); ++i) {
        double u = menu[i].quality * value - menu[i].ordeal;
        if (u < -kTie) continue;
        if (!best || u > best_u + kTie) {
            best = i;
            best_u = u;
            continue;
        }
        if (u >= best_u - kTie) {
            const auto& cur = menu[*best];
            const auto& cand = menu[i];
            if (cand.ordeal < cur.ordeal || (cand.ordeal == cur.ordeal && cand.quality > cur.quality)) {
                best = i;
                best_u = std::max(best_u, u);
            }
        }
    }
    return {best ? std::max(0.0, best_u) : 0.0, best};
}

PwlConvex indirect_utility(std::span<const MenuOption> menu) {
    if (menu.empty()) throw ParameterError("indirect_utility of an empty menu");
    constexpr double kMerge = 1e-9;
    std::vector<MenuOption> lines{{0.0, 0.0}};
    for (const auto& o : menu)
        if (o.quality > 0.0) lines.push_back(o);
    std::sort(lines.begin(), lines.end(), [](const MenuOption& p, const MenuOption& q) {
        return p.quality != q.quality ? p.quality < q.quality : p.ordeal < q.ordeal;
    });
    auto cross = [](const MenuOption& p, const MenuOption& q) {
        return (q.ordeal - p.ordeal) / (q.quality - p.quality);
    };
    // Upper envelope; lines active on less than kMerge are dropped.
    std::vector<MenuOption> hull;
    for (const auto& l : lines) {
        if (!hull.empty() && hull.back().quality == l.quality) continue;
        while (!hull.empty()) {
            double x = cross(hull.back(), l);
            double start = hull.size() > 1 ? cross(hull[hull.size() - 2], hull.back()) : -1e300;
            if (x <= start + kMerge) hull.pop_back();
            else break;
        }
        hull.push_back(l);
    }
    std::size_t first = 0;
    while (first + 1 < hull.size() && cross(hull[first], hull[first + 1]) <= kMerge) ++first;
    std::size_t last = hull.size();
    while (last - first > 1 && cross(hull[last - 2], hull[last - 1]) >= 1.0 - kMerge) --last;
    auto at = [](const MenuOption& o, double v) { return std::max(0.0, o.quality * v - o.ordeal); };
    std::vector<Knot> knots{{0.0, at(hull[first], 0.0)}};
    for (std::size_t i = first; i + 1 < last; ++i) {
        double x = cross(hull[i], hull[i + 1]);
        bool zero = hull[i].quality == 0.0 && hull[i].ordeal == 0.0;
        knots.push_back({x, zero ? 0.0 : std::max(at(hull[i], x), at(hull[i + 1], x))});
    }
    knots.push_back({1.0, at(hull[last - 1], 1.0)});
    return PwlConvex(std::move(knots));
}

Good choose_good(const Mechanism& mech, double a, double b) {
    double ua = best_option(mech.menu_a(), a).utility;
    double ub = best_option(mech.menu_b(), b).utility;
    if (ua <= 0.0 && ub <= 0.0) return Good::none;
    return ua >= ub ? Good::A : Good::B;
}

MechanismStats evaluate(const Mechanism& mech, const DensityModel& model) {
    const PwlConvex ua = indirect_utility(mech.menu_a());
    const PwlConvex ub = indirect_utility(mech.menu_b());
    auto one = [](double) { return 1.0; };
    MechanismStats st;
    st.demand.mass_a = side_integral(model, ua, ub, true, one);
    st.demand.mass_b = side_integral(model, ub, ua, false, one);
    auto utility = [](const PwlConvex& u) { return [&u](double v) { return u.value(v); }; };
    auto ordeal = [](const PwlConvex& u) {
        return [&u](double v) { return v * u.slope_right(v) - u.value(v); };
    };
    auto value = [](const PwlConvex& u) { return [&u](double v) { return v * u.slope_right(v); }; };
    st.welfare = side_integral(model, ua, ub, true, utility(ua)) + side_integral(model, ub, ua, false, utility(ub));
    st.revenue = side_integral(model, ua, ub, true, ordeal(ua)) + side_integral(model, ub, ua, false, ordeal(ub));
    st.efficiency = side_integral(model, ua, ub, true, value(ua)) + side_integral(model, ub, ua, false, value(ub));
    return st;
}

Demand demand(const Mechanism& mech, const DensityModel& model) {
    const PwlConvex ua = indirect_utility(mech.menu_a());
    const PwlConvex ub = indirect_utility(mech.menu_b());
    auto one = [](double) { return 1.0; };
    return {side_integral(model, ua, ub, true, one), side_integral(model, ub, ua, false, one)};
}

double direct_welfare(const Mechanism& mech, const DensityModel& model) {
    const PwlConvex ua = indirect_utility(mech.menu_a());
    const PwlConvex ub = indirect_utility(mech.menu_b());
    return side_integral(model, ua, ub, true, [&](double v) { return ua.value(v); }) +
           side_integral(model, ub, ua, false, [&](double v) { return ub.value(v); });
}

double revenue(const Mechanism& mech, const DensityModel& model) { return evaluate(mech, model).revenue; }

double objective_wr(const Mechanism& mech, const DensityModel& model, double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw ParameterError("gamma must lie in [0, 1]");
    auto st = evaluate(mech, model);
    return st.welfare + gamma * st.revenue;
}

double efficiency(const Mechanism& mech, const DensityModel& model) { return evaluate(mech, model).efficiency; }

namespace {

// Index of the menu option generating a segment of the envelope.
std::optional<std::size_t> option_for_segment(std::span<const MenuOption> menu, const Segment& seg) {
    if (seg.slope <= 0.0) return std::nullopt;
    double ord = seg.x0 * seg.slope - seg.y0;
    std::optional<std::size_t> best;
    double best_err = 1e-9;
    for (std::size_t i = 0; i < menu.size(); ++i) {
        double err = std::abs(menu[i].quality - seg.slope) + std::abs(menu[i].ordeal - ord);
        if (err <= best_err) {
            best = i;
            best_err = err;
        }
    }
    return best;
}

std::vector<double> per_option(const DensityModel& model, std::span<const MenuOption> menu,
                               const PwlConvex& own, const PwlConvex& other, bool a_side) {
    std::vector<double> out(menu.size(), 0.0);
    for (const auto& seg : own.segments()) {
        auto idx = option_for_segment(menu, seg);
        if (!idx) continue;
        double lo = seg.x0, hi = seg.x1;
        out[*idx] += side_integral(model, own, other, a_side, [lo, hi](double v) {
            return v > lo && v < hi ? 1.0 : 0.0;
        });
    }
    return out;
}

}  // namespace

OptionMasses option_masses(const Mechanism& mech, const DensityModel& model) {
    const PwlConvex ua = indirect_utility(mech.menu_a());
    const PwlConvex ub = indirect_utility(mech.menu_b());
    return {per_option(model, mech.menu_a(), ua, ub, true), per_option(model, mech.menu_b(), ub, ua, false)};
}

}  // namespace ordeal
