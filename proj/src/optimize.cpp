#include "ordeal/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>

#include "ordeal/error.hpp"
#include "ordeal/implement.hpp"
#include "ordeal/market.hpp"
#include "ordeal/mechanism.hpp"
#include "ordeal/parallel.hpp"

namespace ordeal {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kSupplyTol = 1e-6;

/// Increasing h on [lo, hi]: the root of h = target by bisection.
double bisect_increasing(const std::function<double(double)>& h, double lo, double hi, double target,
                         double tol = 1e-13) {
    for (int i = 0; i < 200 && hi - lo > tol; ++i) {
        double mid = 0.5 * (lo + hi);
        (h(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Search coordinates: start position on the excluded-mass level set, end position along
/// the top and right edges, and the interior knot heights as fractions of the rise from
/// start to end.
struct Params {
    double t = 0.5;
    double e = 1.0;
    std::vector<double> h;
};

class SearchSpace {
public:
    SearchSpace(const DensityModel& model, double mu_a, double mu_b, int n_knots)
        : model_(model), mu_a_(mu_a), mu_b_(mu_b), n_(n_knots), excluded_(std::max(0.0, 1.0 - mu_a - mu_b)) {
        if (excluded_ > 1e-12) {
            a_min_ = bisect_increasing([&](double a) { return model_.cdf(a, 1.0); }, 0.0, 1.0, excluded_);
        }
    }

    int coordinate_count() const { return n_; }  // t, e and n - 2 heights

    Point start(double t) const {
        if (excluded_ <= 1e-12) return t < 0.5 ? Point{0.0, (0.5 - t) * 1.8} : Point{(t - 0.5) * 1.8, 0.0};
        double a = a_min_ + t * (1.0 - a_min_);
        double b = bisect_increasing([&](double v) { return model_.cdf(a, v); }, 0.0, 1.0, excluded_);
        return {a, b};
    }

    double t_of(Point p) const {
        if (excluded_ <= 1e-12) return p.a > 0.0 ? 0.5 + p.a / 1.8 : 0.5 - p.b / 1.8;
        return (p.a - a_min_) / (1.0 - a_min_);
    }

    static Point end(double e, Point s) {
        if (e <= 1.0) return {s.a + e * (1.0 - s.a), 1.0};
        return {1.0, 1.0 - (e - 1.0) * (1.0 - s.b)};
    }

    static double e_of(Point end, Point s) {
        if (end.b >= 1.0) return (end.a - s.a) / (1.0 - s.a);
        return 1.0 + (1.0 - end.b) / (1.0 - s.b);
    }

    std::optional<Boundary> build(const Params& p) const {
        if (!(p.t > 0.0 && p.t < 1.0 && p.e > 0.0 && p.e < 2.0)) return std::nullopt;
        Point s = start(p.t);
        Point f = end(p.e, s);
        std::vector<Point> pts{s};
        for (std::size_t i = 0; i < p.h.size(); ++i) {
            double a = s.a + (f.a - s.a) * double(i + 1) / double(n_ - 1);
            pts.push_back({a, s.b + p.h[i] * (f.b - s.b)});
        }
        pts.push_back(f);
        try {
            return Boundary(std::move(pts));
        } catch (const ParameterError&) {
            return std::nullopt;
        }
    }

    Params from_boundary(const Boundary& z) const {
        Params p;
        Point s{z.a_low(), z.b_low()};
        p.t = t_of(s);
        Point f = z.knots().back();
        p.e = e_of(f, s);
        for (int i = 1; i + 1 < n_; ++i) p.h.push_back(double(i) / double(n_ - 1));
        return p;
    }

    double& coord(Params& p, int j) const { return j == 0 ? p.t : j == 1 ? p.e : p.h[j - 2]; }

    std::optional<double> below(const Params& p) const {
        auto z = build(p);
        if (!z) return std::nullopt;
        return supply_masses(*z, model_).below;
    }

    /// Re-solves one coordinate other than `moved` so that good A's allocation is mu_a again.
    bool restore(Params& p, int moved) const {
        auto base = below(p);
        if (!base) return false;
        if (std::abs(*base - mu_a_) <= 1e-10) return true;
        int best = -1;
        double best_rate = 0.0;
        for (int r = 1; r < n_; ++r) {
            if (r == moved) continue;
            Params q = p;
            double step = 1e-5;
            coord(q, r) += step;
            auto m = below(q);
            if (!m) {
                coord(q, r) -= 2 * step;
                m = below(q);
            }
            if (!m) continue;
            double rate = std::abs(*m - *base) / step;
            if (rate > best_rate) {
                best_rate = rate;
                best = r;
            }
        }
        if (best < 0) return false;
        auto [lo, hi] = range(p, best);
        auto eval = [&](double x) {
            Params q = p;
            coord(q, best) = x;
            return below(q);
        };
        // Pull each end inward until the boundary is valid there.
        auto mlo = eval(lo);
        auto mhi = eval(hi);
        double width = hi - lo;
        for (double f = 1e-9; !mlo && f < 0.5; f *= 2.0) mlo = eval(lo + f * width), lo = mlo ? lo + f * width : lo;
        for (double f = 1e-9; !mhi && f < 0.5; f *= 2.0) mhi = eval(hi - f * width), hi = mhi ? hi - f * width : hi;
        if (!mlo || !mhi) return false;
        bool rising = *mhi >= *mlo;
        if (std::min(*mlo, *mhi) > mu_a_ || std::max(*mlo, *mhi) < mu_a_) return false;
        for (int i = 0; i < 100 && hi - lo > 1e-14; ++i) {
            double mid = 0.5 * (lo + hi);
            auto m = eval(mid);
            if (!m) return false;
            if (std::abs(*m - mu_a_) <= 1e-11) {
                lo = hi = mid;
                break;
            }
            ((*m < mu_a_) == rising ? lo : hi) = mid;
        }
        coord(p, best) = 0.5 * (lo + hi);
        auto z = build(p);
        if (!z) return false;
        auto masses = supply_masses(*z, model_);
        return std::abs(masses.below - mu_a_) <= kSupplyTol && std::abs(masses.above - mu_b_) <= kSupplyTol;
    }

    double welfare(const Params& p) const {
        auto z = build(p);
        return z ? boundary_welfare(*z, model_) : -1.0;
    }

private:
    /// Valid open interval of coordinate r (e or a height), shrunk by a small margin.
    std::pair<double, double> range(const Params& p, int r) const {
        constexpr double kMargin = 1e-7;
        if (r == 1) return {kMargin, 2.0 - kMargin};
        std::size_t i = static_cast<std::size_t>(r - 2);
        double lo = i == 0 ? 0.0 : p.h[i - 1];
        double hi = i + 1 == p.h.size() ? 1.0 : p.h[i + 1];
        return {lo + kMargin, hi - kMargin};
    }

    const DensityModel& model_;
    double mu_a_;
    double mu_b_;
    int n_;
    double excluded_;
    double a_min_ = 0.0;
};

SearchResult search_once(const SearchSpace& space, const Boundary& init, const DensityModel& model,
                         const SearchOptions& opts) {
    Params p = space.from_boundary(init);
    SearchResult out{init, boundary_welfare(init, model), {}, false};
    if (!space.restore(p, -1)) p = space.from_boundary(init);
    double w = space.welfare(p);
    if (auto z = space.build(p); z && w >= out.best_welfare) {
        out.best_boundary = *z;
        out.best_welfare = w;
    } else {
        w = out.best_welfare;
        p = space.from_boundary(init);
    }
    out.trace.push_back({0, out.best_welfare});

    double step = opts.initial_step;
    for (int it = 1; it <= opts.max_iterations; ++it) {
        bool improved = false;
        for (int j = 0; j < space.coordinate_count(); ++j) {
            if (j == 1 && space.coordinate_count() == 2) continue;
            for (double sign : {1.0, -1.0}) {
                Params q = p;
                space.coord(q, j) += sign * step;
                if (!space.restore(q, j)) continue;
                double wq = space.welfare(q);
                if (wq > w + opts.min_gain) {
                    p = q;
                    w = wq;
                    improved = true;
                }
            }
        }
        if (improved) {
            out.best_boundary = *space.build(p);
            out.best_welfare = w;
            out.trace.push_back({it, w});
            continue;
        }
        step *= 0.5;
        if (step < opts.min_step) {
            out.converged = true;
            break;
        }
    }
    return out;
}

}  // namespace

std::size_t SweepResult::argmax() const {
    std::size_t best = rows.size();
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i].feasible && (best == rows.size() || rows[i].welfare > rows[best].welfare)) best = i;
    return best;
}

Boundary supply_preserving_linear(const DensityModel& model, double mu_a, double mu_b, double slope) {
    if (!(slope > 0.0) || !std::isfinite(slope)) throw ParameterError("slope must be positive");
    if (!(mu_a > 0.0 && mu_b > 0.0 && mu_a + mu_b <= 1.0 + 1e-12)) throw ParameterError("invalid supplies");
    double qa = std::min(1.0, slope);
    double qb = std::min(1.0, 1.0 / slope);
    auto masses = [&](double x, double y) {
        return demand(Mechanism({{qa, x * qa}}, {{qb, y * qb}}), model);
    };
    ClearingResult r;
    try {
        r = nested_bisection(masses, mu_a, mu_b, 1e-9);
    } catch (const ConvergenceError&) {
        throw InfeasibleError("no line of this slope allocates the supplies");
    }
    if (std::abs(r.demand.mass_a - mu_a) > kSupplyTol || std::abs(r.demand.mass_b - mu_b) > kSupplyTol ||
        r.c_a >= 1.0 || r.c_b >= 1.0)
        throw InfeasibleError("no line of this slope allocates the supplies");
    return Boundary::linear({r.c_a, r.c_b}, slope);
}

double boundary_welfare(const Boundary& z, const DensityModel& model) {
    return wstar_welfare(z, optimal_UA(z), model);
}

SweepResult slope_sweep(const DensityModel& model, double mu_a, double mu_b, std::span<const double> slopes) {
    for (double s : slopes)
        if (!(s > 0.0)) throw ParameterError("slopes must be positive");
    SweepResult out;
    out.rows.resize(slopes.size());
    parallel_for(slopes.size(), [&](std::size_t i) {
        SweepRow row{slopes[i], kNaN, kNaN, kNaN, false};
        try {
            Boundary z = supply_preserving_linear(model, mu_a, mu_b, slopes[i]);
            row.a_low = z.a_low();
            row.b_low = z.b_low();
            row.welfare = boundary_welfare(z, model);
            row.feasible = true;
        } catch (const InfeasibleError&) {
        }
        out.rows[i] = row;
    });
    return out;
}

SearchResult local_boundary_search(const DensityModel& model, double mu_a, double mu_b, int n_knots,
                                   std::uint64_t seed, const SearchOptions& opts) {
    if (n_knots < 2 || n_knots > 16) throw ParameterError("n_knots must lie in [2, 16]");
    if (opts.restarts < 1) throw ParameterError("restarts must be positive");
    SearchSpace space(model, mu_a, mu_b, n_knots);
    std::mt19937_64 rng(seed);
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(opts.restarts));
    for (auto& s : seeds) s = rng();

    std::vector<std::optional<SearchResult>> runs(seeds.size());
    parallel_for(seeds.size(), [&](std::size_t i) {
        std::mt19937_64 local(seeds[i]);
        std::uniform_real_distribution<double> log_slope(std::log(0.5), std::log(2.0));
        for (int attempt = 0; attempt < 50; ++attempt) {
            double slope = std::exp(log_slope(local));
            try {
                Boundary init = supply_preserving_linear(model, mu_a, mu_b, slope);
                runs[i] = search_once(space, init, model, opts);
                return;
            } catch (const InfeasibleError&) {
            }
        }
    });
    std::optional<SearchResult> best;
    for (auto& r : runs)
        if (r && (!best || r->best_welfare > best->best_welfare)) best = std::move(r);
    if (!best) throw InfeasibleError("no feasible starting line");
    return *best;
}

double max_deviation_from_diagonal(const Boundary& z) {
    double d = 0.0;
    for (const auto& p : z.knots()) d = std::max(d, std::abs(p.b - p.a));
    return d;
}

Density1D::Density1D(std::vector<double> bins) : bins_(std::move(bins)) {
    if (bins_.empty()) throw ParameterError("density needs at least one bin");
    double total = 0.0;
    for (double b : bins_) {
        if (!(b >= 0.0) || !std::isfinite(b)) throw ParameterError("density bins must be non-negative");
        total += b;
    }
    if (!(total > 0.0)) throw ParameterError("density has zero mass");
    double scale = static_cast<double>(bins_.size()) / total;
    for (double& b : bins_) b *= scale;
}

template <class F>
double Density1D::integrate(double lo, double hi, F antiderivative) const {
    lo = std::clamp(lo, 0.0, 1.0);
    hi = std::clamp(hi, 0.0, 1.0);
    double n = static_cast<double>(bins_.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < bins_.size(); ++i) {
        double x0 = std::max(lo, i / n);
        double x1 = std::min(hi, (i + 1) / n);
        if (x1 > x0) sum += bins_[i] * (antiderivative(x1) - antiderivative(x0));
    }
    return sum;
}

double Density1D::mass(double lo, double hi) const {
    return integrate(lo, hi, [](double x) { return x; });
}

double Density1D::moment(double lo, double hi) const {
    return integrate(lo, hi, [](double x) { return 0.5 * x * x; });
}

Comparison single_good_compare(const Density1D& f_a, double b_out, double cutoff) {
    if (!(b_out > 0.0 && b_out < 1.0)) throw ParameterError("b_out must lie in (0, 1)");
    if (!(cutoff > 0.0 && cutoff < 1.0)) throw ParameterError("cutoff must lie in (0, 1)");
    if (cutoff <= b_out) throw ParameterError("cutoff must exceed b_out");
    double below = f_a.mass(0.0, cutoff);
    double above = f_a.mass(cutoff, 1.0);
    double moment = f_a.moment(cutoff, 1.0);
    double c = cutoff - b_out;
    double x = b_out / cutoff;
    return {b_out * below + moment - c * above, b_out * below + x * moment};
}

Comparison example1_compare(double epsilon, double k) {
    if (!(epsilon > 0.0 && epsilon <= 0.1)) throw ParameterError("epsilon must lie in (0, 0.1]");
    if (!(k > 0.0 && k < 1.0 - epsilon)) throw ParameterError("k must lie in (0, 1 - epsilon)");
    DensityModel model = DensityModel::example1(epsilon, k);
    double mu_a = 1.0 - k - epsilon;
    double mu_b = k + epsilon;
    Mechanism ordeal_only({{1.0, 0.0}}, {{1.0, 0.5}});
    auto d = demand(ordeal_only, model);
    if (std::abs(d.mass_a - mu_a) > 1e-3 || std::abs(d.mass_b - mu_b) > 1e-3)
        throw InfeasibleError("ordeal benchmark does not allocate the supplies");
    auto mass_b = [&](double q) { return demand(Mechanism({{1.0, 0.0}}, {{q, 0.0}}), model).mass_b; };
    if (mass_b(1.0) < mu_b) throw ConvergenceError("no damage level allocates good B");
    double q = bisect_increasing(mass_b, 0.0, 1.0, mu_b, 1e-14);
    Mechanism ray({{1.0, 0.0}}, {{q, 0.0}});
    auto r = demand(ray, model);
    if (std::abs(r.mass_b - mu_b) > 1e-6) throw ConvergenceError("damage level did not converge");
    return {direct_welfare(ordeal_only, model), direct_welfare(ray, model)};
}

std::vector<DiagnosticPoint> stationarity_diagnostic(const Boundary& z, const DensityModel& model, int samples) {
    if (samples < 2) throw ParameterError("samples must be at least 2");
    std::vector<DiagnosticPoint> out;
    for (int i = 0; i < samples; ++i) {
        double a = z.a_low() + (z.a_bar() - z.a_low()) * (i + 0.5) / samples;
        DiagnosticPoint d{a, kNaN, false};
        try {
            d.rate = model.inv_anti_hazard_a(a, z.value(a));
        } catch (const DensityFloorError&) {
            d.floor_violation = true;
        }
        out.push_back(d);
    }
    return out;
}

bool strictly_monotone(std::span<const DiagnosticPoint> profile) {
    bool up = true;
    bool down = true;
    double prev = kNaN;
    for (const auto& d : profile) {
        if (d.floor_violation) continue;
        if (!std::isnan(prev)) {
            up = up && d.rate > prev;
            down = down && d.rate < prev;
        }
        prev = d.rate;
    }
    return up || down;
}

}  // namespace ordeal
