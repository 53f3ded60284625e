#include "ordeal/density.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <variant>

#include "ordeal/error.hpp"

namespace ordeal {

namespace {

constexpr double kEdgeSlack = 1e-12;
constexpr double kMonotoneSlack = 1e-9;

void check_unit(double& a, double& b) {
    if (!(a >= -kEdgeSlack && a <= 1.0 + kEdgeSlack && b >= -kEdgeSlack && b <= 1.0 + kEdgeSlack))
        throw DomainError("point (" + std::to_string(a) + ", " + std::to_string(b) +
                          ") outside the unit square");
    a = std::clamp(a, 0.0, 1.0);
    b = std::clamp(b, 0.0, 1.0);
}

void push_line_crossing(Point p, Point q, double alpha, double beta, double gamma,
                        std::vector<double>& ts) {
    double denom = alpha * (q.a - p.a) + beta * (q.b - p.b);
    if (denom == 0.0) return;
    double t = (gamma - alpha * p.a - beta * p.b) / denom;
    if (t > 0.0 && t < 1.0) ts.push_back(t);
}

// Density that depends only on d = b - a, piecewise constant in d.
// With R1' = rho and R2' = R1 (both anchored at 0):
//   F(a,b)   = R2(b) - R2(b - a) + R2(-a)
//   int_0^a f(v,b) dv = R1(b) - R1(b - a)
//   int_0^b f(a,w) dw = R1(b - a) - R1(-a)
class BandDensity {
public:
    BandDensity() = default;
    // thresholds strictly increasing inside (-1, 1); levels.size() == thresholds.size() + 1
    BandDensity(std::vector<double> thresholds, std::vector<double> levels)
        : thresholds_(std::move(thresholds)) {
        x_.push_back(-1.0);
        rho_.clear();
        for (std::size_t k = 0; k < thresholds_.size(); ++k) {
            x_.push_back(thresholds_[k]);
            rho_.push_back(levels[k]);
        }
        rho_.push_back(levels.back());
        x_.push_back(1.0);
        // Anchor at zero.
        auto it = std::lower_bound(x_.begin(), x_.end(), 0.0);
        if (*it != 0.0) {
            std::size_t pos = static_cast<std::size_t>(it - x_.begin());
            x_.insert(it, 0.0);
            rho_.insert(rho_.begin() + static_cast<std::ptrdiff_t>(pos), rho_[pos - 1]);
        }
        build();
    }

    void scale(double factor) {
        for (double& r : rho_) r *= factor;
        build();
    }

    double level(double d) const { return rho_[piece(d)]; }

    double r1(double t) const {
        std::size_t k = piece(t);
        double u = t - x_[k];
        return r1_[k] + rho_[k] * u;
    }
    double r2(double t) const {
        std::size_t k = piece(t);
        double u = t - x_[k];
        return r2_[k] + r1_[k] * u + 0.5 * rho_[k] * u * u;
    }

    double cdf(double a, double b) const { return r2(b) - r2(b - a) + r2(-a); }
    double partial_mass_a(double a, double b) const { return r1(b) - r1(b - a); }
    double partial_mass_b(double a, double b) const { return r1(b - a) - r1(-a); }

    void crossings(Point p, Point q, std::vector<double>& ts) const {
        for (double d : thresholds_) {
            push_line_crossing(p, q, -1.0, 1.0, d, ts);
            if (d > 0.0 && d < 1.0) push_line_crossing(p, q, 0.0, 1.0, d, ts);
            if (d < 0.0 && d > -1.0) push_line_crossing(p, q, 1.0, 0.0, -d, ts);
        }
    }

    BandDensity reflected() const {
        std::vector<double> th;
        std::vector<double> lv;
        for (auto it = thresholds_.rbegin(); it != thresholds_.rend(); ++it) th.push_back(-*it);
        // Levels of the original bands, right to left.
        std::vector<double> orig;
        orig.push_back(level(-1.0));
        for (double d : thresholds_) orig.push_back(level(d));
        for (auto it = orig.rbegin(); it != orig.rend(); ++it) lv.push_back(*it);
        return BandDensity(std::move(th), std::move(lv));
    }

private:
    std::size_t piece(double t) const {
        auto it = std::upper_bound(x_.begin(), x_.end(), t);
        std::size_t k = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
        return std::min(k, rho_.size() - 1);
    }

    void build() {
        std::size_t n = x_.size();
        r1_.assign(n, 0.0);
        r2_.assign(n, 0.0);
        std::size_t z = static_cast<std::size_t>(std::find(x_.begin(), x_.end(), 0.0) - x_.begin());
        for (std::size_t k = z; k + 1 < n; ++k) {
            double dx = x_[k + 1] - x_[k];
            r1_[k + 1] = r1_[k] + rho_[k] * dx;
            r2_[k + 1] = r2_[k] + r1_[k] * dx + 0.5 * rho_[k] * dx * dx;
        }
        for (std::size_t k = z; k > 0; --k) {
            double dx = x_[k] - x_[k - 1];
            r1_[k - 1] = r1_[k] - rho_[k - 1] * dx;
            r2_[k - 1] = r2_[k] - r1_[k - 1] * dx - 0.5 * rho_[k - 1] * dx * dx;
        }
    }

    std::vector<double> thresholds_;
    std::vector<double> x_;
    std::vector<double> rho_;
    std::vector<double> r1_;
    std::vector<double> r2_;
};

}  // namespace

// ---------------------------------------------------------------- GridTable

GridTable::GridTable(std::size_t n, std::vector<double> cells) : n_(n), cells_(std::move(cells)) {
    if (n_ == 0) throw ParameterError("grid size must be positive");
    if (cells_.size() != n_ * n_) throw ParameterError("grid needs N*N cells");
    for (double c : cells_)
        if (!(c >= 0.0) || !std::isfinite(c)) throw ParameterError("grid densities must be finite and >= 0");
    const double area = h() * h();
    prefix_.assign((n_ + 1) * (n_ + 1), 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        double col = 0.0;
        for (std::size_t j = 0; j < n_; ++j) {
            col += cells_[i * n_ + j] * area;
            prefix_[(i + 1) * (n_ + 1) + (j + 1)] = prefix_[i * (n_ + 1) + (j + 1)] + col;
        }
    }
}

std::size_t GridTable::index(double x) const {
    auto i = static_cast<std::size_t>(std::max(0.0, std::floor(x * static_cast<double>(n_))));
    return std::min(i, n_ - 1);
}

double GridTable::density(double a, double b) const { return cell(index(a), index(b)); }

double GridTable::cdf(double a, double b) const {
    std::size_t i = index(a);
    std::size_t j = index(b);
    double ta = a * static_cast<double>(n_) - static_cast<double>(i);
    double tb = b * static_cast<double>(n_) - static_cast<double>(j);
    double p00 = prefix(i, j), p10 = prefix(i + 1, j), p01 = prefix(i, j + 1), p11 = prefix(i + 1, j + 1);
    return p00 + ta * (p10 - p00) + tb * (p01 - p00) + ta * tb * (p11 - p10 - p01 + p00);
}

double GridTable::partial_mass_a(double a, double b) const {
    std::size_t i = index(a);
    std::size_t j = index(b);
    double ta = a * static_cast<double>(n_) - static_cast<double>(i);
    double lo = prefix(i, j + 1) - prefix(i, j);
    double hi = prefix(i + 1, j + 1) - prefix(i + 1, j);
    return (lo + ta * (hi - lo)) / h();
}

double GridTable::partial_mass_b(double a, double b) const {
    std::size_t i = index(a);
    std::size_t j = index(b);
    double tb = b * static_cast<double>(n_) - static_cast<double>(j);
    double lo = prefix(i + 1, j) - prefix(i, j);
    double hi = prefix(i + 1, j + 1) - prefix(i, j + 1);
    return (lo + tb * (hi - lo)) / h();
}

void GridTable::crossings(Point p, Point q, std::vector<double>& ts) const {
    const double nn = static_cast<double>(n_);
    auto axis = [&](double x0, double x1) {
        if (x0 == x1) return;
        double lo = std::min(x0, x1) * nn;
        double hi = std::max(x0, x1) * nn;
        for (double k = std::floor(lo) + 1.0; k < hi; k += 1.0) {
            double t = (k / nn - x0) / (x1 - x0);
            if (t > 0.0 && t < 1.0) ts.push_back(t);
        }
    };
    axis(p.a, q.a);
    axis(p.b, q.b);
}

// ---------------------------------------------------------------- DensityModel

struct DensityModel::Impl {
    DensityKind kind = DensityKind::uniform;
    double epsilon = 0.0;
    double k = 0.0;
    std::variant<BandDensity, GridTable> data;
};

std::string to_string(DensityKind kind) {
    switch (kind) {
        case DensityKind::grid: return "grid";
        case DensityKind::uniform: return "uniform";
        case DensityKind::example1: return "example1";
        case DensityKind::custom: return "custom";
    }
    return "unknown";
}

std::string to_string(Direction d) {
    switch (d) {
        case Direction::a: return "a";
        case Direction::b: return "b";
        case Direction::neither: return "neither";
    }
    return "neither";
}

DensityModel::DensityModel() : DensityModel(uniform()) {}

DensityModel DensityModel::uniform() {
    auto impl = std::make_shared<Impl>();
    impl->kind = DensityKind::uniform;
    impl->data = BandDensity({}, {1.0});
    return DensityModel(std::move(impl));
}

DensityModel DensityModel::example1(double epsilon, double k) {
    if (!(epsilon > 0.0 && epsilon < 0.5)) throw ParameterError("example1: epsilon must lie in (0, 1/2)");
    if (!(k > 0.0 && k < 1.0)) throw ParameterError("example1: k must lie in (0, 1)");
    if (!(epsilon + k < 1.0)) throw ParameterError("example1: epsilon + k must be < 1");
    const double top = epsilon * 2.0 / ((0.5 - epsilon) * (0.5 - epsilon));
    const double strip = k * 2.0 / (epsilon - epsilon * epsilon);
    const double bulk = 8.0 / 7.0 * (1.0 - k - epsilon);
    BandDensity band({0.5, 0.5 + epsilon}, {bulk, strip, top});
    band.scale(1.0 / band.cdf(1.0, 1.0));
    auto impl = std::make_shared<Impl>();
    impl->kind = DensityKind::example1;
    impl->epsilon = epsilon;
    impl->k = k;
    impl->data = std::move(band);
    return DensityModel(std::move(impl));
}

DensityModel DensityModel::grid(std::size_t n, std::vector<double> cells) {
    GridTable raw(n, cells);
    double total = raw.total();
    if (!(total > 0.0)) throw ParameterError("grid density has zero mass");
    for (double& c : cells) c /= total;
    auto impl = std::make_shared<Impl>();
    impl->kind = DensityKind::grid;
    impl->data = GridTable(n, std::move(cells));
    return DensityModel(std::move(impl));
}

DensityModel DensityModel::custom(const std::function<double(double, double)>& f, std::size_t n) {
    static constexpr std::array<double, 3> node{-0.7745966692414834, 0.0, 0.7745966692414834};
    static constexpr std::array<double, 3> weight{5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    const double h = 1.0 / static_cast<double>(n);
    std::vector<double> cells(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t u = 0; u < 3; ++u)
                for (std::size_t v = 0; v < 3; ++v) {
                    double a = (static_cast<double>(i) + 0.5 * (1.0 + node[u])) * h;
                    double b = (static_cast<double>(j) + 0.5 * (1.0 + node[v])) * h;
                    acc += weight[u] * weight[v] * f(a, b);
                }
            cells[i * n + j] = acc / 4.0;
        }
    }
    DensityModel m = grid(n, std::move(cells));
    auto impl = std::make_shared<Impl>(*m.impl_);
    impl->kind = DensityKind::custom;
    return DensityModel(std::move(impl));
}

DensityKind DensityModel::kind() const { return impl_->kind; }
double DensityModel::epsilon() const { return impl_->epsilon; }
double DensityModel::k() const { return impl_->k; }

double DensityModel::density(double a, double b) const {
    check_unit(a, b);
    return std::visit(
        [&](const auto& d) -> double {
            if constexpr (std::is_same_v<std::decay_t<decltype(d)>, BandDensity>)
                return d.level(b - a);
            else
                return d.density(a, b);
        },
        impl_->data);
}

double DensityModel::cdf(double a, double b) const {
    check_unit(a, b);
    return std::visit([&](const auto& d) { return d.cdf(a, b); }, impl_->data);
}

double DensityModel::partial_mass_a(double a, double b) const {
    check_unit(a, b);
    return std::visit([&](const auto& d) { return d.partial_mass_a(a, b); }, impl_->data);
}

double DensityModel::partial_mass_b(double a, double b) const {
    check_unit(a, b);
    return std::visit([&](const auto& d) { return d.partial_mass_b(a, b); }, impl_->data);
}

double DensityModel::inv_anti_hazard_a(double a, double b) const {
    double f = density(a, b);
    if (!(f > kDensityFloor)) throw DensityFloorError(a, b);
    return partial_mass_a(a, b) / f;
}

double DensityModel::inv_anti_hazard_b(double a, double b) const {
    double f = density(a, b);
    if (!(f > kDensityFloor)) throw DensityFloorError(a, b);
    return partial_mass_b(a, b) / f;
}

DensityModel DensityModel::transposed() const {
    auto impl = std::make_shared<Impl>(*impl_);
    if (const auto* band = std::get_if<BandDensity>(&impl_->data)) {
        impl->data = band->reflected();
    } else {
        const auto& g = std::get<GridTable>(impl_->data);
        std::size_t n = g.n();
        std::vector<double> cells(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) cells[j * n + i] = g.cell(i, j);
        impl->data = GridTable(n, std::move(cells));
    }
    return DensityModel(std::move(impl));
}

void DensityModel::feature_crossings(Point p, Point q, std::vector<double>& ts) const {
    std::visit([&](const auto& d) { d.crossings(p, q, ts); }, impl_->data);
}

const GridTable* DensityModel::grid_table() const { return std::get_if<GridTable>(&impl_->data); }

std::optional<bool> DensityModel::declared_continuity() const {
    switch (impl_->kind) {
        case DensityKind::uniform: return true;
        case DensityKind::example1: return false;
        default: return std::nullopt;
    }
}

// ---------------------------------------------------------------- conditions

bool grid_is_continuous(const GridTable& grid) {
    const std::size_t n = grid.n();
    std::vector<double> jumps;
    jumps.reserve(2 * n * n);
    double peak = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            peak = std::max(peak, grid.cell(i, j));
            if (i + 1 < n) jumps.push_back(std::abs(grid.cell(i + 1, j) - grid.cell(i, j)));
            if (j + 1 < n) jumps.push_back(std::abs(grid.cell(i, j + 1) - grid.cell(i, j)));
        }
    }
    if (jumps.empty()) return true;
    // Lipschitz estimate times cell width: the 90th percentile of adjacent jumps.
    auto nth = jumps.begin() + static_cast<std::ptrdiff_t>(jumps.size() * 9 / 10);
    std::nth_element(jumps.begin(), nth, jumps.end());
    double typical = *nth;
    double worst = *std::max_element(jumps.begin(), jumps.end());
    return worst <= 5.0 * typical + 1e-12 * std::max(1.0, peak);
}

namespace {

struct RateAnalysis {
    bool ok = false;
    Direction direction = Direction::neither;
    std::vector<Violation> violations;
};

Point sample_point(std::size_t i, std::size_t j, std::size_t res) {
    double r = static_cast<double>(res);
    return {(static_cast<double>(i) + 0.5) / r, (static_cast<double>(j) + 0.5) / r};
}

// Checks "strictly increasing along `strict`, non-decreasing along the other" for one option.
std::vector<Violation> option_violations(const std::vector<double>& rate, std::size_t res,
                                         bool strict_in_a, const std::string& label) {
    std::vector<Violation> out;
    auto at = [&](std::size_t i, std::size_t j) { return rate[i * res + j]; };
    for (std::size_t i = 0; i < res; ++i) {
        for (std::size_t j = 0; j < res; ++j) {
            if (i + 1 < res) {
                double d = at(i + 1, j) - at(i, j);
                if (!std::isnan(d) && d < -kMonotoneSlack)
                    out.push_back({sample_point(i, j, res), label + " decreases in a"});
            }
            if (j + 1 < res) {
                double d = at(i, j + 1) - at(i, j);
                if (!std::isnan(d) && d < -kMonotoneSlack)
                    out.push_back({sample_point(i, j, res), label + " decreases in b"});
            }
        }
    }
    // Mean increment along each line of the strict direction.
    for (std::size_t line = 0; line < res; ++line) {
        double first = strict_in_a ? at(0, line) : at(line, 0);
        double last = strict_in_a ? at(res - 1, line) : at(line, res - 1);
        double mean = (last - first) / static_cast<double>(res - 1);
        if (std::isnan(mean) || !(mean > kMonotoneSlack)) {
            Point p = strict_in_a ? sample_point(0, line, res) : sample_point(line, 0, res);
            out.push_back({p, label + (strict_in_a ? " not strictly increasing in a"
                                                   : " not strictly increasing in b")});
        }
    }
    return out;
}

RateAnalysis analyse_rate(const std::vector<double>& rate, std::size_t res, const std::string& label) {
    auto va = option_violations(rate, res, true, label);
    if (va.empty()) return {true, Direction::a, {}};
    auto vb = option_violations(rate, res, false, label);
    if (vb.empty()) return {true, Direction::b, {}};
    return {false, Direction::neither, va.size() <= vb.size() ? va : vb};
}

template <class Numer, class Denom>
ConditionReport scan_condition(std::size_t res, bool continuity_ok, Numer numer, Denom denom) {
    if (res < 8) throw ParameterError("condition scan needs resolution >= 8");
    ConditionReport report;
    report.resolution = res;
    report.continuity_ok = continuity_ok;
    report.rate_a.assign(res * res, std::nan(""));
    report.rate_b.assign(res * res, std::nan(""));
    std::vector<Violation> floor_violations;
    for (std::size_t i = 0; i < res; ++i) {
        for (std::size_t j = 0; j < res; ++j) {
            Point p = sample_point(i, j, res);
            double f = denom(p.a, p.b);
            if (!(f > kDensityFloor)) {
                floor_violations.push_back({p, "density below floor"});
                continue;
            }
            auto [na, nb] = numer(p.a, p.b);
            report.rate_a[i * res + j] = na / f;
            report.rate_b[i * res + j] = nb / f;
        }
    }
    auto ra = analyse_rate(report.rate_a, res, "A-rate");
    auto rb = analyse_rate(report.rate_b, res, "B-rate");
    report.strict_direction = ra.direction;
    report.strict_direction_b = rb.direction;
    report.violations = std::move(floor_violations);
    if (!continuity_ok) report.violations.push_back({{0.0, 0.0}, "density is not continuous"});
    report.violations.insert(report.violations.end(), ra.violations.begin(), ra.violations.end());
    report.violations.insert(report.violations.end(), rb.violations.begin(), rb.violations.end());
    report.passes = report.violations.empty();
    return report;
}

bool model_continuity(const DensityModel& model) {
    if (auto declared = model.declared_continuity()) return *declared;
    return grid_is_continuous(*model.grid_table());
}

}  // namespace

ConditionReport check_assumption1(const DensityModel& model, std::size_t resolution) {
    return scan_condition(
        resolution, model_continuity(model),
        [&](double a, double b) {
            return std::pair{model.partial_mass_a(a, b), model.partial_mass_b(a, b)};
        },
        [&](double a, double b) { return model.density(a, b); });
}

// ---------------------------------------------------------------- heterogeneous costs

namespace {

struct Binned {
    std::vector<double> count;
    std::vector<double> r_sum;
    double scale = 1.0;
};

Binned bin_samples(std::span<const ValueSample> samples, std::size_t res, bool transform) {
    if (samples.empty()) throw ParameterError("sample list is empty");
    if (res == 0) throw ParameterError("resolution must be positive");
    double r_min = 1.0;
    if (transform) {
        r_min = std::numeric_limits<double>::infinity();
        for (const auto& s : samples) {
            if (!(s.r > 0.0)) throw ParameterError("ordeal cost r must be positive");
            r_min = std::min(r_min, s.r);
        }
    }
    Binned out;
    out.count.assign(res * res, 0.0);
    out.r_sum.assign(res * res, 0.0);
    out.scale = 1.0 / r_min;
    const double nn = static_cast<double>(res);
    for (const auto& s : samples) {
        double a = s.a, b = s.b;
        check_unit(a, b);
        if (transform) {
            a = a * r_min / s.r;
            b = b * r_min / s.r;
        }
        auto i = std::min(static_cast<std::size_t>(a * nn), res - 1);
        auto j = std::min(static_cast<std::size_t>(b * nn), res - 1);
        out.count[i * res + j] += 1.0;
        out.r_sum[i * res + j] += transform ? s.r : 1.0;
    }
    return out;
}

DensityModel model_from_counts(const std::vector<double>& count, std::size_t res) {
    return DensityModel::grid(res, count);
}

}  // namespace

DensityModel histogram_model(std::span<const ValueSample> samples, std::size_t resolution) {
    auto binned = bin_samples(samples, resolution, false);
    return model_from_counts(binned.count, resolution);
}

WeightedModel hetero_transform(std::span<const ValueSample> samples, std::size_t resolution) {
    if (samples.size() < resolution * resolution)
        throw ParameterError("hetero_transform needs at least resolution^2 samples");
    auto binned = bin_samples(samples, resolution, true);
    WeightedModel out;
    out.gdensity = model_from_counts(binned.count, resolution);
    out.n = resolution;
    out.scale = binned.scale;
    out.weights.assign(resolution * resolution, 1.0);
    for (std::size_t c = 0; c < binned.count.size(); ++c) {
        if (binned.count[c] > 0.0)
            out.weights[c] = binned.r_sum[c] / binned.count[c];
        else
            ++out.empty_cells;
    }
    return out;
}

ConditionReport check_weighted_condition(const WeightedModel& model, std::size_t resolution) {
    const GridTable* g = model.gdensity.grid_table();
    if (g == nullptr || g->n() != model.n) throw ParameterError("weighted model needs a matching grid density");
    std::vector<double> weighted(g->cells().begin(), g->cells().end());
    for (std::size_t c = 0; c < weighted.size(); ++c) weighted[c] *= model.weights[c];
    GridTable lambda_g(model.n, std::move(weighted));
    return scan_condition(
        resolution, grid_is_continuous(*g),
        [&](double a, double b) {
            return std::pair{lambda_g.partial_mass_a(a, b), lambda_g.partial_mass_b(a, b)};
        },
        [&](double a, double b) { return model.gdensity.density(a, b); });
}

}  // namespace ordeal
