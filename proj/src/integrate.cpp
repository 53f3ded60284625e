#include "ordeal/integrate.hpp"

#include <algorithm>
#include <array>

#include "ordeal/error.hpp"

namespace ordeal {

namespace {
constexpr std::array<double, 3> kNode{-0.7745966692414834, 0.0, 0.7745966692414834};
constexpr std::array<double, 3> kWeight{5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
}  // namespace

double integrate_along(const DensityModel& model, std::span<const PathPoint> path,
                       std::span<const double> extra_breaks,
                       const std::function<double(double, double, double)>& g) {
    double total = 0.0;
    std::vector<double> ts;
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        const PathPoint& p = path[k];
        const PathPoint& q = path[k + 1];
        double ds = q.s - p.s;
        if (ds < 0.0) throw ParameterError("integration path must be non-decreasing in s");
        if (ds == 0.0) continue;
        ts.clear();
        ts.push_back(0.0);
        ts.push_back(1.0);
        model.feature_crossings({p.a, p.b}, {q.a, q.b}, ts);
        for (double s : extra_breaks) {
            double t = (s - p.s) / ds;
            if (t > 0.0 && t < 1.0) ts.push_back(t);
        }
        std::sort(ts.begin(), ts.end());
        for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
            double t0 = ts[i], t1 = ts[i + 1];
            if (t1 <= t0) continue;
            double mid = 0.5 * (t0 + t1), half = 0.5 * (t1 - t0);
            double acc = 0.0;
            for (std::size_t u = 0; u < 3; ++u) {
                double t = mid + half * kNode[u];
                acc += kWeight[u] * g(p.s + t * ds, p.a + t * (q.a - p.a), p.b + t * (q.b - p.b));
            }
            total += acc * half * ds;
        }
    }
    return total;
}

std::vector<PathPoint> path_over_a(std::span<const double> as, std::span<const double> bs) {
    std::vector<PathPoint> out;
    out.reserve(as.size());
    for (std::size_t i = 0; i < as.size(); ++i) out.push_back({as[i], as[i], bs[i]});
    return out;
}

std::vector<PathPoint> path_over_b(std::span<const double> as, std::span<const double> bs) {
    std::vector<PathPoint> out;
    out.reserve(as.size());
    for (std::size_t i = 0; i < as.size(); ++i) out.push_back({bs[i], as[i], bs[i]});
    return out;
}

}  // namespace ordeal
