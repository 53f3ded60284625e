#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "generators.hpp"
#include "ordeal/error.hpp"
#include "ordeal/implement.hpp"
#include "ordeal/optimize.hpp"

using namespace ordeal;

namespace {

std::vector<double> default_slopes() {
    std::vector<double> s;
    for (int i = 0; i <= 15; ++i) s.push_back(0.5 + 0.1 * i);
    return s;
}

}  // namespace

TEST_CASE("supply preserving lines on the uniform") {
    auto z = supply_preserving_linear(DensityModel::uniform(), 0.25, 0.25, 1.0);
    // Diagonal from (c, c): below mass (1 - c^2) / 2.
    CHECK(z.a_low() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-6));
    CHECK(z.b_low() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-6));
    for (double s : {0.5, 0.8, 1.3, 2.0}) {
        auto line = supply_preserving_linear(DensityModel::uniform(), 0.2, 0.3, s);
        auto m = supply_masses(line, DensityModel::uniform());
        CHECK(m.below == doctest::Approx(0.2).epsilon(1e-6));
        CHECK(m.above == doctest::Approx(0.3).epsilon(1e-6));
    }
}

TEST_CASE("slope sweep on the uniform") {
    auto slopes = default_slopes();
    auto r = slope_sweep(DensityModel::uniform(), 0.25, 0.25, slopes);
    REQUIRE(r.rows.size() == slopes.size());
    auto best = r.argmax();
    REQUIRE(best < r.rows.size());
    CHECK(r.rows[best].slope == doctest::Approx(1.0));
    double c = std::sqrt(0.5);
    CHECK(r.rows[best].welfare == doctest::Approx(2.0 * (1.0 / 3.0 - c / 2.0 + c * c * c / 6.0)).epsilon(1e-6));
    std::vector<double> pair{0.5, 2.0, 0.8, 1.25};
    auto sym = slope_sweep(DensityModel::uniform(), 0.25, 0.25, pair);
    CHECK(sym.rows[0].welfare == doctest::Approx(sym.rows[1].welfare).epsilon(1e-7));
    CHECK(sym.rows[2].welfare == doctest::Approx(sym.rows[3].welfare).epsilon(1e-7));
}

TEST_CASE("slope sweep on the three-band density leaves the diagonal") {
    auto slopes = default_slopes();
    auto r = slope_sweep(DensityModel::example1(0.05, 0.3), 0.65, 0.35, slopes);
    auto best = r.argmax();
    REQUIRE(best < r.rows.size());
    CHECK(r.rows[best].slope != doctest::Approx(1.0));
}

TEST_CASE("local boundary search on the uniform") {
    double c = std::sqrt(0.5);
    double target = 2.0 * (1.0 / 3.0 - c / 2.0 + c * c * c / 6.0);
    auto r = local_boundary_search(DensityModel::uniform(), 0.25, 0.25, 4, 7);
    CHECK(r.best_welfare == doctest::Approx(target).epsilon(1e-2));
    CHECK(max_deviation_from_diagonal(r.best_boundary) <= 0.05);
    auto m = supply_masses(r.best_boundary, DensityModel::uniform());
    CHECK(m.below == doctest::Approx(0.25).epsilon(1e-5));
    CHECK(m.above == doctest::Approx(0.25).epsilon(1e-5));
    REQUIRE(!r.trace.empty());
    for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i].welfare >= r.trace[i - 1].welfare - 1e-12);
    auto again = local_boundary_search(DensityModel::uniform(), 0.25, 0.25, 4, 7);
    CHECK(again.best_boundary == r.best_boundary);
    CHECK(again.best_welfare == r.best_welfare);
    CHECK_THROWS_AS(local_boundary_search(DensityModel::uniform(), 0.25, 0.25, 1, 7), ParameterError);
}

TEST_CASE("max deviation from the diagonal") {
    Boundary z({{0.2, 0.3}, {0.5, 0.4}, {1.0, 0.9}});
    CHECK(max_deviation_from_diagonal(z) == doctest::Approx(0.1));
}

TEST_CASE("single good comparison closed form") {
    auto c = single_good_compare(Density1D::uniform(), 0.2, 0.5);
    CHECK(c.w_ordeal == doctest::Approx(0.325).epsilon(1e-9));
    CHECK(c.w_damage == doctest::Approx(0.25).epsilon(1e-9));
    CHECK_THROWS_AS(single_good_compare(Density1D::uniform(), 0.5, 0.4), ParameterError);
}

TEST_CASE("ordeals beat damage with one good") {
    gen::Rng rng(11);
    for (int t = 0; t < 300; ++t) {
        std::vector<double> bins(gen::integer(rng, 1, 12));
        for (double& b : bins) b = gen::uniform(rng, 0.0, 2.0);
        bins[0] += 0.01;
        double b_out = gen::uniform(rng, 0.01, 0.9);
        double cut = gen::uniform(rng, b_out + 0.01, 0.99);
        Density1D f(bins);
        auto c = single_good_compare(f, b_out, cut);
        // Direct oracle: value-weighted midpoint sums on a fine lattice.
        int n = 20000;
        double wo = b_out * f.mass(0.0, cut), wd = wo;
        for (int i = 0; i < n; ++i) {
            double v = cut + (1.0 - cut) * (i + 0.5) / n;
            double dm = f.mass(cut + (1.0 - cut) * i / n, cut + (1.0 - cut) * (i + 1) / n);
            wo += (v - (cut - b_out)) * dm;
            wd += (b_out / cut) * v * dm;
        }
        CHECK(c.w_ordeal == doctest::Approx(wo).epsilon(1e-6));
        CHECK(c.w_damage == doctest::Approx(wd).epsilon(1e-6));
        CHECK(c.w_ordeal >= c.w_damage - 1e-12);
    }
}

TEST_CASE("damage beats ordeals on the three-band density") {
    double prev_gap = 0.0;
    for (double eps : {0.08, 0.05, 0.02}) {
        auto c = example1_compare(eps, 0.3);
        CHECK(c.w_damage > c.w_ordeal);
        double gap = c.w_damage - c.w_ordeal;
        CHECK(gap > prev_gap);
        prev_gap = gap;
    }
}

TEST_CASE("stationarity diagnostic") {
    auto z = Boundary::linear({0.0, 0.0}, 1.0);
    auto d = stationarity_diagnostic(z, DensityModel::uniform(), 32);
    REQUIRE(d.size() == 32);
    for (const auto& p : d) {
        CHECK(!p.floor_violation);
        CHECK(p.rate == doctest::Approx(p.a).epsilon(1e-9));
    }
    CHECK(strictly_monotone(d));
    std::vector<DiagnosticPoint> flat{{0.1, 1.0, false}, {0.2, 1.0, false}};
    CHECK(!strictly_monotone(flat));
}
