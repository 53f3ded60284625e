#include <cmath>

#include "doctest.h"
#include "generators.hpp"
#include "ordeal/boundary.hpp"
#include "ordeal/error.hpp"

using namespace ordeal;

namespace {
const double kC = std::sqrt(0.5);
}

TEST_CASE("boundary construction and orientation") {
    Boundary z({{0.3, 0.3}, {1.0, 1.0}});
    CHECK(z.orientation() == Orientation::ceiling);
    auto w = Boundary::linear({0.2, 0.1}, 0.5);
    CHECK(w.orientation() == Orientation::wall);
    CHECK(w.b_bar() == doctest::Approx(0.5));
    CHECK_THROWS_AS(Boundary({{0.3, 0.3}, {0.8, 0.9}}), ParameterError);
    CHECK_THROWS_AS(Boundary({{0.3, 0.3}, {0.5, 0.2}, {1.0, 1.0}}), ParameterError);
    CHECK_THROWS_AS(Boundary({{0.3, 0.3}, {0.3000001, 0.3000001}, {1.0, 1.0}}), ParameterError);
    CHECK_THROWS_AS(Boundary({{0.3, 0.3}}), ParameterError);
}

TEST_CASE("extended boundary") {
    Boundary z({{0.3, 0.3}, {1.0, 1.0}});
    CHECK(extended(z, 0.1) == 0.0);
    CHECK(extended(z, 0.65) == doctest::Approx(0.65));
    auto s = Boundary::linear({0.2, 0.4}, 2.0);
    CHECK(s.a_bar() == doctest::Approx(0.5));
    CHECK(extended(s, 0.7) == 1.0);
    CHECK(extended_inverse(s, 0.6) == doctest::Approx(0.3));
}

TEST_CASE("supply masses") {
    auto u = DensityModel::uniform();
    auto m = supply_masses(Boundary({{kC, kC}, {1.0, 1.0}}), u);
    CHECK(m.below == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(m.above == doctest::Approx(0.25).epsilon(1e-9));
    auto d = supply_masses(Boundary({{0.0, 0.0}, {1.0, 1.0}}), u);
    CHECK(d.below == doctest::Approx(0.5));
    CHECK(d.above == doctest::Approx(0.5));
    auto low = supply_masses(Boundary::linear({0.5, 0.001}, 1.0), u);
    // Area under b = a - 0.499 for a in [0.5, 1], clipped below by b = 0.
    double oracle = 0.0;
    int k = 100000;
    for (int i = 0; i < k; ++i) {
        double a = 0.5 + (i + 0.5) * 0.5 / k;
        oracle += (a - 0.499) * 0.5 / k;
    }
    CHECK(low.below == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("feasibility of pairs") {
    auto u = DensityModel::uniform();
    Boundary z({{kC, kC}, {1.0, 1.0}});
    std::vector<double> br{0.0, kC, 1.0};
    std::vector<double> sl{0.0, 1.0};
    auto ua = PwlConvex::from_slopes(br, sl);
    auto r = check_feasible_pair(z, ua, u, 0.25, 0.25);
    CHECK(r.feasible);
    CHECK(std::abs(r.slack_a) < 1e-6);
    CHECK(std::abs(r.slack_b) < 1e-6);

    Boundary kink({{0.2, 0.2}, {0.5, 0.5}, {0.75, 1.0}});
    std::vector<double> br2{0.0, 0.2, 1.0};
    auto flat = PwlConvex::from_slopes(br2, sl);
    auto k = check_feasible_pair(kink, flat, u, 1.0, 1.0);
    CHECK_FALSE(k.ratio_monotone);
    CHECK(k.ua_monotone);
    CHECK(k.supply_ok);
    CHECK_FALSE(k.feasible);
}

TEST_CASE("inverse") {
    Boundary z({{0.2, 0.3}, {0.6, 0.9}, {0.7, 1.0}});
    auto w = inverse(z);
    CHECK(w.knots()[0] == Point{0.3, 0.2});
    CHECK(w.knots()[1] == Point{0.9, 0.6});
    CHECK(inverse(w) == z);
    auto s = Boundary::linear({0.1, 0.1}, 2.0);
    CHECK(inverse(s).slopes()[0] == doctest::Approx(0.5));
    Boundary d({{0.3, 0.3}, {1.0, 1.0}});
    CHECK(inverse(d) == d);
}

TEST_CASE("boundary properties on random cases") {
    gen::Rng rng(21);
    auto g = gen::grid_model(rng, 60);
    auto gt = g.transposed();
    for (int t = 0; t < 200; ++t) {
        auto z = gen::boundary(rng);
        double prev = 0.0;
        for (int i = 0; i <= 50; ++i) {
            double v = extended(z, i / 50.0);
            CHECK(v >= prev);
            prev = v;
        }
        auto m = supply_masses(z, g);
        CHECK(m.below + m.above + m.excluded == doctest::Approx(1.0).epsilon(1e-9));
        auto mt = supply_masses(inverse(z), gt);
        CHECK(mt.below == doctest::Approx(m.above).epsilon(1e-9));
        CHECK(mt.above == doctest::Approx(m.below).epsilon(1e-9));
    }
}
