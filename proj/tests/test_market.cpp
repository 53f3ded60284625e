#include <cmath>

#include "doctest.h"
#include "generators.hpp"
#include "ordeal/error.hpp"
#include "ordeal/market.hpp"

using namespace ordeal;

TEST_CASE("market clearing on the uniform") {
    auto u = DensityModel::uniform();
    auto r = market_clearing_ordeals(u, 0.25, 0.25, 1e-5);
    CHECK(std::abs(r.c_a - std::sqrt(0.5)) < 1e-4);
    CHECK(std::abs(r.c_b - std::sqrt(0.5)) < 1e-4);
    auto full = market_clearing_ordeals(u, 0.5, 0.5, 1e-6);
    CHECK(full.c_a == 0.0);
    CHECK(full.c_b == 0.0);
    auto h = market_clearing_ordeals(u, 0.375, 0.375, 1e-8);
    CHECK(h.c_a == doctest::Approx(0.5).epsilon(1e-6));
    CHECK_THROWS_AS(market_clearing_ordeals(u, 0.7, 0.5, 1e-6), ParameterError);
    CHECK_THROWS_AS(market_clearing_ordeals(u, 0.0, 0.5, 1e-6), ParameterError);
}

TEST_CASE("posted clearing mechanism") {
    auto u = DensityModel::uniform();
    auto m = theorem1_mechanism(u, 0.25, 0.25);
    CHECK(m.menu_a()[0].ordeal == doctest::Approx(0.70711).epsilon(1e-5));
    auto sym = DensityModel::custom([](double a, double b) { return 1.0 + a * b; }, 100);
    auto s = theorem1_mechanism(sym, 0.2, 0.2);
    CHECK(s.menu_a()[0].ordeal == doctest::Approx(s.menu_b()[0].ordeal).epsilon(1e-6));
    auto a = theorem1_mechanism(u, 0.1, 0.4);
    CHECK(a.menu_a()[0].ordeal > a.menu_b()[0].ordeal);
    auto d = demand(a, u);
    CHECK(std::abs(d.mass_a - 0.1) < 1e-4);
    CHECK(std::abs(d.mass_b - 0.4) < 1e-4);
}

TEST_CASE("slack supply stays at zero ordeal") {
    auto u = DensityModel::uniform();
    auto r = market_clearing_ordeals(u, 0.9, 0.1, 1e-6);
    CHECK(r.residual <= 1e-6);
    CHECK(std::abs(r.demand.mass_b - 0.1) < 1e-6);
}

TEST_CASE("clearing binds and satisfies gross substitutes on random grids") {
    gen::Rng rng(41);
    for (int t = 0; t < 4; ++t) {
        auto g = gen::grid_model(rng, 100);
        double ma = gen::uniform(rng, 0.1, 0.4), mb = gen::uniform(rng, 0.1, 0.4);
        auto r = market_clearing_ordeals(g, ma, mb, 1e-6);
        CHECK(std::abs(r.demand.mass_a - ma) <= 1e-6);
        CHECK(std::abs(r.demand.mass_b - mb) <= 1e-6);
        auto up = demand(Mechanism::posted(r.c_a + 1e-3, r.c_b), g);
        CHECK(up.mass_a < r.demand.mass_a);
        CHECK(up.mass_b >= r.demand.mass_b - 1e-12);
    }
}
