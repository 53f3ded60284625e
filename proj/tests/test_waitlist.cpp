#include <cmath>

#include "doctest.h"
#include "ordeal/error.hpp"
#include "ordeal/market.hpp"
#include "ordeal/waitlist.hpp"

using namespace ordeal;

TEST_CASE("expected discount") {
    CHECK(expected_discount({0.1, 2.0, 0.5}, 0.3) == doctest::Approx(0.5 * std::exp(-0.6)));
    CHECK(expected_discount({0.1, 0.0, 1.0}, 0.3) == 1.0);
    CHECK_THROWS_AS(expected_discount({0.1, 1.0, 1.5}, 0.3), ParameterError);
    CHECK_THROWS_AS(expected_discount({0.1, 1.0, 1.0}, 0.0), ParameterError);
}

TEST_CASE("reparameterized menus share a static equivalent") {
    double rho = 0.2;
    WaitMechanism base({{0.3, 2.0, 0.9}, {0.1, 4.0, 0.8}}, {{0.25, 1.0, 1.0}});
    for (double s : {0.5, 1.0, 2.0}) {
        WaitMechanism re({{0.3, 2.0 - s, 0.9 * std::exp(-rho * s)}, {0.1, 4.0 - s, 0.8 * std::exp(-rho * s)}},
                         {{0.25, 1.0 - std::min(s, 1.0), std::exp(-rho * std::min(s, 1.0))}});
        auto m0 = static_equivalent(base, rho);
        auto m1 = static_equivalent(re, rho);
        REQUIRE(m0.menu_a().size() == m1.menu_a().size());
        for (std::size_t i = 0; i < m0.menu_a().size(); ++i) {
            CHECK(std::abs(m0.menu_a()[i].quality - m1.menu_a()[i].quality) <= 1e-12);
            CHECK(m0.menu_a()[i].ordeal == m1.menu_a()[i].ordeal);
        }
        CHECK(std::abs(m0.menu_b()[0].quality - m1.menu_b()[0].quality) <= 1e-12);
    }
}

TEST_CASE("deterministic waits satisfy Little's law") {
    auto model = DensityModel::uniform();
    WaitMechanism wm({{0.7, 1.0, 1.0}}, {{0.7, 2.0, 1.0}});
    SimConfig cfg{0.1, 0.01, 20.0, 0.25, 0.25, model};
    auto rows = simulate(wm, cfg);
    auto d = demand(static_equivalent(wm, cfg.rho), model);
    CHECK(rows.back().queue_a == doctest::Approx(d.mass_a * 1.0).epsilon(1e-9));
    CHECK(rows.back().queue_b == doctest::Approx(d.mass_b * 2.0).epsilon(1e-9));
    auto rate = mean_service_rate(rows, cfg.dt, burn_in_time(wm, cfg.dt));
    CHECK(rate.mass_a == doctest::Approx(d.mass_a).epsilon(1e-9));
    CHECK(rate.mass_b == doctest::Approx(d.mass_b).epsilon(1e-9));
}

TEST_CASE("lotteries without waits re-enter once on average") {
    auto model = DensityModel::uniform();
    WaitMechanism wm({{0.6, 0.0, 0.5}}, {{0.6, 0.0, 0.5}});
    SimConfig cfg{0.1, 0.01, 5.0, 0.3, 0.3, model};
    auto rows = simulate(wm, cfg);
    auto d = demand(static_equivalent(wm, cfg.rho), model);
    REQUIRE(d.mass_a <= 0.3);
    CHECK(rows.back().served_a == doctest::Approx(d.mass_a * cfg.dt).epsilon(1e-6));
    // Waiting mass: failures awaiting re-entry, dt * d * sum (1/2)^k = dt * d.
    CHECK(rows.back().queue_a == doctest::Approx(d.mass_a * cfg.dt * 0.5 * 2.0).epsilon(1e-6));
}

TEST_CASE("posted clearing encoding reaches steady state") {
    auto model = DensityModel::uniform();
    auto r = market_clearing_ordeals(model, 0.25, 0.25);
    WaitMechanism wm({{r.c_a, 0.0, 1.0}}, {{r.c_b, 0.0, 1.0}});
    auto ss = steady_state_check(wm, model, 0.25, 0.25, 0.1);
    CHECK(ss.ok);
    SimConfig cfg{0.1, 0.01, 10.0, 0.25, 0.25, model};
    auto rows = simulate(wm, cfg);
    auto rate = mean_service_rate(rows, cfg.dt, burn_in_time(wm, cfg.dt));
    CHECK(std::abs(rate.mass_a - ss.masses.mass_a) <= 0.02 * ss.masses.mass_a);
    CHECK(std::abs(rate.mass_b - ss.masses.mass_b) <= 0.02 * ss.masses.mass_b);
}

TEST_CASE("excess demand grows the queue") {
    auto model = DensityModel::uniform();
    WaitMechanism wm({{0.0, 0.0, 1.0}}, {{0.0, 0.0, 1.0}});
    CHECK(!steady_state_check(wm, model, 0.25, 0.25, 0.1).ok);
    SimConfig cfg{0.1, 0.01, 10.0, 0.25, 0.25, model};
    auto rows = simulate(wm, cfg);
    double mid = rows[rows.size() / 2].queue_a;
    CHECK(rows.back().queue_a > 1.5 * mid);
}

TEST_CASE("no arrivals") {
    auto model = DensityModel::uniform();
    WaitMechanism wm({{1.0, 1.0, 1.0}}, {{1.0, 1.0, 1.0}});
    SimConfig cfg{0.1, 0.05, 3.0, 0.25, 0.25, model};
    for (const auto& r : simulate(wm, cfg)) {
        CHECK(r.queue_a == 0.0);
        CHECK(r.served_b == 0.0);
    }
}

TEST_CASE("dt must resolve the shortest wait") {
    WaitMechanism wm({{0.5, 0.1, 1.0}}, {{0.5, 0.0, 1.0}});
    SimConfig cfg{0.1, 0.05, 1.0, 0.25, 0.25, DensityModel::uniform()};
    CHECK_THROWS_AS(simulate(wm, cfg), ParameterError);
    CHECK_THROWS_AS(WaitMechanism({}, {{0.5, 0.0, 1.0}}), ParameterError);
}

TEST_CASE("option flows split demand") {
    auto model = DensityModel::uniform();
    WaitMechanism wm({{0.2, 3.0, 0.9}, {0.5, 0.0, 1.0}}, {{0.6, 0.0, 1.0}});
    auto f = option_flows(wm, model, 0.1);
    auto d = demand(static_equivalent(wm, 0.1), model);
    CHECK(f.a[0] + f.a[1] == doctest::Approx(d.mass_a).epsilon(1e-9));
    CHECK(f.b[0] == doctest::Approx(d.mass_b).epsilon(1e-9));
}
