#include <filesystem>

#include "doctest.h"
#include "generators.hpp"
#include "ordeal/error.hpp"
#include "ordeal/io.hpp"

using namespace ordeal;

TEST_CASE("toml subset parser") {
    auto t = io::parse_toml(R"(# comment
title = "x # y"
flag = true
[supply]
mu_a = 0.25   # trailing
mu_b = -1e-3
rows = [[1, 2.5], [3, 4]]
[waitlist]
menu_a = [
  [0.5, 1, 0.9],
]
)");
    CHECK(io::get_string(t, "title", "title", "") == "x # y");
    CHECK(io::get_bool(t, "flag", "flag", false));
    const auto* s = t.table("supply");
    REQUIRE(s);
    CHECK(io::get_number(*s, "mu_a", "supply.mu_a") == 0.25);
    CHECK(io::get_number(*s, "mu_b", "supply.mu_b") == -1e-3);
    auto rows = io::get_rows(*s, "rows", "supply.rows", 2);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1][0] == 3.0);
    auto w = io::get_rows(*t.table("waitlist"), "menu_a", "waitlist.menu_a", 3);
    REQUIRE(w.size() == 1);
    CHECK(w[0][2] == 0.9);
    CHECK(io::get_number(*s, "absent", "supply.absent", 7.0) == 7.0);
}

TEST_CASE("parser diagnostics name the line and field") {
    auto message = [](const std::string& text) {
        try {
            io::parse_toml(text);
        } catch (const ValidationError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message("a = 1\nb = [1, 2\n").find("line 2") != std::string::npos);
    CHECK(message("a = 1\na = 2\n").find("line 2") != std::string::npos);
    CHECK(message("[t\n").find("line 1") != std::string::npos);
    auto t = io::parse_toml("x = \"s\"\n");
    try {
        io::get_number(t, "x", "sec.x");
        FAIL("expected a ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("sec.x") != std::string::npos);
    }
    CHECK_THROWS_AS(io::get_rows(io::parse_toml("r = [[1, 2, 3]]\n"), "r", "r", 2), ValidationError);
}

TEST_CASE("number formats") {
    CHECK(io::csv_number(0.1234567891234) == "0.123456789");
    CHECK(io::csv_number(2.0) == "2");
    CHECK(io::toml_number(2.0) == "2.0");
    CHECK(io::toml_number(0.1) == "0.1");
    gen::Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        double x = gen::uniform(rng, -1e3, 1e3);
        CHECK(io::get_number(io::parse_toml("x = " + io::toml_number(x) + "\n"), "x", "x") == x);
    }
}

TEST_CASE("mechanism and boundary round trips") {
    gen::Rng rng(5);
    for (int i = 0; i < 1000; ++i) {
        auto m = gen::mechanism(rng, 6);
        CHECK(io::mechanism_from_toml(io::mechanism_to_toml(m)) == m);
        auto z = gen::boundary(rng, 8);
        CHECK(io::boundary_from_toml(io::boundary_to_toml(z)) == z);
    }
    CHECK_THROWS_AS(io::mechanism_from_toml("menu_a = [[1.5, 0.1]]\nmenu_b = [[1, 0]]\n"), ValidationError);
    CHECK_THROWS_AS(io::boundary_from_toml("knots = [[0.5, 0.5], [0.4, 0.9]]\n"), ValidationError);
}

TEST_CASE("grid csv round trip") {
    gen::Rng rng(9);
    auto model = gen::grid_model(rng, 20);
    const auto* g = model.grid_table();
    REQUIRE(g);
    auto back = io::grid_from_csv(io::grid_to_csv(*g));
    REQUIRE(back.grid_table());
    for (std::size_t i = 0; i < 20; ++i)
        for (std::size_t j = 0; j < 20; ++j)
            CHECK(back.grid_table()->cell(i, j) == doctest::Approx(g->cell(i, j)).epsilon(1e-14));
    CHECK_THROWS_AS(io::grid_from_csv("density,2\n1,1\n1\n"), ValidationError);
    CHECK_THROWS_AS(io::grid_from_csv("density,2\n1,1\n1,-1\n"), ValidationError);
}
