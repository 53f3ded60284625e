#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "generators.hpp"
#include "ordeal/boundary.hpp"
#include "ordeal/io.hpp"
#include "ordeal/mechanism.hpp"

namespace props {

struct Outcome {
    int cases = 0;
    int failures = 0;
    std::string first;

    void fail(const std::string& what) {
        if (failures++ == 0) first = what;
    }
};

inline Outcome convexity(int n, std::uint64_t seed) {
    gen::Rng rng(seed);
    Outcome out;
    for (int t = 0; t < n; ++t, ++out.cases) {
        auto menu = gen::menu(rng, 6);
        auto u = indirect_utility(menu);
        auto segs = u.segments();
        for (std::size_t i = 0; i < segs.size(); ++i) {
            if (segs[i].slope < -1e-15) out.fail("negative slope, case " + std::to_string(t));
            if (i > 0 && segs[i].slope < segs[i - 1].slope - 1e-12) out.fail("slope decrease, case " + std::to_string(t));
        }
        for (int k = 0; k < 40; ++k) {
            double v = gen::uniform(rng, 0.0, 1.0);
            double brute = 0.0;
            for (const auto& o : menu) brute = std::max(brute, o.quality * v - o.ordeal);
            double got = u.value(v);
            if (got < 0.0 || std::abs(got - brute) > 1e-9) out.fail("envelope mismatch, case " + std::to_string(t));
            double mid = 0.5 * (u.value(v) + u.value(0.5 * v));
            if (u.value(0.75 * v) > mid + 1e-12) out.fail("midpoint convexity, case " + std::to_string(t));
        }
    }
    return out;
}

/// Higher a never leaves A; higher b never leaves B.
inline Outcome monotone_sorting(int n, std::uint64_t seed) {
    gen::Rng rng(seed);
    Outcome out;
    for (int t = 0; t < n; ++t, ++out.cases) {
        auto mech = gen::mechanism(rng, 5);
        for (int k = 0; k < 20; ++k) {
            double a = gen::uniform(rng, 0.0, 1.0);
            double b = gen::uniform(rng, 0.0, 1.0);
            double a2 = gen::uniform(rng, a, 1.0);
            double b2 = gen::uniform(rng, b, 1.0);
            auto g = ordeal::choose_good(mech, a, b);
            if (g == ordeal::Good::A && ordeal::choose_good(mech, a2, b) != ordeal::Good::A)
                out.fail("A not upward closed in a, case " + std::to_string(t));
            if (g == ordeal::Good::B && ordeal::choose_good(mech, a, b2) != ordeal::Good::B)
                out.fail("B not upward closed in b, case " + std::to_string(t));
            if (g == ordeal::Good::A && ordeal::choose_good(mech, a, b2) == ordeal::Good::none)
                out.fail("participation lost, case " + std::to_string(t));
        }
    }
    return out;
}

/// Raising every A ordeal lowers A demand and raises B demand.
inline Outcome gross_substitutes(int n, std::uint64_t seed) {
    gen::Rng rng(seed);
    std::vector<ordeal::DensityModel> models{ordeal::DensityModel::uniform(), ordeal::DensityModel::example1(0.05, 0.3)};
    for (int i = 0; i < 3; ++i) models.push_back(gen::grid_model(rng, 60));
    Outcome out;
    for (int t = 0; t < n; ++t, ++out.cases) {
        const auto& model = models[t % models.size()];
        auto ma = gen::menu(rng, 4);
        auto mb = gen::menu(rng, 4);
        bool shift_a = gen::uniform(rng, 0.0, 1.0) < 0.5;
        double delta = gen::uniform(rng, 0.0, 0.3);
        auto shifted = shift_a ? ma : mb;
        for (auto& o : shifted) o.ordeal += delta;
        ordeal::Mechanism base(ma, mb);
        ordeal::Mechanism moved = shift_a ? ordeal::Mechanism(shifted, mb) : ordeal::Mechanism(ma, shifted);
        auto d0 = demand(base, model);
        auto d1 = demand(moved, model);
        double own0 = shift_a ? d0.mass_a : d0.mass_b, own1 = shift_a ? d1.mass_a : d1.mass_b;
        double other0 = shift_a ? d0.mass_b : d0.mass_a, other1 = shift_a ? d1.mass_b : d1.mass_a;
        if (own1 > own0 + 1e-9) out.fail("own demand rose, case " + std::to_string(t));
        if (other1 < other0 - 1e-9) out.fail("cross demand fell, case " + std::to_string(t));
    }
    return out;
}

/// below + above + excluded = 1 for every boundary.
inline Outcome partition_of_unity(int n, std::uint64_t seed) {
    gen::Rng rng(seed);
    std::vector<ordeal::DensityModel> models{ordeal::DensityModel::uniform(), ordeal::DensityModel::example1(0.05, 0.3)};
    for (int i = 0; i < 3; ++i) models.push_back(gen::grid_model(rng, 60));
    Outcome out;
    for (int t = 0; t < n; ++t, ++out.cases) {
        const auto& model = models[t % models.size()];
        auto z = gen::boundary(rng, 6);
        auto m = supply_masses(z, model);
        double excluded = model.cdf(z.a_low(), z.b_low());
        if (std::abs(m.below + m.above + m.excluded - 1.0) > 1e-9 || std::abs(m.excluded - excluded) > 1e-12 ||
            m.below < -1e-12 || m.above < -1e-12)
            out.fail("masses do not partition, case " + std::to_string(t));
    }
    return out;
}

/// TOML artifacts parse back to equal canonical objects.
inline Outcome round_trip(int n, std::uint64_t seed) {
    gen::Rng rng(seed);
    Outcome out;
    for (int t = 0; t < n; ++t, ++out.cases) {
        auto mech = gen::mechanism(rng, 6);
        if (!(ordeal::io::mechanism_from_toml(ordeal::io::mechanism_to_toml(mech)) == mech))
            out.fail("mechanism differs, case " + std::to_string(t));
        auto z = gen::boundary(rng, 8);
        if (!(ordeal::io::boundary_from_toml(ordeal::io::boundary_to_toml(z)) == z))
            out.fail("boundary differs, case " + std::to_string(t));
    }
    return out;
}

}  // namespace props
