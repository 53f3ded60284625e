#include "ordeal/waitlist.hpp"

#include <algorithm>
#include <cmath>

#include "ordeal/error.hpp"

namespace ordeal {

namespace {

void validate(const WaitOption& o) {
    if (!(o.ordeal >= 0.0) || !std::isfinite(o.ordeal)) throw ParameterError("wait option ordeal must be >= 0");
    if (!(o.wait >= 0.0) || !std::isfinite(o.wait)) throw ParameterError("wait option wait must be >= 0");
    if (!(o.prob >= 0.0 && o.prob <= 1.0)) throw ParameterError("wait option prob must lie in [0, 1]");
}

void check_rho(double rho) {
    if (!(rho > 0.0) || !std::isfinite(rho)) throw ParameterError("rho must be positive");
}

std::vector<MenuOption> static_menu(const std::vector<WaitOption>& menu, double rho) {
    std::vector<MenuOption> out;
    for (const auto& o : menu) out.push_back({expected_discount(o, rho), o.ordeal});
    return out;
}

/// Spreads canonical-option masses over the waitlist options mapping to them (first match wins).
std::vector<double> spread(const std::vector<WaitOption>& menu, std::span<const MenuOption> canon,
                           const std::vector<double>& masses, double rho) {
    std::vector<double> out(menu.size(), 0.0);
    for (std::size_t k = 0; k < canon.size(); ++k)
        for (std::size_t i = 0; i < menu.size(); ++i)
            if (MenuOption{expected_discount(menu[i], rho), menu[i].ordeal} == canon[k]) {
                out[i] += masses[k];
                break;
            }
    return out;
}

/// Fluid state of one waitlist option: cohorts in a ring indexed by the tick they become eligible.
struct Lane {
    std::size_t wait_ticks = 0;
    double prob = 1.0;
    double inflow = 0.0;  ///< new arrivals per tick
    std::vector<double> ring;
    double reentry = 0.0;  ///< failures re-joining at the next tick

    double waiting() const {
        double s = reentry;
        for (double x : ring) s += x;
        return s;
    }
};

}  // namespace

WaitMechanism::WaitMechanism(std::vector<WaitOption> menu_a, std::vector<WaitOption> menu_b)
    : menu_a_(std::move(menu_a)), menu_b_(std::move(menu_b)) {
    if (menu_a_.empty() || menu_b_.empty()) throw ParameterError("each wait menu needs at least one option");
    for (const auto& o : menu_a_) validate(o);
    for (const auto& o : menu_b_) validate(o);
}

double expected_discount(const WaitOption& opt, double rho) {
    check_rho(rho);
    validate(opt);
    if (opt.prob == 0.0) return 0.0;
    return opt.prob * std::exp(-rho * opt.wait);
}

Mechanism static_equivalent(const WaitMechanism& wm, double rho) {
    return Mechanism(static_menu(wm.menu_a(), rho), static_menu(wm.menu_b(), rho));
}

SteadyState steady_state_check(const WaitMechanism& wm, const DensityModel& model, double mu_a, double mu_b,
                               double rho) {
    SteadyState s;
    s.masses = demand(static_equivalent(wm, rho), model);
    s.ok = s.masses.mass_a <= mu_a + 1e-6 && s.masses.mass_b <= mu_b + 1e-6;
    return s;
}

WaitFlows option_flows(const WaitMechanism& wm, const DensityModel& model, double rho) {
    Mechanism mech = static_equivalent(wm, rho);
    auto om = option_masses(mech, model);
    return {spread(wm.menu_a(), mech.menu_a(), om.a, rho), spread(wm.menu_b(), mech.menu_b(), om.b, rho)};
}

std::vector<TrajectoryRow> simulate(const WaitMechanism& wm, const SimConfig& cfg, std::uint64_t) {
    check_rho(cfg.rho);
    if (!(cfg.dt > 0.0)) throw ParameterError("dt must be positive");
    if (!(cfg.horizon > 0.0)) throw ParameterError("horizon must be positive");
    if (!(cfg.mu_a >= 0.0 && cfg.mu_b >= 0.0 && cfg.mu_a + cfg.mu_b <= 1.0 + 1e-12))
        throw ParameterError("supplies must be non-negative and sum to at most 1");
    double min_wait = 0.0;
    for (const auto* menu : {&wm.menu_a(), &wm.menu_b()})
        for (const auto& o : *menu)
            if (o.wait > 0.0) min_wait = min_wait == 0.0 ? o.wait : std::min(min_wait, o.wait);
    if (min_wait > 0.0 && cfg.dt > min_wait / 4.0 + 1e-15)
        throw ParameterError("dt must not exceed a quarter of the shortest positive wait");

    auto flows = option_flows(wm, cfg.model, cfg.rho);
    auto lanes_for = [&](const std::vector<WaitOption>& menu, const std::vector<double>& flow) {
        std::vector<Lane> lanes;
        for (std::size_t i = 0; i < menu.size(); ++i) {
            Lane l;
            l.wait_ticks = static_cast<std::size_t>(std::llround(menu[i].wait / cfg.dt));
            l.prob = menu[i].prob;
            l.inflow = flow[i] * cfg.dt;
            l.ring.assign(l.wait_ticks + 1, 0.0);
            lanes.push_back(std::move(l));
        }
        return lanes;
    };
    std::vector<Lane> lanes_a = lanes_for(wm.menu_a(), flows.a);
    std::vector<Lane> lanes_b = lanes_for(wm.menu_b(), flows.b);
    double backlog_a = 0.0;
    double backlog_b = 0.0;

    auto step = [](std::vector<Lane>& lanes, std::size_t tick, double& backlog, double supply) {
        for (auto& l : lanes) {
            std::size_t len = l.ring.size();
            // Arrivals and re-entrants join now and become eligible wait_ticks later.
            l.ring[(tick + l.wait_ticks) % len] += l.inflow + l.reentry;
            l.reentry = 0.0;
            double& eligible = l.ring[tick % len];
            backlog += l.prob * eligible;
            l.reentry = (1.0 - l.prob) * eligible;
            eligible = 0.0;
        }
        double served = std::min(backlog, supply);
        backlog -= served;
        return served;
    };
    auto queue = [](const std::vector<Lane>& lanes, double backlog) {
        double q = backlog;
        for (const auto& l : lanes) q += l.waiting();
        return q;
    };

    auto ticks = static_cast<std::size_t>(std::ceil(cfg.horizon / cfg.dt - 1e-9));
    std::vector<TrajectoryRow> rows;
    rows.reserve(ticks);
    for (std::size_t k = 0; k < ticks; ++k) {
        TrajectoryRow r;
        r.time = (k + 1) * cfg.dt;
        r.served_a = step(lanes_a, k, backlog_a, cfg.mu_a * cfg.dt);
        r.served_b = step(lanes_b, k, backlog_b, cfg.mu_b * cfg.dt);
        r.queue_a = queue(lanes_a, backlog_a);
        r.queue_b = queue(lanes_b, backlog_b);
        rows.push_back(r);
    }
    return rows;
}

double burn_in_time(const WaitMechanism& wm, double dt) {
    double longest = 0.0;
    for (const auto* menu : {&wm.menu_a(), &wm.menu_b()})
        for (const auto& o : *menu)
            if (o.prob > 0.0) longest = std::max(longest, (o.wait + dt) / o.prob);
    return 5.0 * longest;
}

Demand mean_service_rate(const std::vector<TrajectoryRow>& rows, double dt, double from) {
    Demand d;
    std::size_t n = 0;
    for (const auto& r : rows)
        if (r.time >= from) {
            d.mass_a += r.served_a;
            d.mass_b += r.served_b;
            ++n;
        }
    if (n == 0) return d;
    d.mass_a /= n * dt;
    d.mass_b /= n * dt;
    return d;
}

}  // namespace ordeal
