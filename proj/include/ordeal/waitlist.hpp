#pragma once

#include <cstdint>
#include <vector>

#include "ordeal/density.hpp"
#include "ordeal/mechanism.hpp"

namespace ordeal {

/// A waitlist option: pay an ordeal, wait, then receive the good with probability prob.
struct WaitOption {
    double ordeal = 0.0;
    double wait = 0.0;
    double prob = 1.0;
    friend bool operator==(const WaitOption&, const WaitOption&) = default;
};

class WaitMechanism {
public:
    WaitMechanism(std::vector<WaitOption> menu_a, std::vector<WaitOption> menu_b);
    const std::vector<WaitOption>& menu_a() const { return menu_a_; }
    const std::vector<WaitOption>& menu_b() const { return menu_b_; }

private:
    std::vector<WaitOption> menu_a_;
    std::vector<WaitOption> menu_b_;
};

struct SimConfig {
    double rho = 0.1;
    double dt = 0.01;
    double horizon = 10.0;
    double mu_a = 0.25;
    double mu_b = 0.25;
    DensityModel model;
};

/// p e^{-rho t}.
double expected_discount(const WaitOption& opt, double rho);

/// Static menus with quality p e^{-rho t} and the same ordeals.
Mechanism static_equivalent(const WaitMechanism& wm, double rho);

struct SteadyState {
    bool ok = false;
    Demand masses;
};

SteadyState steady_state_check(const WaitMechanism& wm, const DensityModel& model, double mu_a, double mu_b,
                               double rho);

struct TrajectoryRow {
    double time = 0.0;
    double queue_a = 0.0;
    double queue_b = 0.0;
    double served_a = 0.0;  ///< mass served during the tick
    double served_b = 0.0;
};

/// Mass flow choosing each waitlist option (index-aligned with the menus).
struct WaitFlows {
    std::vector<double> a;
    std::vector<double> b;
};
WaitFlows option_flows(const WaitMechanism& wm, const DensityModel& model, double rho);

/// Deterministic fluid simulation; the seed is accepted for interface stability and unused.
std::vector<TrajectoryRow> simulate(const WaitMechanism& wm, const SimConfig& cfg, std::uint64_t seed = 0);

/// Five times the longest expected time to service, counting the one-tick re-entry delay.
double burn_in_time(const WaitMechanism& wm, double dt);

/// Mean served mass per unit time over rows with time >= from.
Demand mean_service_rate(const std::vector<TrajectoryRow>& rows, double dt, double from);

}  // namespace ordeal
