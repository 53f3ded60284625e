#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ordeal/density.hpp"
#include "ordeal/pwl.hpp"

namespace ordeal {

/// A quality/ordeal pair offered for one good.
struct MenuOption {
    double quality = 1.0;
    double ordeal = 0.0;
    friend bool operator==(const MenuOption&, const MenuOption&) = default;
};

/// Drops weakly dominated options and sorts by quality, then ordeal.
std::vector<MenuOption> canonical_menu(std::vector<MenuOption> menu);

/// Two canonical menus, one per good.
class Mechanism {
public:
    Mechanism(std::vector<MenuOption> menu_a, std::vector<MenuOption> menu_b);

    std::span<const MenuOption> menu_a() const { return menu_a_; }
    std::span<const MenuOption> menu_b() const { return menu_b_; }

    /// Posted-ordeal mechanism [(1, c_a)], [(1, c_b)].
    static Mechanism posted(double c_a, double c_b) { return Mechanism({{1.0, c_a}}, {{1.0, c_b}}); }

    friend bool operator==(const Mechanism&, const Mechanism&) = default;

private:
    std::vector<MenuOption> menu_a_;
    std::vector<MenuOption> menu_b_;
};

struct BestOption {
    double utility = 0.0;
    std::optional<std::size_t> index;
};

/// Best response within one menu; index is empty when declining is strictly best.
BestOption best_option(std::span<const MenuOption> menu, double value);

/// Upper envelope of {quality * v - ordeal, 0} on [0, 1].
PwlConvex indirect_utility(std::span<const MenuOption> menu);

enum class Good { A, B, none };

/// Indifference between goods at positive utility goes to A.
Good choose_good(const Mechanism& mech, double a, double b);

struct Demand {
    double mass_a = 0.0;
    double mass_b = 0.0;
};

/// Everything that integrates over the choice regions of a mechanism.
struct MechanismStats {
    Demand demand;
    double welfare = 0.0;
    double revenue = 0.0;
    double efficiency = 0.0;
};

MechanismStats evaluate(const Mechanism& mech, const DensityModel& model);

Demand demand(const Mechanism& mech, const DensityModel& model);
double direct_welfare(const Mechanism& mech, const DensityModel& model);
double revenue(const Mechanism& mech, const DensityModel& model);
/// direct_welfare + gamma * revenue, gamma in [0, 1].
double objective_wr(const Mechanism& mech, const DensityModel& model, double gamma);
double efficiency(const Mechanism& mech, const DensityModel& model);

/// Mass choosing each option of each canonical menu (index-aligned with menu_a/menu_b).
struct OptionMasses {
    std::vector<double> a;
    std::vector<double> b;
};
OptionMasses option_masses(const Mechanism& mech, const DensityModel& model);

}  // namespace ordeal
