#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ordeal/boundary.hpp"
#include "ordeal/density.hpp"

namespace ordeal {

struct SweepRow {
    double slope = 0.0;
    double a_low = 0.0;
    double b_low = 0.0;
    double welfare = 0.0;  ///< NaN when infeasible
    bool feasible = false;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    /// Index of the best feasible row; rows.size() when none is feasible.
    std::size_t argmax() const;
};

struct TracePoint {
    int iteration = 0;
    double welfare = 0.0;
};

struct SearchResult {
    Boundary best_boundary;
    double best_welfare = 0.0;
    std::vector<TracePoint> trace;
    bool converged = false;
};

struct SearchOptions {
    int restarts = 5;
    double initial_step = 0.05;
    double min_step = 1e-4;
    double min_gain = 1e-7;
    int max_iterations = 400;
};

/// Line of the given slope allocating exactly (mu_a, mu_b); InfeasibleError when none exists.
Boundary supply_preserving_linear(const DensityModel& model, double mu_a, double mu_b, double slope);

SweepResult slope_sweep(const DensityModel& model, double mu_a, double mu_b, std::span<const double> slopes);

/// Welfare of the optimal implementation of z.
double boundary_welfare(const Boundary& z, const DensityModel& model);

/// Multi-start coordinate ascent over boundaries with n_knots knots, holding both supplies fixed.
SearchResult local_boundary_search(const DensityModel& model, double mu_a, double mu_b, int n_knots,
                                   std::uint64_t seed, const SearchOptions& opts = {});

/// Largest |b - a| over the knots.
double max_deviation_from_diagonal(const Boundary& z);

/// Piecewise-constant density on [0, 1] with equal-width bins.
class Density1D {
public:
    static Density1D uniform() { return Density1D({1.0}); }
    explicit Density1D(std::vector<double> bins);

    double mass(double lo, double hi) const;
    /// Integral of v f(v) over [lo, hi].
    double moment(double lo, double hi) const;
    std::span<const double> bins() const { return bins_; }

private:
    template <class F>
    double integrate(double lo, double hi, F antiderivative) const;
    std::vector<double> bins_;
};

struct Comparison {
    double w_ordeal = 0.0;
    double w_damage = 0.0;
};

/// One good plus an outside option worth b_out: deterrence by ordeal versus by damage.
Comparison single_good_compare(const Density1D& f_a, double b_out, double cutoff);

/// Ordeal-only versus damage-ray mechanism on the three-band density.
Comparison example1_compare(double epsilon, double k);

struct DiagnosticPoint {
    double a = 0.0;
    double rate = 0.0;  ///< NaN where the density is below the floor
    bool floor_violation = false;
};

/// F_{A|B}/f_{A|B} along the boundary at `samples` evenly spaced interior points.
std::vector<DiagnosticPoint> stationarity_diagnostic(const Boundary& z, const DensityModel& model,
                                                     int samples = 64);

/// True when the finite rates are strictly increasing or strictly decreasing.
bool strictly_monotone(std::span<const DiagnosticPoint> profile);

}  // namespace ordeal
