#include "ordeal/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>

#include "ordeal/error.hpp"
#include "ordeal/implement.hpp"
#include "ordeal/io.hpp"
#include "ordeal/market.hpp"
#include "ordeal/optimize.hpp"

namespace ordeal::cli {

namespace fs = std::filesystem;
using io::csv_number;
using io::toml_number;

namespace {

const io::TomlTable kEmpty;

const io::TomlTable& section(const io::TomlTable& root, const std::string& name) {
    const auto* t = root.table(name);
    return t ? *t : kEmpty;
}

void require_open_unit(double x, const std::string& field) {
    if (!(x > 0.0 && x < 1.0)) throw ValidationError(field + ": must lie in (0, 1)");
}

int as_int(double x, const std::string& field) {
    if (x != std::floor(x) || std::abs(x) > 1e9) throw ValidationError(field + ": expected an integer");
    return static_cast<int>(x);
}

std::vector<WaitOption> wait_menu(const io::TomlTable& t, const std::string& key) {
    std::vector<WaitOption> out;
    if (!t.has(key)) return out;
    auto rows = io::get_rows(t, key, "waitlist." + key, 3);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        WaitOption o{rows[i][0], rows[i][1], rows[i][2]};
        std::string field = "waitlist." + key + "[" + std::to_string(i) + "]";
        if (!(o.ordeal >= 0.0)) throw ValidationError(field + ": ordeal must be >= 0");
        if (!(o.wait >= 0.0)) throw ValidationError(field + ": wait must be >= 0");
        if (!(o.prob >= 0.0 && o.prob <= 1.0)) throw ValidationError(field + ": prob must lie in [0, 1]");
        out.push_back(o);
    }
    if (out.empty()) throw ValidationError("waitlist." + key + ": must not be empty");
    return out;
}

std::string join(const fs::path& dir, const std::string& name) { return (dir / name).string(); }

std::string bool_text(bool b) { return b ? "true" : "false"; }

void solve(const Scenario& s, const RunOptions& o, const fs::path& dir, std::ostream& out) {
    auto r = market_clearing_ordeals(s.model, s.mu_a, s.mu_b, o.tol);
    Mechanism mech = Mechanism::posted(r.c_a, r.c_b);
    auto st = evaluate(mech, s.model);
    std::string report = io::clearing_to_toml(r);
    report += "welfare = " + toml_number(st.welfare) + "\n";
    report += "revenue = " + toml_number(st.revenue) + "\n";
    report += "efficiency = " + toml_number(st.efficiency) + "\n";
    report += io::mechanism_to_toml(mech);
    io::write_file(join(dir, "solve.toml"), report);
    io::write_file(join(dir, "mechanism.toml"), io::mechanism_to_toml(mech));
    if (r.c_a < 1.0 && r.c_b < 1.0) {
        try {
            auto bundle = implement_boundary(extract_boundary(mech));
            io::write_file(join(dir, "bundle.toml"), io::bundle_to_toml(bundle));
            io::write_file(join(dir, "bundle.csv"), io::bundle_to_csv(bundle, s.model));
        } catch (const DegenerateMechanismError&) {
        }
    }
    out << "c_a = " << csv_number(r.c_a) << "\nc_b = " << csv_number(r.c_b) << "\nwelfare = "
        << csv_number(st.welfare) << "\n";
}

void sweep(const Scenario& s, const fs::path& dir, std::ostream& out) {
    auto r = slope_sweep(s.model, s.mu_a, s.mu_b, s.slopes);
    std::string csv = "slope,a_low,b_low,welfare,feasible\n";
    for (const auto& row : r.rows)
        csv += csv_number(row.slope) + "," + csv_number(row.a_low) + "," + csv_number(row.b_low) + "," +
               csv_number(row.welfare) + "," + (row.feasible ? "1" : "0") + "\n";
    io::write_file(join(dir, "sweep.csv"), csv);
    auto best = r.argmax();
    if (best < r.rows.size())
        out << "argmax slope = " << csv_number(r.rows[best].slope) << "\nwelfare = "
            << csv_number(r.rows[best].welfare) << "\n";
    else
        out << "no feasible slope\n";
}

void search(const Scenario& s, const RunOptions& o, const fs::path& dir, std::ostream& out) {
    SearchOptions so;
    so.restarts = s.restarts;
    auto r = local_boundary_search(s.model, s.mu_a, s.mu_b, s.n_knots, o.seed, so);
    io::write_file(join(dir, "boundary.toml"), io::boundary_to_toml(r.best_boundary) +
                                                   "welfare = " + toml_number(r.best_welfare) + "\n" +
                                                   "converged = " + bool_text(r.converged) + "\n");
    std::string trace = "iteration,welfare\n";
    for (const auto& t : r.trace) trace += std::to_string(t.iteration) + "," + csv_number(t.welfare) + "\n";
    io::write_file(join(dir, "trace.csv"), trace);
    std::string diag = "a,rate,floor_violation\n";
    for (const auto& d : stationarity_diagnostic(r.best_boundary, s.model))
        diag += csv_number(d.a) + "," + csv_number(d.rate) + "," + (d.floor_violation ? "1" : "0") + "\n";
    io::write_file(join(dir, "diagnostic.csv"), diag);
    out << "welfare = " << csv_number(r.best_welfare) << "\nmax deviation = "
        << csv_number(max_deviation_from_diagonal(r.best_boundary)) << "\nconverged = " << bool_text(r.converged)
        << "\n";
}

void conditions(const Scenario& s, const fs::path& dir, std::ostream& out) {
    auto r = check_assumption1(s.model, s.resolution);
    std::string t;
    t += "passes = " + bool_text(r.passes) + "\n";
    t += "strict_direction = \"" + to_string(r.strict_direction) + "\"\n";
    t += "strict_direction_b = \"" + to_string(r.strict_direction_b) + "\"\n";
    t += "continuity_ok = " + bool_text(r.continuity_ok) + "\n";
    t += "resolution = " + std::to_string(r.resolution) + "\n";
    t += "violation_count = " + std::to_string(r.violations.size()) + "\n";
    t += "violations = [";
    for (std::size_t i = 0; i < r.violations.size() && i < 50; ++i) {
        const auto& v = r.violations[i];
        t += std::string(i ? ", " : "") + "[" + toml_number(v.at.a) + ", " + toml_number(v.at.b) + "]";
    }
    t += "]\nviolation_details = [";
    for (std::size_t i = 0; i < r.violations.size() && i < 50; ++i)
        t += std::string(i ? ", " : "") + "\"" + r.violations[i].detail + "\"";
    t += "]\n";
    io::write_file(join(dir, "conditions.toml"), t);
    out << "passes = " << bool_text(r.passes) << "\ncontinuity_ok = " << bool_text(r.continuity_ok)
        << "\nstrict_direction = " << to_string(r.strict_direction) << "\n";
}

void example1(const Scenario& s, const fs::path& dir, std::ostream& out) {
    std::string csv = "epsilon,k,w_ordeal,w_damage,gap\n";
    for (auto [eps, k] : s.example1_cases) {
        auto c = example1_compare(eps, k);
        csv += csv_number(eps) + "," + csv_number(k) + "," + csv_number(c.w_ordeal) + "," + csv_number(c.w_damage) +
               "," + csv_number(c.w_damage - c.w_ordeal) + "\n";
    }
    io::write_file(join(dir, "example1.csv"), csv);
    out << csv;
}

void single_good(const Scenario& s, const fs::path& dir, std::ostream& out) {
    auto c = single_good_compare(Density1D(s.f_bins), s.b_out, s.cutoff);
    std::string csv = "b_out,cutoff,w_ordeal,w_damage\n" + csv_number(s.b_out) + "," + csv_number(s.cutoff) + "," +
                      csv_number(c.w_ordeal) + "," + csv_number(c.w_damage) + "\n";
    io::write_file(join(dir, "single_good.csv"), csv);
    out << csv;
}

void waitlist(const Scenario& s, const RunOptions& o, const fs::path& dir, std::ostream& out) {
    std::vector<WaitOption> a = s.wait_a;
    std::vector<WaitOption> b = s.wait_b;
    if (a.empty() || b.empty()) {
        auto r = market_clearing_ordeals(s.model, s.mu_a, s.mu_b, o.tol);
        if (a.empty()) a = {{r.c_a, 0.0, 1.0}};
        if (b.empty()) b = {{r.c_b, 0.0, 1.0}};
    }
    WaitMechanism wm(a, b);
    SimConfig cfg{s.rho, s.dt, s.horizon, s.mu_a, s.mu_b, s.model};
    auto ss = steady_state_check(wm, s.model, s.mu_a, s.mu_b, s.rho);
    auto rows = simulate(wm, cfg, o.seed);
    std::string csv = "time,queue_a,queue_b,served_a,served_b\n";
    for (const auto& r : rows)
        csv += csv_number(r.time) + "," + csv_number(r.queue_a) + "," + csv_number(r.queue_b) + "," +
               csv_number(r.served_a) + "," + csv_number(r.served_b) + "\n";
    io::write_file(join(dir, "trajectory.csv"), csv);
    double burn = burn_in_time(wm, s.dt);
    auto rate = mean_service_rate(rows, s.dt, burn);
    std::string t = "steady_state_ok = " + bool_text(ss.ok) + "\n";
    t += "masses = [" + toml_number(ss.masses.mass_a) + ", " + toml_number(ss.masses.mass_b) + "]\n";
    t += "burn_in = " + toml_number(burn) + "\n";
    t += "service_rate = [" + toml_number(rate.mass_a) + ", " + toml_number(rate.mass_b) + "]\n";
    io::write_file(join(dir, "steady_state.toml"), t);
    out << t;
}

void wr_sweep(const Scenario& s, const RunOptions& o, const fs::path& dir, std::ostream& out) {
    auto r = market_clearing_ordeals(s.model, s.mu_a, s.mu_b, o.tol);
    auto st = evaluate(Mechanism::posted(r.c_a, r.c_b), s.model);
    std::string csv = "gamma,welfare,revenue,objective\n";
    for (double g : s.gammas)
        csv += csv_number(g) + "," + csv_number(st.welfare) + "," + csv_number(st.revenue) + "," +
               csv_number(st.welfare + g * st.revenue) + "\n";
    io::write_file(join(dir, "wr.csv"), csv);
    out << csv;
}

}  // namespace

std::vector<std::string> commands() {
    return {"solve", "sweep", "search", "check-conditions", "example1", "single-good", "waitlist-sim", "wr-sweep"};
}

Scenario parse_scenario(const std::string& text, const std::string& base_dir, const RunOptions& opts) {
    auto root = io::parse_toml(text);
    Scenario s;
    const auto& dist = section(root, "distribution");
    s.distribution = io::get_string(dist, "kind", "distribution.kind", "uniform");
    if (s.distribution == "uniform") {
        s.model = DensityModel::uniform();
    } else if (s.distribution == "example1") {
        double eps = io::get_number(dist, "epsilon", "distribution.epsilon", 0.05);
        double k = io::get_number(dist, "k", "distribution.k", 0.3);
        if (!(eps > 0.0 && eps < 0.5)) throw ValidationError("distribution.epsilon: must lie in (0, 0.5)");
        if (!(k > 0.0 && k < 1.0 - eps)) throw ValidationError("distribution.k: must lie in (0, 1 - epsilon)");
        s.model = DensityModel::example1(eps, k);
    } else if (s.distribution == "grid") {
        std::string path = io::get_string(dist, "path", "distribution.path", "");
        if (path.empty()) throw ValidationError("distribution.path: missing");
        fs::path p(path);
        if (p.is_relative()) p = fs::path(base_dir) / p;
        s.model = io::grid_from_csv(io::read_file(p.string()));
    } else {
        throw ValidationError("distribution.kind: expected uniform, example1 or grid");
    }
    if (io::get_bool(dist, "discretize", "distribution.discretize", false) && s.distribution != "grid") {
        DensityModel closed = s.model;
        s.model = DensityModel::custom([closed](double a, double b) { return closed.density(a, b); }, opts.grid);
    }

    const auto& supply = section(root, "supply");
    s.mu_a = io::get_number(supply, "mu_a", "supply.mu_a", s.mu_a);
    s.mu_b = io::get_number(supply, "mu_b", "supply.mu_b", s.mu_b);
    if (!(s.mu_a > 0.0 && s.mu_a <= 1.0)) throw ValidationError("supply.mu_a: must lie in (0, 1]");
    if (!(s.mu_b > 0.0 && s.mu_b <= 1.0)) throw ValidationError("supply.mu_b: must lie in (0, 1]");
    if (s.mu_a + s.mu_b > 1.0 + 1e-12) throw ValidationError("supply.mu_b: mu_a + mu_b must not exceed 1");

    const auto& sw = section(root, "sweep");
    if (sw.has("slopes")) {
        s.slopes = io::get_numbers(sw, "slopes", "sweep.slopes");
        for (std::size_t i = 0; i < s.slopes.size(); ++i)
            if (!(s.slopes[i] > 0.0)) throw ValidationError("sweep.slopes[" + std::to_string(i) + "]: must be positive");
    } else {
        for (int i = 0; i <= 15; ++i) s.slopes.push_back(0.5 + 0.1 * i);
    }

    const auto& se = section(root, "search");
    s.n_knots = as_int(io::get_number(se, "n_knots", "search.n_knots", 4), "search.n_knots");
    if (s.n_knots < 2 || s.n_knots > 16) throw ValidationError("search.n_knots: must lie in [2, 16]");
    s.restarts = as_int(io::get_number(se, "restarts", "search.restarts", 5), "search.restarts");
    if (s.restarts < 1) throw ValidationError("search.restarts: must be positive");

    const auto& co = section(root, "conditions");
    int res = as_int(io::get_number(co, "resolution", "conditions.resolution", 64), "conditions.resolution");
    if (res < 8) throw ValidationError("conditions.resolution: must be at least 8");
    s.resolution = static_cast<std::size_t>(res);

    const auto& ex = section(root, "example1");
    if (ex.has("cases")) {
        s.example1_cases.clear();
        auto rows = io::get_rows(ex, "cases", "example1.cases", 2);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            std::string f = "example1.cases[" + std::to_string(i) + "]";
            if (!(rows[i][0] > 0.0 && rows[i][0] <= 0.1)) throw ValidationError(f + ": epsilon must lie in (0, 0.1]");
            if (!(rows[i][1] > 0.0 && rows[i][1] < 1.0 - rows[i][0]))
                throw ValidationError(f + ": k must lie in (0, 1 - epsilon)");
            s.example1_cases.push_back({rows[i][0], rows[i][1]});
        }
    }

    const auto& sg = section(root, "single_good");
    s.b_out = io::get_number(sg, "b_out", "single_good.b_out", s.b_out);
    s.cutoff = io::get_number(sg, "cutoff", "single_good.cutoff", s.cutoff);
    require_open_unit(s.b_out, "single_good.b_out");
    require_open_unit(s.cutoff, "single_good.cutoff");
    if (s.cutoff <= s.b_out) throw ValidationError("single_good.cutoff: must exceed b_out");
    if (sg.has("bins")) {
        s.f_bins = io::get_numbers(sg, "bins", "single_good.bins");
        double total = 0.0;
        for (double b : s.f_bins) {
            if (!(b >= 0.0)) throw ValidationError("single_good.bins: must be non-negative");
            total += b;
        }
        if (s.f_bins.empty() || !(total > 0.0)) throw ValidationError("single_good.bins: must carry positive mass");
    }

    const auto& wl = section(root, "waitlist");
    s.rho = io::get_number(wl, "rho", "waitlist.rho", s.rho);
    s.dt = io::get_number(wl, "dt", "waitlist.dt", s.dt);
    s.horizon = io::get_number(wl, "horizon", "waitlist.horizon", s.horizon);
    if (!(s.rho > 0.0)) throw ValidationError("waitlist.rho: must be positive");
    if (!(s.dt > 0.0)) throw ValidationError("waitlist.dt: must be positive");
    if (!(s.horizon > s.dt)) throw ValidationError("waitlist.horizon: must exceed dt");
    s.wait_a = wait_menu(wl, "menu_a");
    s.wait_b = wait_menu(wl, "menu_b");
    double min_wait = 0.0;
    for (const auto* m : {&s.wait_a, &s.wait_b})
        for (const auto& w : *m)
            if (w.wait > 0.0) min_wait = min_wait == 0.0 ? w.wait : std::min(min_wait, w.wait);
    if (min_wait > 0.0 && s.dt > min_wait / 4.0) throw ValidationError("waitlist.dt: must not exceed a quarter of the shortest wait");

    const auto& wr = section(root, "wr");
    if (wr.has("gammas")) {
        s.gammas = io::get_numbers(wr, "gammas", "wr.gammas");
        for (std::size_t i = 0; i < s.gammas.size(); ++i)
            if (!(s.gammas[i] >= 0.0 && s.gammas[i] <= 1.0))
                throw ValidationError("wr.gammas[" + std::to_string(i) + "]: must lie in [0, 1]");
    }
    return s;
}

void run(const std::string& command, const Scenario& s, const RunOptions& o, std::ostream& out) {
    fs::path dir(o.out_dir);
    fs::create_directories(dir);
    if (command == "solve") solve(s, o, dir, out);
    else if (command == "sweep") sweep(s, dir, out);
    else if (command == "search") search(s, o, dir, out);
    else if (command == "check-conditions") conditions(s, dir, out);
    else if (command == "example1") example1(s, dir, out);
    else if (command == "single-good") single_good(s, dir, out);
    else if (command == "waitlist-sim") waitlist(s, o, dir, out);
    else if (command == "wr-sweep") wr_sweep(s, o, dir, out);
    else throw ValidationError("command: unknown '" + command + "'");
}

int execute(const std::string& command, const std::string& scenario_path, const RunOptions& opts,
            std::ostream& out, std::ostream& err) {
    try {
        if (!(opts.tol > 0.0)) throw ValidationError("--tol: must be positive");
        if (opts.grid < 8) throw ValidationError("--grid: must be at least 8");
        std::string text = scenario_path.empty() ? std::string() : io::read_file(scenario_path);
        std::string base = scenario_path.empty() ? "." : fs::path(scenario_path).parent_path().string();
        Scenario s = parse_scenario(text, base.empty() ? "." : base, opts);
        run(command, s, opts, out);
        return 0;
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace ordeal::cli
