#include "krein/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <thread>

#include "json.hpp"
#include "krein/errors.hpp"
#include "krein/exact.hpp"
#include "krein/perturbation.hpp"
#include "krein/spectra.hpp"

namespace krein {

using json = nlohmann::json;

std::string format_double(double x) {
    char b[40];
    std::snprintf(b, sizeof b, "%.17g", x);
    return b;
}

int thread_count() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("KREIN_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<int>(std::min<long>(v, 1024));
    }
    return hw;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return 2;
    return 3;
}

std::string error_json(const std::exception& e) {
    json j;
    if (const auto* ce = dynamic_cast<const ConfigError*>(&e)) {
        j["error"] = ce->kind();
        j["message"] = ce->what();
        j["path"] = ce->path();
        j["line"] = ce->line();
    } else if (const auto* ke = dynamic_cast<const Error*>(&e)) {
        j["error"] = ke->kind();
        j["message"] = ke->what();
    } else {
        j["error"] = "internal";
        j["message"] = e.what();
    }
    j["exit_code"] = exit_code_for(e);
    return j.dump();
}

namespace {

PrincipalMatrix make_pm(const RunConfig& c) { return PrincipalMatrix(c.model, PhiOptions{c.quad_order}); }

BoundStateResult solve_states(const PrincipalMatrix& pm, const RunConfig& c) {
    if (c.window) return find_bound_states(pm, c.window->e_min, c.window->e_max, c.tol);
    return find_bound_states(pm, c.tol);
}

bool flat_two_center_oracle(const ModelSpec& m) {
    return m.size() == 2 && (m.family == Family::Point1D || m.family == Family::Point2D || m.family == Family::Point3D);
}

TwoCenterExact oracle_for(Family f, double param, double a) {
    switch (f) {
        case Family::Point1D: return exact_two_center_1d(param, a);
        case Family::Point2D: return numeric_two_center_2d(param, a);
        default: return exact_two_center_3d(param, a);
    }
}

}  // namespace

std::string cmd_solve(const RunConfig& c) {
    const PrincipalMatrix pm = make_pm(c);
    const BoundStateResult r = solve_states(pm, c);
    if (r.states.empty())
        throw NoBoundStatesError("no bound states in window [" + format_double(r.e_min) + ", " +
                                 format_double(r.e_max) + "]");
    std::vector<double> grid;
    const int ng = 41;
    for (int i = 0; i < ng; ++i) grid.push_back(r.e_min + (r.e_max - r.e_min) * i / (ng - 1));
    const FlowResult flow = branch_flow(pm, grid);

    json j;
    j["command"] = "solve";
    j["family"] = c.family;
    j["window"] = {{"e_min", r.e_min}, {"e_max", r.e_max}};
    json energies = json::array(), states = json::array();
    for (const auto& s : r.states) {
        energies.push_back(s.energy);
        states.push_back({{"energy", s.energy},
                          {"branch", s.branch},
                          {"eigenvector", s.eigenvector},
                          {"alpha", s.alpha},
                          {"domega_dE", s.domega_dE},
                          {"omega_residual", s.omega_residual}});
    }
    j["energies"] = energies;
    j["states"] = states;
    j["warnings"] = r.warnings;
    j["branch_diagnostics"] = {{"grid_points", ng},
                               {"monotonicity_violations", flow.monotonicity_violations},
                               {"ambiguous_matches", flow.ambiguous_matches},
                               {"messages", flow.diagnostics}};
    return j.dump(2) + "\n";
}

std::string cmd_split(const RunConfig& c) {
    const PrincipalMatrix pm = make_pm(c);
    const ModelSpec& m = c.model;
    json j;
    j["command"] = "split";
    j["family"] = c.family;
    const auto& par = uses_couplings(m.family) ? m.couplings : m.binding_energies;
    if (m.size() == 2 && par[0] == par[1]) {
        const DegenerateSplitting ds = degenerate_splitting(pm);
        j["mode"] = "degenerate";
        json d = {{"binding_energy", ds.binding_energy}, {"phi12", ds.phi12},
                  {"e_plus", ds.e_plus},                 {"e_minus", ds.e_minus},
                  {"splitting", ds.splitting},           {"first_order", ds.first_order},
                  {"asymptotic", ds.asymptotic},         {"half_separation", ds.half_separation}};
        if (flat_two_center_oracle(m)) {
            const double param = m.family == Family::Point1D ? m.couplings[0] : std::sqrt(-m.binding_energies[0]);
            const TwoCenterExact ex = oracle_for(m.family, param, 0.5 * pm.separation(0, 1));
            d["oracle"] = {{"e_plus", ex.e_plus}, {"e_minus", ex.e_minus}, {"splitting", ex.splitting}};
            d["relative_error"] = std::fabs(ds.asymptotic - ex.splitting) / ex.splitting;
        }
        j["degenerate"] = d;
        return j.dump(2) + "\n";
    }
    j["mode"] = "nondegenerate";
    json levels = json::array();
    for (std::size_t k = 0; k < m.size(); ++k) {
        const SplittingReport r = perturbative_shift(pm, k);
        json l = {{"branch", k},
                  {"zeroth_order_energy", r.zeroth_order_energy},
                  {"shift", r.shift},
                  {"log_abs_shift", r.log_abs_shift},
                  {"dphi_kk", r.dphi_kk},
                  {"dominance_ratio", r.dominance_ratio}};
        json parts = json::array();
        for (const auto& t : r.contributions)
            parts.push_back({{"partner", t.partner}, {"value", t.value}, {"log_abs", t.log_abs}});
        l["contributions"] = parts;
        if (m.size() > 1) {
            if (is_curve_family(m.family)) {
                const CurveShift cs = curve_shift(pm, k);
                l["curve"] = {{"com_form", cs.com_form},
                              {"quadrature_form", cs.quadrature_form},
                              {"ratio", cs.ratio},
                              {"com_distances", cs.com_distances}};
            } else {
                l["closed_form"] = family_shift_closed_form(pm, k);
            }
        }
        levels.push_back(l);
    }
    j["levels"] = levels;
    return j.dump(2) + "\n";
}

std::string cmd_sweep(const RunConfig& c, int threads) {
    if (!c.sweep) throw ConfigError("sweep command needs a 'sweep' section", "/sweep");
    const ModelSpec& m = c.model;
    if (m.family != Family::Point1D && m.family != Family::Point2D && m.family != Family::Point3D)
        throw ConfigError("sweep supports Point1D, Point2D and Point3D", "/family");
    const SweepSpec& sw = *c.sweep;
    if (sw.variable == "lambda" && m.family != Family::Point1D)
        throw ConfigError("sweep variable 'lambda' applies to Point1D only", "/sweep/variable");
    if (sw.variable == "mu" && m.family == Family::Point1D)
        throw ConfigError("sweep variable 'mu' applies to Point2D/Point3D only", "/sweep/variable");
    const double base_param =
        m.family == Family::Point1D ? m.couplings.at(0) : std::sqrt(-m.binding_energies.at(0));
    double base_a = 0;
    if (m.size() >= 2) base_a = 0.5 * distance(m.points[0], m.points[1]);
    if (sw.variable != "a" && !(base_a > 0))
        throw ConfigError("sweep over '" + sw.variable + "' needs two centers to fix the separation", "/centers");

    const int n = sw.steps;
    std::vector<std::string> rows(n);
    std::vector<std::exception_ptr> errs(n);
    auto work = [&](int i) {
        const double v = sw.from + (sw.to - sw.from) * i / (n - 1);
        const double a = sw.variable == "a" ? v : base_a;
        const double p = sw.variable == "a" ? base_param : v;
        ModelSpec mm;
        mm.family = m.family;
        mm.degenerate = true;
        const int dim = ambient_dimension(m.family);
        std::vector<double> x0(dim, 0.0), x1(dim, 0.0);
        x0[0] = -a;
        x1[0] = a;
        mm.points = {FlatPoint{x0}, FlatPoint{x1}};
        if (m.family == Family::Point1D)
            mm.couplings = {p, p};
        else
            mm.binding_energies = {-p * p, -p * p};
        const PrincipalMatrix pm(mm);
        const TwoCenterExact ex = oracle_for(m.family, p, a);
        const double pert = degenerate_splitting(pm).asymptotic;
        const double rel = std::fabs(pert - ex.splitting) / ex.splitting;
        rows[i] = format_double(v) + "," + format_double(ex.splitting) + "," + format_double(pert) + "," +
                  format_double(rel) + "\n";
    };
    if (threads <= 0) threads = thread_count();
    threads = std::max(1, std::min(threads, n));
    std::atomic<int> next{0};
    auto runner = [&] {
        for (int i = next++; i < n; i = next++) {
            try {
                work(i);
            } catch (...) {
                errs[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(runner);
    runner();
    for (auto& t : pool) t.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    std::string out = "a,delta_exact,delta_perturbative,rel_error\n";
    for (const auto& r : rows) out += r;
    return out;
}

std::string cmd_wavefunction(const RunConfig& c) {
    if (!c.wavefunction) throw ConfigError("wavefunction command needs a 'wavefunction' section", "/wavefunction");
    const ModelSpec& m = c.model;
    if (m.family != Family::Point1D && m.family != Family::Point2D && m.family != Family::Point3D)
        throw UnsupportedError("wavefunctions are implemented for Point1D/Point2D/Point3D only");
    const WavefunctionSpec& w = *c.wavefunction;
    const std::size_t dim = static_cast<std::size_t>(ambient_dimension(m.family));
    if (w.lower.size() != dim)
        throw ConfigError("wavefunction grid must have " + std::to_string(dim) + " dimensions", "/wavefunction/lower");
    if (w.correction && m.family != Family::Point2D)
        throw ConfigError("the correction column is available for Point2D only", "/wavefunction/correction");
    const PrincipalMatrix pm = make_pm(c);
    const BoundStateResult r = solve_states(pm, c);
    if (r.states.empty()) throw NoBoundStatesError("no bound states in window");
    if (static_cast<std::size_t>(w.state) >= r.states.size())
        throw ConfigError("state index " + std::to_string(w.state) + " out of range (" +
                              std::to_string(r.states.size()) + " bound states)",
                          "/wavefunction/state");
    const BoundState& s = r.states[w.state];
    std::size_t dominant = 0;
    for (std::size_t i = 1; i < s.eigenvector.size(); ++i)
        if (std::fabs(s.eigenvector[i]) > std::fabs(s.eigenvector[dominant])) dominant = i;

    static const char* names[] = {"x", "y", "z"};
    std::string out;
    for (std::size_t d = 0; d < dim; ++d) out += std::string(names[d]) + ",";
    out += w.correction ? "psi,dpsi\n" : "psi\n";
    std::vector<int> idx(dim, 0);
    auto coord = [&](std::size_t d, int i) {
        return w.points[d] == 1 ? w.lower[d] : w.lower[d] + (w.upper[d] - w.lower[d]) * i / (w.points[d] - 1);
    };
    std::vector<double> x(dim);
    while (true) {
        for (std::size_t d = 0; d < dim; ++d) x[d] = coord(d, idx[d]);
        bool singular = false;
        if (dim > 1)
            for (const auto& p : m.points)
                if (distance(FlatPoint{x}, p) < 1e-12) singular = true;
        if (!singular) {
            for (std::size_t d = 0; d < dim; ++d) out += format_double(x[d]) + ",";
            out += format_double(wavefunction(s, pm, x));
            if (w.correction) out += "," + format_double(wavefunction_correction(pm, dominant, x));
            out += "\n";
        }
        std::size_t d = dim;
        while (d > 0) {
            --d;
            if (++idx[d] < w.points[d]) break;
            idx[d] = 0;
            if (d == 0) return out;
        }
    }
}

}  // namespace krein
