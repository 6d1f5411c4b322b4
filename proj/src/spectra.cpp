#include "krein/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "krein/errors.hpp"
#include "krein/numerics.hpp"
#include "krein/specfun.hpp"

namespace krein {

namespace {

std::string fmt(double x) {
    char b[40];
    std::snprintf(b, sizeof b, "%.17g", x);
    return b;
}

double fh_slope(const PrincipalMatrix& pm, double E, const std::vector<double>& a) {
    return dot(a, pm.derivative(E) * a);
}

}  // namespace

double omega(const PrincipalMatrix& pm, std::size_t k, double E) { return eig_sym(pm.eval(E)).values.at(k); }

BoundStateResult find_bound_states(const PrincipalMatrix& pm, double e_min, double e_max_cap, double rel_tol) {
    if (!(e_min < e_max_cap)) throw DomainError("find_bound_states: need E_min < E_max_cap");
    pm.check_energy(e_min);
    pm.check_energy(e_max_cap);
    BoundStateResult res;
    res.e_min = e_min;
    res.e_max = e_max_cap;
    const std::size_t n = pm.size();
    const EigenSystem lo = eig_sym(pm.eval(e_min));
    const EigenSystem hi = eig_sym(pm.eval(e_max_cap));
    for (std::size_t k = 0; k < n; ++k) {
        const double flo = lo.values[k], fhi = hi.values[k];
        if (fhi > 0) continue;  // positive on the whole window
        if (flo < 0) {
            res.warnings.push_back("window too small: branch " + std::to_string(k) + " is negative at E_min = " +
                                   fmt(e_min) + " (root below window)");
            continue;
        }
        auto f = [&](double E) { return omega(pm, k, E); };
        const double E = solve_bracketed(f, e_min, e_max_cap, flo, fhi, rel_tol, 400);
        BoundState s;
        s.branch = k;
        s.energy = E;
        const EigenSystem es = eig_sym(pm.eval(E));
        s.omega_residual = es.values[k];
        s.eigenvector = es.vector(k);
        s.domega_dE = fh_slope(pm, E, s.eigenvector);
        if (!(s.domega_dE < 0))
            throw ConvergenceError("non-negative eigenvalue slope at E = " + fmt(E) + " on branch " + std::to_string(k));
        s.alpha = 1 / std::sqrt(-s.domega_dE);
        res.states.push_back(std::move(s));
    }
    std::sort(res.states.begin(), res.states.end(),
              [](const BoundState& a, const BoundState& b) { return a.energy < b.energy; });
    return res;
}

BoundStateResult find_bound_states(const PrincipalMatrix& pm, double rel_tol) {
    const double thr = pm.threshold(), low = pm.lower_limit();
    double scale = 0;
    for (std::size_t k = 0; k < pm.size(); ++k) scale = std::max(scale, thr - pm.zeroth_order_energy(k));
    if (!(scale > 0)) scale = 1;
    const double e_hi = thr - 1e-10 * scale;
    double delta = 2 * scale;
    double e_lo = thr - delta;
    for (int it = 0; it < 200; ++it) {
        e_lo = thr - delta;
        if (std::isfinite(low) && e_lo <= low) {
            e_lo = low + 1e-12 * (thr - low);
            break;
        }
        if (omega(pm, 0, e_lo) > 0) break;
        delta *= 2;
    }
    return find_bound_states(pm, e_lo, e_hi, rel_tol);
}

FlowResult branch_flow(const PrincipalMatrix& pm, std::vector<double> grid) {
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    const std::size_t n = pm.size();
    FlowResult res;
    res.flows.resize(n);
    for (std::size_t k = 0; k < n; ++k) res.flows[k].branch = k;
    std::vector<std::vector<double>> prev;
    for (double E : grid) {
        const EigenSystem es = eig_sym(pm.eval(E));
        const Matrix dphi = pm.derivative(E);
        std::vector<std::size_t> assign(n);
        if (prev.empty()) {
            for (std::size_t k = 0; k < n; ++k) assign[k] = k;
        } else {
            std::vector<bool> used(n, false);
            for (std::size_t k = 0; k < n; ++k) {
                double best = -1;
                std::size_t arg = k;
                for (std::size_t c = 0; c < n; ++c) {
                    if (used[c]) continue;
                    const double ov = std::fabs(dot(prev[k], es.vector(c)));
                    if (ov > best) {
                        best = ov;
                        arg = c;
                    }
                }
                if (best < 0.9) {
                    ++res.ambiguous_matches;
                    res.diagnostics.push_back("branch crossing ambiguity at E = " + fmt(E) + " (branch " +
                                              std::to_string(k) + ", overlap " + fmt(best) + ")");
                }
                used[arg] = true;
                assign[k] = arg;
            }
        }
        prev.assign(n, {});
        for (std::size_t k = 0; k < n; ++k) {
            FlowSample s;
            s.E = E;
            s.omega = es.values[assign[k]];
            s.vector = es.vector(assign[k]);
            s.slope = dot(s.vector, dphi * s.vector);
            prev[k] = s.vector;
            auto& fl = res.flows[k].samples;
            if (!fl.empty() && !(s.omega < fl.back().omega)) {
                ++res.monotonicity_violations;
                res.diagnostics.push_back("omega not decreasing on branch " + std::to_string(k) + " between E = " +
                                          fmt(fl.back().E) + " and " + fmt(E));
            }
            if (!(s.slope < 0)) {
                ++res.monotonicity_violations;
                res.diagnostics.push_back("non-negative slope on branch " + std::to_string(k) + " at E = " + fmt(E));
            }
            fl.push_back(std::move(s));
        }
    }
    return res;
}

double free_kernel(Family f, double nu, double r) {
    switch (f) {
        case Family::Point1D: return std::exp(-nu * r) / (2 * nu);
        case Family::Point2D: return bessel_k0(nu * r) / (2 * kPi);
        case Family::Point3D: return std::exp(-nu * r) / (4 * kPi * r);
        default: throw UnsupportedError("wavefunctions are implemented for flat point families only");
    }
}

double wavefunction(const BoundState& s, const PrincipalMatrix& pm, const std::vector<double>& x) {
    const ModelSpec& m = pm.model();
    if (m.family != Family::Point1D && m.family != Family::Point2D && m.family != Family::Point3D)
        throw UnsupportedError("wavefunctions are implemented for Point1D/Point2D/Point3D only");
    const FlatPoint p{x};
    const double nu = std::sqrt(-s.energy);
    double psi = 0;
    for (std::size_t i = 0; i < m.points.size(); ++i) {
        const double r = distance(p, m.points[i]);
        if (r == 0 && m.family != Family::Point1D)
            throw SingularityError("wavefunction evaluated at center " + std::to_string(i));
        psi += free_kernel(m.family, nu, r) * s.eigenvector[i];
    }
    return s.alpha * psi;
}

std::complex<double> contour_inverse_integral(const std::function<std::complex<double>(std::complex<double>)>& f,
                                              double center, double radius, int nodes) {
    // z = c + r e^{i t}, dz = i r e^{i t} dt; (1/2 pi i) int dz/f = (1/M) sum r e^{i t}/f
    std::complex<double> sum = 0;
    for (int j = 0; j < nodes; ++j) {
        const double t = 2 * kPi * (j + 0.5) / nodes;
        const std::complex<double> e = std::polar(radius, t);
        sum += e / f(center + e);
    }
    return sum / static_cast<double>(nodes);
}

RieszCheck riesz_projection_check(const PrincipalMatrix& pm, const BoundState& s, double radius,
                                  const std::vector<double>& other_roots) {
    const double E = s.energy;
    double room = pm.threshold() - E;
    if (std::isfinite(pm.lower_limit())) room = std::min(room, E - pm.lower_limit());
    double gap = std::numeric_limits<double>::infinity();
    for (double r : other_roots)
        if (r != E) gap = std::min(gap, std::fabs(r - E));
    if (radius <= 0) radius = 0.1 * std::min({room, gap, std::max(std::fabs(E), room)});
    if (radius >= gap) throw ContourError("contour radius exceeds the gap to the nearest other root");
    if (2 * radius >= room) throw ContourError("contour interpolation interval reaches the threshold");

    // Chebyshev interpolant of omega^k on [E - 2r, E + 2r], continued to the circle.
    constexpr int kN = 28;
    const double half = 2 * radius;
    std::vector<double> vals(kN), coef(kN, 0.0);
    for (int j = 0; j < kN; ++j) {
        const double x = std::cos(kPi * (j + 0.5) / kN);
        vals[j] = omega(pm, s.branch, E + half * x);
    }
    for (int k = 0; k < kN; ++k) {
        double c = 0;
        for (int j = 0; j < kN; ++j) c += vals[j] * std::cos(kPi * k * (j + 0.5) / kN);
        coef[k] = 2.0 * c / kN;
    }
    coef[0] *= 0.5;
    auto interp = [&](std::complex<double> z) {
        const std::complex<double> x = (z - E) / half;
        std::complex<double> b1 = 0, b2 = 0;
        for (int k = kN - 1; k >= 1; --k) {
            const std::complex<double> b0 = 2.0 * x * b1 - b2 + coef[k];
            b2 = b1;
            b1 = b0;
        }
        return x * b1 - b2 + coef[0];
    };
    RieszCheck rc;
    rc.radius = radius;
    rc.contour = contour_inverse_integral(interp, E, radius, 128).real();
    rc.residue = 1 / s.domega_dE;
    rc.residual = std::fabs(rc.contour - rc.residue);
    return rc;
}

}  // namespace krein
