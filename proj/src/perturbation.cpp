#include "krein/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "krein/errors.hpp"
#include "krein/numerics.hpp"
#include "krein/specfun.hpp"

namespace krein {

namespace {

void require_nondegenerate(const PrincipalMatrix& pm, std::size_t k) {
    if (k >= pm.size()) throw DomainError("branch index out of range");
    for (std::size_t l = 0; l < pm.size(); ++l)
        if (l != k && pm.zeroth_order_energy(l) == pm.zeroth_order_energy(k))
            throw DegenerateError("levels " + std::to_string(k) + " and " + std::to_string(l) +
                                  " are degenerate; use degenerate_splitting");
}

double log_sum_signed(const std::vector<PartnerTerm>& terms, double sum_sign_hint) {
    double mx = -std::numeric_limits<double>::infinity();
    for (const auto& t : terms) mx = std::max(mx, t.log_abs);
    if (!std::isfinite(mx)) return mx;
    double s = 0;
    for (const auto& t : terms) s += (t.value < 0 ? -1.0 : 1.0) * std::exp(t.log_abs - mx);
    (void)sum_sign_hint;
    return std::log(std::fabs(s)) + mx;
}

}  // namespace

SplittingReport perturbative_shift(const PrincipalMatrix& pm, std::size_t k) {
    require_nondegenerate(pm, k);
    SplittingReport r;
    r.branch = k;
    const double E = pm.zeroth_order_energy(k);
    r.zeroth_order_energy = E;
    const std::size_t n = pm.size();
    if (n == 1) {
        r.log_abs_shift = -std::numeric_limits<double>::infinity();
        r.dphi_kk = pm.derivative_entry(k, k, E);
        return r;
    }
    const Matrix phi = pm.eval(E);
    r.dphi_kk = pm.derivative_entry(k, k, E);
    double scale = 0, min_diag = std::numeric_limits<double>::infinity(), max_off = 0;
    for (std::size_t l = 0; l < n; ++l)
        if (l != k) {
            scale = std::max(scale, std::fabs(phi(l, l)));
            min_diag = std::min(min_diag, std::fabs(phi(l, l)));
            max_off = std::max(max_off, std::fabs(phi(k, l)));
        }
    r.dominance_ratio = max_off / min_diag;
    for (std::size_t l = 0; l < n; ++l) {
        if (l == k) continue;
        const double pll = phi(l, l);
        if (std::fabs(pll) < 1e-8 * scale || pll == 0)
            throw DomainError("Phi_ll(E_B^k) is nearly zero for partner " + std::to_string(l) +
                              " (partner level resonant with level " + std::to_string(k) + ")");
        PartnerTerm t;
        t.partner = l;
        t.value = phi(k, l) * phi(k, l) / (pll * r.dphi_kk);
        t.log_abs = 2 * pm.log_abs_offdiag(k, l, E) - std::log(std::fabs(pll)) - std::log(std::fabs(r.dphi_kk));
        r.shift += t.value;
        r.contributions.push_back(t);
    }
    r.log_abs_shift = log_sum_signed(r.contributions, r.shift);
    return r;
}

double family_shift_closed_form(const PrincipalMatrix& pm, std::size_t k) {
    require_nondegenerate(pm, k);
    const ModelSpec& m = pm.model();
    const std::size_t n = pm.size();
    const double ek = pm.zeroth_order_energy(k);
    double sum = 0;
    switch (m.family) {
        case Family::Point1D: {
            const double nu = 0.5 * m.couplings[k];
            for (std::size_t l = 0; l < n; ++l)
                if (l != k) sum += std::exp(-2 * nu * pm.separation(k, l)) / (1 / m.couplings[l] - 0.5 / nu);
            return -nu * sum;
        }
        case Family::Point2D: {
            const double nu = std::sqrt(-ek);
            for (std::size_t l = 0; l < n; ++l)
                if (l != k) {
                    const double d = pm.separation(k, l);
                    sum += std::exp(-2 * nu * d) / (d * std::log(ek / m.binding_energies[l]));
                }
            return -2 * kPi * nu * sum;
        }
        case Family::Point3D: {
            const double nu = std::sqrt(-ek);
            for (std::size_t l = 0; l < n; ++l)
                if (l != k) {
                    const double d = pm.separation(k, l);
                    sum += std::exp(-2 * nu * d) / (d * d * (nu - std::sqrt(-m.binding_energies[l])));
                }
            return -2 * nu * sum;
        }
        case Family::PointH3: {
            const double k2 = m.kappa * m.kappa;
            const double nu = std::sqrt(k2 - ek);
            for (std::size_t l = 0; l < n; ++l)
                if (l != k) {
                    const double d = pm.separation(k, l);
                    sum += std::exp(-2 * d * (m.kappa + nu)) / (nu - std::sqrt(k2 - m.binding_energies[l]));
                }
            return -8 * k2 * nu * sum;
        }
        case Family::PointH2: {
            const double k2 = m.kappa * m.kappa;
            const double root = std::sqrt(0.25 - ek / k2);
            const double wk = 0.5 + root;
            for (std::size_t l = 0; l < n; ++l)
                if (l != k) {
                    const double wl = 0.5 + std::sqrt(0.25 - m.binding_energies[l] / k2);
                    const double q = legendre_q_alpha(wk - 1, m.kappa * pm.separation(k, l)).value;
                    sum += q * q / (digamma(wk) - digamma(wl));
                }
            return -2 * k2 * root / trigamma(wk) * sum;
        }
        case Family::Salpeter1D: {
            const double mass = m.mass;
            const double phik = salpeter_phi(mass, ek);
            for (std::size_t l = 0; l < n; ++l)
                if (l != k) {
                    const double d = pm.separation(k, l);
                    const double md = mass * d;
                    double amp = 0;
                    if (ek != 0)
                        amp = std::pow(mass / ek, 2) * std::pow(md, -1.5) * std::exp(-md) / std::sqrt(2 * kPi);
                    if (ek > 0) {
                        const double kap = std::sqrt((mass - ek) * (mass + ek));
                        amp += ek * std::exp(-kap * d) / kap;
                    }
                    sum += amp * amp / (phik - salpeter_phi(mass, m.binding_energies[l]));
                }
            return sum / salpeter_phi_prime(mass, ek);
        }
        case Family::Relativistic2D: {
            const double mass = m.mass;
            for (std::size_t l = 0; l < n; ++l)
                if (l != k) {
                    const double x = pm.separation(k, l) * std::sqrt((mass - ek) * (mass + ek));
                    sum += std::exp(-2 * x) / (x * std::log((mass - ek) / (mass - m.binding_energies[l])));
                }
            return -2 * kPi * (mass - ek) * sum;
        }
        case Family::Curve2D:
        case Family::Curve3D: throw UnsupportedError("curve families: use curve_shift");
    }
    return 0;
}

CurveShift curve_shift(const PrincipalMatrix& pm, std::size_t k) {
    const ModelSpec& m = pm.model();
    if (!is_curve_family(m.family)) throw UnsupportedError("curve_shift requires a curve family");
    require_nondegenerate(pm, k);
    CurveShift cs;
    const std::size_t n = pm.size();
    const double E = pm.zeroth_order_energy(k);
    const double nu = std::sqrt(-E);
    const double dkk = pm.derivative_entry(k, k, E);
    const FlatPoint xk = m.curves[k].center_of_mass();
    const double lk = m.curves[k].length();
    double sum = 0;
    cs.com_distances.assign(n, 0.0);
    for (std::size_t l = 0; l < n; ++l) {
        if (l == k) continue;
        const double d = distance(xk, m.curves[l].center_of_mass());
        cs.com_distances[l] = d;
        const double diam = std::max(m.curves[k].diameter(), m.curves[l].diameter());
        if (diam > 0.5 * d)
            throw OverlapError("curve diameter " + std::to_string(diam) + " exceeds half the separation " +
                               std::to_string(d));
        const double ll = m.curves[l].length();
        const double sq = m.family == Family::Curve2D ? lk * ll * std::exp(-2 * nu * d) / (8 * kPi * nu * d)
                                                      : lk * ll * std::exp(-2 * nu * d) / (16 * kPi * kPi * d * d);
        sum += sq / pm.entry(l, l, E);
    }
    cs.com_form = sum / dkk;
    cs.quadrature_form = perturbative_shift(pm, k).shift;
    cs.ratio = cs.com_form / cs.quadrature_form;
    return cs;
}

DegenerateSplitting degenerate_splitting(const PrincipalMatrix& pm) {
    const ModelSpec& m = pm.model();
    if (pm.size() != 2) throw DomainError("degenerate_splitting needs exactly two centers");
    const auto& par = uses_couplings(m.family) ? m.couplings : m.binding_energies;
    if (par[0] != par[1]) throw DomainError("degenerate_splitting needs identical parameters on both centers");
    if (is_curve_family(m.family) &&
        std::fabs(m.curves[0].length() - m.curves[1].length()) > 1e-9 * m.curves[0].length())
        throw DomainError("degenerate_splitting needs congruent curves");

    DegenerateSplitting ds;
    const double eb = pm.zeroth_order_energy(0);
    ds.binding_energy = eb;
    ds.phi12 = pm.entry(0, 1, eb);
    const double c = std::fabs(ds.phi12);
    const double dphi = pm.derivative_entry(0, 0, eb);
    ds.first_order = 2 * c / std::fabs(dphi);
    const double thr = pm.threshold();
    double span = 10 * c / std::fabs(dphi);

    // Phi_11(E) = +c (symmetric, below E_B) and -c (antisymmetric, above E_B)
    auto f = [&](double E) { return pm.entry(0, 0, E); };
    const double room = thr - eb;
    if (c / std::fabs(dphi) < 1e-6 * room) {
        // levels closer than E can resolve: Phi_11 ~ g d + q d^2 around E_B
        const double h = 1e-4 * room;
        const double q = 0.25 * (pm.derivative_entry(0, 0, eb + h) - pm.derivative_entry(0, 0, eb - h)) / h;
        const double g = std::fabs(dphi);
        auto step = [&](double s) { return -2 * s / (g + std::sqrt(g * g + 4 * q * s)); };
        const double dm = step(c), dp = step(-c);
        ds.e_minus = eb + dm;
        ds.e_plus = eb + dp;
        ds.splitting = dp - dm;
    } else {
        double lo = eb - span;
        if (std::isfinite(pm.lower_limit())) lo = std::max(lo, 0.5 * (eb + pm.lower_limit()));
        while (f(lo) - c < 0) {
            span *= 2;
            lo = eb - span;
            if (std::isfinite(pm.lower_limit()) && lo <= pm.lower_limit())
                throw ConvergenceError("degenerate_splitting: lower root not bracketed");
        }
        ds.e_minus = bisect([&](double E) { return f(E) - c; }, lo, eb, 1e-16 * std::max(1.0, std::fabs(eb)));
        double hi = std::min(eb + 10 * c / std::fabs(dphi), eb + 0.5 * (thr - eb));
        for (int it = 0; it < 200 && f(hi) + c > 0; ++it) hi = 0.5 * (hi + thr);
        if (f(hi) + c > 0) throw NoSecondStateError("degenerate_splitting: upper level does not exist below threshold");
        ds.e_plus = bisect([&](double E) { return f(E) + c; }, eb, hi, 1e-16 * std::max(1.0, std::fabs(eb)));
        ds.splitting = ds.e_plus - ds.e_minus;
    }

    ds.asymptotic = ds.first_order;
    if (!is_curve_family(m.family) && !is_hyperbolic_family(m.family)) {
        const double a = 0.5 * pm.separation(0, 1);
        ds.half_separation = a;
        if (m.family == Family::Point1D) {
            const double lam = m.couplings[0];
            ds.asymptotic = lam * lam * std::exp(-a * lam);
        } else if (m.family == Family::Point2D) {
            const double mu = std::sqrt(-eb);
            ds.asymptotic = 2 * std::pow(-eb, 0.75) * std::sqrt(kPi) * std::exp(-2 * mu * a) / std::sqrt(a);
        } else if (m.family == Family::Point3D) {
            const double mu = std::sqrt(-eb);
            ds.asymptotic = 2 * mu * std::exp(-2 * a * mu) / a;
        }
    } else {
        ds.half_separation = 0.5 * pm.separation(0, 1);
    }
    return ds;
}

EigvecCorrection eigvec_first_order(const PrincipalMatrix& pm, std::size_t k) {
    require_nondegenerate(pm, k);
    EigvecCorrection c;
    c.branch = k;
    const double E = pm.zeroth_order_energy(k);
    const Matrix phi = pm.eval(E);
    c.a1.assign(pm.size(), 0.0);
    for (std::size_t j = 0; j < pm.size(); ++j)
        if (j != k) c.a1[j] = phi(j, k) / (-phi(j, j));
    return c;
}

double wavefunction_correction(const PrincipalMatrix& pm, std::size_t k, const std::vector<double>& x) {
    const ModelSpec& m = pm.model();
    if (m.family != Family::Point2D) throw UnsupportedError("wavefunction_correction is defined for Point2D only");
    require_nondegenerate(pm, k);
    const double ebk = std::fabs(m.binding_energies[k]);
    const double nu = std::sqrt(ebk);
    const FlatPoint p{x};
    double s = 0;
    for (std::size_t l = 0; l < pm.size(); ++l) {
        if (l == k) continue;
        const double r = distance(p, m.points[l]);
        if (r == 0) throw SingularityError("wavefunction_correction evaluated at center " + std::to_string(l));
        s += 2 * bessel_k0(nu * pm.separation(k, l)) / std::log(ebk / std::fabs(m.binding_energies[l])) *
             bessel_k0(nu * r);
    }
    return std::sqrt(4 * kPi * ebk) / (2 * kPi) * s;
}

}  // namespace krein
