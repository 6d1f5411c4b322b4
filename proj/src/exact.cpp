#include "krein/exact.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "krein/errors.hpp"
#include "krein/linalg.hpp"
#include "krein/numerics.hpp"
#include "krein/specfun.hpp"

namespace krein {

namespace {

void check_positive(double v, const char* what) {
    if (!(v > 0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be positive and finite");
}

// nu = base + x; splitting from the x difference, no cancellation
TwoCenterExact finish(Family f, double p, double a, double base, double x_sym, double x_anti) {
    TwoCenterExact r;
    r.family = f;
    r.parameter = p;
    r.half_separation = a;
    const double ns = base + x_sym, na = base + x_anti;
    r.e_minus = -ns * ns;
    r.e_plus = -na * na;
    r.splitting = (x_sym - x_anti) * (ns + na);
    return r;
}

double full_bisect(const std::function<double(double)>& f, double lo, double hi) {
    return bisect(f, lo, hi, 0.0, 2000);
}

std::string fmt(double x) {
    char b[40];
    std::snprintf(b, sizeof b, "%.17g", x);
    return b;
}

}  // namespace

TwoCenterExact exact_two_center_1d(double lambda, double a) {
    check_positive(lambda, "lambda");
    check_positive(a, "a");
    const double al = a * lambda;
    if (al <= 1) throw NoSecondStateError("a*lambda = " + fmt(al) + " <= 1: only one bound state");
    const double x = al * std::exp(-al);
    return finish(Family::Point1D, lambda, a, 0.5 * lambda, lambert_w0(x) / (2 * a), lambert_w0(-x) / (2 * a));
}

TwoCenterExact bisection_two_center_1d(double lambda, double a) {
    check_positive(lambda, "lambda");
    check_positive(a, "a");
    if (a * lambda <= 1) throw NoSecondStateError("a*lambda <= 1: only one bound state");
    // nu = lambda/2 + x: 2 x / lambda -+ e^{-2 a nu} = 0
    const double h = 0.5 * lambda;
    auto sym = [&](double x) { return 2 * x / lambda - std::exp(-2 * a * (h + x)); };
    auto anti = [&](double x) { return 2 * x / lambda + std::exp(-2 * a * (h + x)); };
    const double x_sym = full_bisect(sym, 0.0, h);
    // anti has a spurious zero at nu = 0; its minimum sits at nu* = ln(a lambda)/(2a)
    const double x_star = std::log(a * lambda) / (2 * a) - h;
    const double x_anti = full_bisect(anti, x_star, 0.0);
    return finish(Family::Point1D, lambda, a, h, x_sym, x_anti);
}

TwoCenterExact bisection_two_center_3d(double mu, double a) {
    check_positive(mu, "mu");
    check_positive(a, "a");
    if (2 * a * mu <= 1) throw NoSecondStateError("a*mu <= 1/2: only one bound state");
    // nu = mu + x
    auto sym = [&](double x) { return x - std::exp(-2 * a * (mu + x)) / (2 * a); };
    auto anti = [&](double x) { return x + std::exp(-2 * a * (mu + x)) / (2 * a); };
    const double x_sym = full_bisect(sym, 0.0, 1 / (2 * a));
    // anti is increasing with anti(-mu) = 1/(2a) - mu < 0
    const double x_anti = full_bisect(anti, -mu, 0.0);
    return finish(Family::Point3D, mu, a, mu, x_sym, x_anti);
}

TwoCenterExact exact_two_center_3d(double mu, double a) {
    check_positive(mu, "mu");
    check_positive(a, "a");
    if (2 * a * mu <= 1) throw NoSecondStateError("a*mu = " + fmt(a * mu) + " <= 1/2: only one bound state");
    const double x = std::exp(-2 * a * mu);
    const double xs = lambert_w0(x) / (2 * a), xa = lambert_w0(-x) / (2 * a);
    const double scale = std::max(mu, 1 / (2 * a));
    const double rs = std::fabs(xs - std::exp(-2 * a * (mu + xs)) / (2 * a));
    const double ra = std::fabs(xa + std::exp(-2 * a * (mu + xa)) / (2 * a));
    if (rs > 1e-10 * scale || ra > 1e-10 * scale) {
        TwoCenterExact r = bisection_two_center_3d(mu, a);
        r.used_fallback = true;
        return r;
    }
    return finish(Family::Point3D, mu, a, mu, xs, xa);
}

TwoCenterExact numeric_two_center_2d(double mu, double a) {
    check_positive(mu, "mu");
    check_positive(a, "a");
    // nu = mu e^t: t -+ K0(2 a mu e^t) = 0
    auto sym = [&](double t) { return t - bessel_k0(2 * a * mu * std::exp(t)); };
    auto anti = [&](double t) { return t + bessel_k0(2 * a * mu * std::exp(t)); };
    const double t_sym = full_bisect(sym, 0.0, bessel_k0(2 * a * mu));
    // anti(-inf) = -ln(a mu) - gamma
    if (!(a * mu > std::exp(-kEulerGamma)))
        throw NoSecondStateError("a*mu = " + fmt(a * mu) + " <= e^-gamma: antisymmetric state absent");
    double lo = -0.7;
    while (anti(lo) >= 0) {
        lo *= 2;
        if (lo < -700) throw NoSecondStateError("antisymmetric root not bracketed");
    }
    const double t_anti = full_bisect(anti, lo, 0.0);
    TwoCenterExact r;
    r.family = Family::Point2D;
    r.parameter = mu;
    r.half_separation = a;
    r.e_minus = -mu * mu * std::exp(2 * t_sym);
    r.e_plus = -mu * mu * std::exp(2 * t_anti);
    r.splitting = mu * mu * std::exp(2 * t_anti) * std::expm1(2 * (t_sym - t_anti));
    return r;
}

DetRootResult brute_force_detroot(const PrincipalMatrix& pm, double e_min, double e_max, int grid_n) {
    if (!(e_min < e_max)) throw DomainError("brute_force_detroot: need e_min < e_max");
    if (grid_n < 2) throw DomainError("brute_force_detroot: grid_n must be >= 2");
    pm.check_energy(e_min);
    pm.check_energy(e_max);
    DetRootResult res;
    struct Sample {
        double det;
        int neg;
    };
    auto sample = [&](double E) {
        const EigenSystem es = eig_sym(pm.eval(E));
        int sign = 1, neg = 0;
        for (double v : es.values) {
            if (v < 0) {
                sign = -sign;
                ++neg;
            }
            if (v == 0) return Sample{0.0, neg};
        }
        return Sample{static_cast<double>(sign), neg};
    };
    const double h = (e_max - e_min) / grid_n;
    Sample prev = sample(e_min);
    double eprev = e_min;
    for (int i = 1; i <= grid_n; ++i) {
        const double E = i == grid_n ? e_max : e_min + i * h;
        const Sample cur = sample(E);
        if (std::abs(cur.neg - prev.neg) >= 2)
            res.warnings.push_back("grid too coarse: " + std::to_string(std::abs(cur.neg - prev.neg)) +
                                   " roots between E = " + fmt(eprev) + " and " + fmt(E));
        if (prev.det == 0) {
            res.energies.push_back(eprev);
        } else if (cur.det != 0 && cur.det != prev.det) {
            auto f = [&](double x) { return sample(x).det; };
            res.energies.push_back(bisect(f, eprev, E, 0.0, 2000));
        }
        prev = cur;
        eprev = E;
    }
    if (prev.det == 0) res.energies.push_back(eprev);
    std::sort(res.energies.begin(), res.energies.end());
    for (std::size_t i = 1; i < res.energies.size(); ++i)
        if (res.energies[i] - res.energies[i - 1] < 2 * h)
            res.warnings.push_back("grid too coarse: roots " + fmt(res.energies[i - 1]) + " and " +
                                   fmt(res.energies[i]) + " closer than two grid steps");
    return res;
}

}  // namespace krein
