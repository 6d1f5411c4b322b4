#include "krein/numerics.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <queue>
#include <string>

#include "krein/errors.hpp"

namespace krein {

namespace {

GaussRule build_gauss(int n) {
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = 0;
            for (int j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1) * z * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (z * p0 - p1) / (z * z - 1);
            const double dz = p0 / dp;
            z -= dz;
            if (std::fabs(dz) < 1e-16) break;
        }
        double p0 = 1, p1 = 0;
        for (int j = 1; j <= n; ++j) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * j - 1) * z * p1 - (j - 1.0) * p2) / j;
        }
        dp = n * (z * p0 - p1) / (z * z - 1);
        r.x[i] = -z;
        r.x[n - 1 - i] = z;
        r.w[i] = r.w[n - 1 - i] = 2 / ((1 - z * z) * dp * dp);
    }
    return r;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    if (n < 1) throw DomainError("gauss_legendre: order must be >= 1");
    static std::mutex mu;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_gauss(n)).first;
    return it->second;
}

IntegrationResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                     double abs_tol, double rel_tol, int max_panels) {
    const GaussRule& g10 = gauss_legendre(10);
    const GaussRule& g20 = gauss_legendre(20);
    struct Panel {
        double a, b, coarse, fine;
        double err() const { return std::fabs(fine - coarse); }
        bool operator<(const Panel& o) const { return err() < o.err(); }
    };
    auto eval = [&](double lo, double hi) {
        const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
        double s10 = 0, s20 = 0;
        for (int i = 0; i < 10; ++i) s10 += g10.w[i] * f(c + h * g10.x[i]);
        for (int i = 0; i < 20; ++i) s20 += g20.w[i] * f(c + h * g20.x[i]);
        return Panel{lo, hi, s10 * h, s20 * h};
    };
    std::priority_queue<Panel> heap;
    heap.push(eval(a, b));
    double total = heap.top().fine, err = heap.top().err();
    int panels = 1;
    while (err > std::max(abs_tol, rel_tol * std::fabs(total))) {
        if (panels >= max_panels)
            throw ConvergenceError("adaptive quadrature exceeded " + std::to_string(max_panels) + " panels");
        Panel p = heap.top();
        heap.pop();
        const double m = 0.5 * (p.a + p.b);
        Panel l = eval(p.a, m), r = eval(m, p.b);
        total += l.fine + r.fine - p.fine;
        err += l.err() + r.err() - p.err();
        heap.push(l);
        heap.push(r);
        ++panels;
        if (!(std::fabs(err) < 1e300)) break;
    }
    // Recompute sums to drop accumulated cancellation.
    total = 0;
    err = 0;
    while (!heap.empty()) {
        total += heap.top().fine;
        err += heap.top().err();
        heap.pop();
    }
    return {total, err, panels};
}

IntegrationResult integrate_to_infinity(const std::function<double(double)>& f, double a, double abs_tol,
                                        double rel_tol, int max_panels) {
    auto g = [&](double s) {
        if (s >= 1) return 0.0;
        const double om = 1 - s;
        const double v = f(a + s / om);
        return v == 0 ? 0.0 : v / (om * om);
    };
    return integrate_adaptive(g, 0, 1, abs_tol, rel_tol, max_panels);
}

double solve_bracketed(const std::function<double(double)>& f, double lo, double hi, double flo, double fhi,
                       double rel_tol, int max_iter) {
    if (flo == 0) return lo;
    if (fhi == 0) return hi;
    if ((flo > 0) == (fhi > 0)) throw DomainError("solve_bracketed: no sign change in bracket");
    int side = 0;
    for (int it = 0; it < max_iter; ++it) {
        const double width = hi - lo;
        if (std::fabs(width) <= rel_tol * std::max(std::fabs(lo), std::fabs(hi)) || std::fabs(width) < 1e-300)
            break;
        double x = (lo * fhi - hi * flo) / (fhi - flo);
        // keep inside the middle 98% or fall back to bisection
        if (!(x > lo + 0.01 * width && x < hi - 0.01 * width) || it % 4 == 3) x = 0.5 * (lo + hi);
        const double fx = f(x);
        if (fx == 0) return x;
        if ((fx > 0) == (fhi > 0)) {
            hi = x;
            fhi = fx;
            if (side == 1) flo *= 0.5;
            side = 1;
        } else {
            lo = x;
            flo = fx;
            if (side == -1) fhi *= 0.5;
            side = -1;
        }
    }
    return std::fabs(flo) < std::fabs(fhi) ? lo : hi;
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double x_tol, int max_iter) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0) return lo;
    if (fhi == 0) return hi;
    if ((flo > 0) == (fhi > 0)) throw DomainError("bisect: no sign change in bracket");
    for (int it = 0; it < max_iter && hi - lo > x_tol; ++it) {
        const double m = 0.5 * (lo + hi);
        if (m <= lo || m >= hi) break;
        const double fm = f(m);
        if (fm == 0) return m;
        if ((fm > 0) == (flo > 0)) {
            lo = m;
            flo = fm;
        } else {
            hi = m;
            fhi = fm;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace krein
