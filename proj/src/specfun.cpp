#include "krein/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "krein/errors.hpp"

namespace krein {

void Accuracy::validate() const {
    if (!(abs_tol > 0) || !(rel_tol > 0)) throw DomainError("accuracy tolerances must be positive");
}

namespace {

void require_positive(double x, const char* fn) {
    if (!(x > 0)) throw DomainError(std::string(fn) + ": argument must be > 0, got " + std::to_string(x));
}

// Power series with log term, x <= 2.
void k_series(double x, double& k0, double& k1) {
    const double t = 0.25 * x * x;
    const double lg = std::log(0.5 * x);
    double i0 = 0, s0 = 0, i1s = 0, s1 = 0;
    double a0 = 1;  // t^k/(k!)^2
    double a1 = 1;  // t^k/(k!(k+1)!)
    double hk = 0;  // H_k
    for (int k = 0; k < 60; ++k) {
        const double hk1 = hk + 1.0 / (k + 1);
        i0 += a0;
        s0 += a0 * hk;
        i1s += a1;
        s1 += a1 * (hk + hk1 - 2 * kEulerGamma);
        if (a0 < 1e-18 * i0 && k > 2) break;
        a0 *= t / ((k + 1.0) * (k + 1.0));
        a1 *= t / ((k + 1.0) * (k + 2.0));
        hk = hk1;
    }
    k0 = -(lg + kEulerGamma) * i0 + s0;
    const double i1 = 0.5 * x * i1s;
    k1 = 1.0 / x + lg * i1 - 0.25 * x * s1;
}

// Trapezoid on e^x K0 = int e^{-u^2}/sqrt(2x+u^2), e^x K1 = int e^{-u^2}(1+u^2/x)/sqrt(2x+u^2).
constexpr int kTrapN = 27;
constexpr double kTrapH = 0.25;

const std::array<double, kTrapN>& trap_weights() {
    static const std::array<double, kTrapN> w = [] {
        std::array<double, kTrapN> a{};
        for (int j = 0; j < kTrapN; ++j) {
            const double u = j * kTrapH;
            a[j] = (j == 0 ? 1.0 : 2.0) * kTrapH * std::exp(-u * u);
        }
        return a;
    }();
    return w;
}

void k_scaled_trap(double x, double& k0s, double& k1s) {
    const auto& w = trap_weights();
    const double two_x = 2 * x;
    double s0 = 0, s1 = 0;
    for (int j = kTrapN - 1; j >= 0; --j) {
        const double u2 = (j * kTrapH) * (j * kTrapH);
        const double r = w[j] / std::sqrt(two_x + u2);
        s0 += r;
        s1 += r * (1 + u2 / x);
    }
    k0s = s0;
    k1s = s1;
}

}  // namespace

double bessel_k0_scaled(double x) {
    require_positive(x, "bessel_k0");
    double a, b;
    if (x <= 2) {
        k_series(x, a, b);
        return a * std::exp(x);
    }
    k_scaled_trap(x, a, b);
    return a;
}

double bessel_k1_scaled(double x) {
    require_positive(x, "bessel_k1");
    double a, b;
    if (x <= 2) {
        k_series(x, a, b);
        return b * std::exp(x);
    }
    k_scaled_trap(x, a, b);
    return b;
}

double bessel_k0(double x) {
    require_positive(x, "bessel_k0");
    double a, b;
    if (x <= 2) {
        k_series(x, a, b);
        return a;
    }
    if (x > 746) return 0.0;
    k_scaled_trap(x, a, b);
    return a * std::exp(-x);
}

double bessel_k1(double x) {
    require_positive(x, "bessel_k1");
    double a, b;
    if (x <= 2) {
        k_series(x, a, b);
        return b;
    }
    if (x > 746) return 0.0;
    k_scaled_trap(x, a, b);
    return b * std::exp(-x);
}

double digamma(double w) {
    require_positive(w, "digamma");
    double acc = 0;
    while (w < 8) {
        acc -= 1 / w;
        w += 1;
    }
    const double r = 1 / (w * w);
    const double series =
        r * (1.0 / 12 - r * (1.0 / 120 - r * (1.0 / 252 - r * (1.0 / 240 - r * (1.0 / 132 - r * (691.0 / 32760 - r / 12))))));
    return acc + std::log(w) - 0.5 / w - series;
}

double trigamma(double w) {
    require_positive(w, "trigamma");
    double acc = 0;
    while (w < 10) {
        acc += 1 / (w * w);
        w += 1;
    }
    const double r = 1 / (w * w);
    const double series =
        r * (1.0 / 6 - r * (1.0 / 30 - r * (1.0 / 42 - r * (1.0 / 30 - r * (5.0 / 66 - r * (691.0 / 2730 - r * 7.0 / 6))))));
    return acc + 1 / w + 0.5 * r + series / w;
}

double gamma_fn(double x) {
    if (std::isnan(x)) throw DomainError("gamma_fn: NaN argument");
    if (x <= 0 && x == std::floor(x)) throw PoleError("gamma_fn: pole at " + std::to_string(x));
    return std::tgamma(x);
}

double lambert_w0(double x) {
    if (std::isnan(x)) throw DomainError("lambert_w0: NaN argument");
    const double q = std::exp(1.0) * x + 1;
    if (q < -1e-15) throw DomainError("lambert_w0: argument below -1/e");
    if (x == 0) return 0;
    if (q <= 0) return -1;

    double w;
    if (x < -0.32) {
        const double p = std::sqrt(2 * q);
        w = -1 + p * (1 + p * (-1.0 / 3 + p * (11.0 / 72 + p * (-43.0 / 540))));
        if (p < 1e-3) return w;
    } else if (std::fabs(x) < 0.3) {
        w = x * (1 + x * (-1 + x * (1.5 + x * (-8.0 / 3))));
    } else if (x < 3) {
        const double l = std::log1p(x);
        w = l * (1 - std::log1p(l) / (2 + l));
    } else {
        const double l1 = std::log(x), l2 = std::log(l1);
        w = l1 - l2 + l2 / l1;
    }

    if (x > 1e3) {
        // w + ln w = ln x; Newton avoids overflow of w e^w.
        const double lx = std::log(x);
        for (int it = 0; it < 50; ++it) {
            const double f = w + std::log(w) - lx;
            const double dw = f / (1 + 1 / w);
            w -= dw;
            if (std::fabs(dw) <= 4e-16 * std::fabs(w)) break;
        }
        return w;
    }

    for (int it = 0; it < 50; ++it) {
        const double ew = std::exp(w);
        const double f = w * ew - x;
        const double wp1 = w + 1;
        if (wp1 == 0) break;
        const double dw = f / (ew * wp1 - (w + 2) * f / (2 * wp1));
        w -= dw;
        if (std::fabs(dw) <= 2e-16 * (1 + std::fabs(w))) break;
    }
    return w;
}

LegendreQResult legendre_q_alpha(double v, double alpha, const Accuracy& acc, int max_terms, bool with_dv) {
    acc.validate();
    if (!(alpha > 0))
        throw DomainError("legendre_q: argument must exceed 1 (coinciding centers give a divergent series)");
    if (!(v > -1)) throw DomainError("legendre_q: degree must be > -1");

    const double q = std::exp(-2 * alpha);
    const double tail_factor = q / (1 - q);
    const double log_c0 = 0.5 * std::log(kPi) + std::lgamma(v + 1) - std::lgamma(v + 1.5);
    double term = std::exp(log_c0 - alpha * (v + 1));
    double g = with_dv ? digamma(v + 1) - digamma(v + 1.5) : 0.0;

    LegendreQResult r;
    double sum = 0, dsum = 0;
    for (int k = 0; k < max_terms; ++k) {
        sum += term;
        if (with_dv) dsum += term * (g - alpha);
        const double tail = term * tail_factor;
        const double dtail = tail * (std::fabs(g) + alpha);
        r.terms = k + 1;
        r.tail_bound = tail;
        const bool ok = tail <= std::max(acc.abs_tol, acc.rel_tol * sum) &&
                        (!with_dv || dtail <= std::max(acc.abs_tol, acc.rel_tol * std::fabs(dsum)));
        if (ok || term == 0) {
            r.value = sum;
            r.dv = dsum;
            return r;
        }
        const double kk = k;
        term *= (kk + 0.5) * (kk + v + 1) / ((kk + v + 1.5) * (kk + 1)) * q;
        if (with_dv) g += 1 / (kk + v + 1) - 1 / (kk + v + 1.5);
    }
    throw ConvergenceError("legendre_q: series did not converge within " + std::to_string(max_terms) + " terms");
}

double legendre_q(double v, double cosh_a, const Accuracy& acc, int max_terms) {
    if (!(cosh_a > 1))
        throw DomainError("legendre_q: argument must exceed 1 (coinciding centers give a divergent series)");
    return legendre_q_alpha(v, std::acosh(cosh_a), acc, max_terms).value;
}

}  // namespace krein
