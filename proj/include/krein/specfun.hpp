#pragma once

namespace krein {

struct Accuracy {
    double abs_tol = 1e-300;
    double rel_tol = 1e-15;
    void validate() const;
};

double bessel_k0(double x);
double bessel_k1(double x);
// e^x K_n(x); finite for every x > 0.
double bessel_k0_scaled(double x);
double bessel_k1_scaled(double x);

double digamma(double w);
double trigamma(double w);

double gamma_fn(double x);

// Principal branch; x >= -1/e.
double lambert_w0(double x);

struct LegendreQResult {
    double value = 0;
    double dv = 0;  // d/dv Q_v
    int terms = 0;
    double tail_bound = 0;
};

// Q_v(cosh a) by the exponential series in e^{-2a}.
double legendre_q(double v, double cosh_a, const Accuracy& acc = {}, int max_terms = 10000);
// Same series, argument given as a > 0; more accurate for small separations.
LegendreQResult legendre_q_alpha(double v, double alpha, const Accuracy& acc = {},
                                 int max_terms = 10000, bool with_dv = false);

inline constexpr double kEulerGamma = 0.57721566490153286061;
inline constexpr double kPi = 3.14159265358979323846;

}  // namespace krein
