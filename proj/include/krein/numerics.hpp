#pragma once

#include <functional>
#include <vector>

namespace krein {

struct GaussRule {
    std::vector<double> x;  // nodes on [-1, 1]
    std::vector<double> w;
};

// n-point Gauss-Legendre; cached, thread-safe.
const GaussRule& gauss_legendre(int n);

struct IntegrationResult {
    double value = 0;
    double error = 0;
    int panels = 0;
};

// Adaptive bisection with a 10/20-point Gauss-Legendre pair per panel.
IntegrationResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                     double abs_tol, double rel_tol, int max_panels = 4000);

// [a, inf) mapped through t = a + s/(1-s).
IntegrationResult integrate_to_infinity(const std::function<double(double)>& f, double a, double abs_tol,
                                        double rel_tol, int max_panels = 4000);

// Sign-change root on [lo, hi] (f(lo), f(hi) of opposite sign). Illinois steps with bisection safeguard.
double solve_bracketed(const std::function<double(double)>& f, double lo, double hi, double flo, double fhi,
                       double rel_tol = 1e-15, int max_iter = 200);

// Plain bisection, used where robustness beats speed.
double bisect(const std::function<double(double)>& f, double lo, double hi, double x_tol, int max_iter = 200);

}  // namespace krein
