#pragma once

#include <string>
#include <vector>

#include "krein/models.hpp"

namespace krein {

struct TwoCenterExact {
    Family family = Family::Point1D;
    double parameter = 0;  // lambda (1D) or mu = sqrt|E_B|
    double half_separation = 0;
    double e_plus = 0;   // upper, antisymmetric
    double e_minus = 0;  // lower, symmetric
    double splitting = 0;
    bool used_fallback = false;  // 3D: bisection replaced the closed form
};

// Centers at +-a.
TwoCenterExact exact_two_center_1d(double lambda, double a);
TwoCenterExact exact_two_center_3d(double mu, double a);
TwoCenterExact numeric_two_center_2d(double mu, double a);

// Plain bisection on the two-center secular equations; cross-checks for the closed forms.
TwoCenterExact bisection_two_center_1d(double lambda, double a);
TwoCenterExact bisection_two_center_3d(double mu, double a);

struct DetRootResult {
    std::vector<double> energies;  // ascending
    std::vector<std::string> warnings;
};

// Sign scan of det Phi (eigenvalue product) on a uniform grid, then bisection.
DetRootResult brute_force_detroot(const PrincipalMatrix& pm, double e_min, double e_max, int grid_n = 400);

}  // namespace krein
