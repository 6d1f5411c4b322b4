#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "krein/models.hpp"

namespace krein {

struct BoundState {
    std::size_t branch = 0;
    double energy = 0;
    std::vector<double> eigenvector;  // A^k(E_k), unit norm
    double domega_dE = 0;             // <A, Phi' A> at E_k, negative
    double alpha = 0;                 // (-domega_dE)^{-1/2}
    double omega_residual = 0;        // omega^k(E_k)
};

struct BoundStateResult {
    std::vector<BoundState> states;  // ascending energy
    std::vector<std::string> warnings;
    double e_min = 0, e_max = 0;
};

// k-th ascending eigenvalue of Phi(E).
double omega(const PrincipalMatrix& pm, std::size_t k, double E);

BoundStateResult find_bound_states(const PrincipalMatrix& pm, double e_min, double e_max_cap, double rel_tol = 1e-15);
// Window grown from the threshold downward until every branch has rooted or is positive.
BoundStateResult find_bound_states(const PrincipalMatrix& pm, double rel_tol = 1e-15);

struct FlowSample {
    double E = 0;
    double omega = 0;
    std::vector<double> vector;
    double slope = 0;  // Feynman-Hellmann <A, Phi' A>
};

struct EigenFlow {
    std::size_t branch = 0;
    std::vector<FlowSample> samples;
};

struct FlowResult {
    std::vector<EigenFlow> flows;
    int monotonicity_violations = 0;
    int ambiguous_matches = 0;
    std::vector<std::string> diagnostics;
};

FlowResult branch_flow(const PrincipalMatrix& pm, std::vector<double> grid);

// Free resolvent kernel of the flat point families.
double free_kernel(Family f, double nu, double r);
double wavefunction(const BoundState& s, const PrincipalMatrix& pm, const std::vector<double>& x);

// (1/2 pi i) closed-contour integral of 1/f on the circle |z - c| = r, trapezoid with m nodes.
std::complex<double> contour_inverse_integral(const std::function<std::complex<double>(std::complex<double>)>& f,
                                              double center, double radius, int nodes = 128);

struct RieszCheck {
    double contour = 0;  // contour integral of 1/omega^k
    double residue = 0;  // 1/(d omega^k/dE)
    double residual = 0;
    double radius = 0;
};

// radius <= 0 picks a default inside the isolation gap.
RieszCheck riesz_projection_check(const PrincipalMatrix& pm, const BoundState& s, double radius = 0,
                                  const std::vector<double>& other_roots = {});

}  // namespace krein
