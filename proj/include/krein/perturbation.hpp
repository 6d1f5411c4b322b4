#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "krein/models.hpp"

namespace krein {

struct PartnerTerm {
    std::size_t partner = 0;
    double value = 0;    // Phi_kl^2 / (Phi_ll dPhi_kk/dE)
    double log_abs = 0;  // log |value|, finite even when value underflows
};

struct SplittingReport {
    std::size_t branch = 0;
    double zeroth_order_energy = 0;
    double shift = 0;
    double log_abs_shift = 0;
    double dphi_kk = 0;
    std::vector<PartnerTerm> contributions;
    double dominance_ratio = 0;
    std::optional<double> oracle_energy;
    std::optional<double> relative_error;
};

SplittingReport perturbative_shift(const PrincipalMatrix& pm, std::size_t k);

// Large-separation asymptotic forms; curve families throw UnsupportedError.
double family_shift_closed_form(const PrincipalMatrix& pm, std::size_t k);

struct CurveShift {
    double com_form = 0;         // center-of-mass leading form
    double quadrature_form = 0;  // perturbative_shift with quadrature entries
    double ratio = 0;            // com_form / quadrature_form
    std::vector<double> com_distances;
};

CurveShift curve_shift(const PrincipalMatrix& pm, std::size_t k);

struct DegenerateSplitting {
    double binding_energy = 0;
    double phi12 = 0;        // Phi_12(E_B)
    double e_plus = 0;       // upper level (antisymmetric)
    double e_minus = 0;      // lower level (symmetric)
    double splitting = 0;    // e_plus - e_minus
    double first_order = 0;  // 2|Phi_12| / |dPhi_11/dE|
    double asymptotic = 0;   // family headline form
    double half_separation = 0;
};

DegenerateSplitting degenerate_splitting(const PrincipalMatrix& pm);

struct EigvecCorrection {
    std::size_t branch = 0;
    std::vector<double> a1;
};

EigvecCorrection eigvec_first_order(const PrincipalMatrix& pm, std::size_t k);

// Point2D first-order wavefunction correction.
double wavefunction_correction(const PrincipalMatrix& pm, std::size_t k, const std::vector<double>& x);

}  // namespace krein
