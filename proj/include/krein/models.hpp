#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "krein/geometry.hpp"
#include "krein/linalg.hpp"

namespace krein {

enum class Family { Point1D, Point2D, Point3D, PointH2, PointH3, Salpeter1D, Relativistic2D, Curve2D, Curve3D };

std::string family_name(Family f);
Family family_from_name(const std::string& name);  // throws InvalidModel
bool uses_couplings(Family f);                      // Point1D, Curve2D
bool is_curve_family(Family f);
bool is_hyperbolic_family(Family f);
int ambient_dimension(Family f);

struct ModelSpec {
    Family family = Family::Point1D;
    std::vector<FlatPoint> points;               // flat point families
    std::vector<HyperbolicPoint> hyperbolic_points;
    std::vector<std::vector<double>> distance_matrix;  // hyperbolic alternative to coordinates
    std::vector<Curve> curves;
    std::vector<double> couplings;         // lambda_i
    std::vector<double> binding_energies;  // E_B^i
    double mass = 1.0;
    double kappa = 1.0;
    bool degenerate = false;  // allow equal parameters

    std::size_t size() const;
    void validate() const;  // throws InvalidModel / DegenerateError
};

// Bottom of the free continuous spectrum.
double threshold(const ModelSpec& m);
// Lower end of the real window where the formulas apply (-inf or -m).
double lower_limit(const ModelSpec& m);

struct PhiOptions {
    int quad_order = 32;
};

// Immutable evaluator of Phi(E). Curve quadrature grids are built once here.
class PrincipalMatrix {
public:
    explicit PrincipalMatrix(ModelSpec spec, PhiOptions opts = {});

    const ModelSpec& model() const { return spec_; }
    const PhiOptions& options() const { return opts_; }
    std::size_t size() const { return spec_.size(); }
    double threshold() const { return threshold_; }
    double lower_limit() const { return lower_; }

    Matrix eval(double E) const;
    Matrix derivative(double E) const;
    double entry(std::size_t i, std::size_t j, double E) const;
    double derivative_entry(std::size_t i, std::size_t j, double E) const;
    // log |Phi_ij(E)|, i != j, without underflow.
    double log_abs_offdiag(std::size_t i, std::size_t j, double E) const;

    // Upper bound on max_{i != j} |Phi_ij(E)|.
    double offdiag_bound(double E) const;
    double pair_bound(std::size_t i, std::size_t j, double E) const;

    // Geodesic / Euclidean / min curve distance.
    double separation(std::size_t i, std::size_t j) const { return dist_[i][j]; }
    // Single-center bound energy: -lambda^2/4 (Point1D), single-curve root (Curve2D), E_B otherwise.
    double zeroth_order_energy(std::size_t k) const { return e0_[k]; }
    double length(std::size_t k) const;

    void check_energy(double E) const;

private:
    struct Block {
        std::vector<double> r, w;
        double r_min = 0;
    };
    // value = mantissa * exp(-shift)
    std::pair<double, double> offdiag_scaled(std::size_t i, std::size_t j, double E) const;
    double diag(std::size_t i, double E) const;
    double diag_derivative(std::size_t i, double E) const;
    double offdiag_derivative(std::size_t i, std::size_t j, double E) const;
    const Block& block(std::size_t i, std::size_t j) const;
    double curve_diag_sum(std::size_t i, double nu) const;

    ModelSpec spec_;
    PhiOptions opts_;
    double threshold_, lower_;
    std::vector<std::vector<double>> dist_;
    std::vector<Block> blocks_;
    std::vector<double> e0_;
};

Matrix eval_phi(const ModelSpec& m, double E, PhiOptions opts = {});
Matrix phi_derivative(const ModelSpec& m, double E, PhiOptions opts = {});
double offdiag_bound(const ModelSpec& m, double E, PhiOptions opts = {});
double eval_phi_offdiag_salpeter(const ModelSpec& m, double E, std::size_t i, std::size_t j);
double eval_phi_offdiag_rel2d(const ModelSpec& m, double E, std::size_t i, std::size_t j);

// Building blocks shared with the perturbation formulas.
double salpeter_phi(double m, double z);
double salpeter_phi_prime(double m, double z);
// (1/pi) int_m^inf e^{-mu d} sqrt(mu^2-m^2)/(mu^2-m^2+E^2) dmu, as (mantissa, shift = m d).
std::pair<double, double> salpeter_cut_integral(double m, double E, double d);
double salpeter_cut_integral_dE(double m, double E, double d);
// int_0^inf ds/sqrt(1+s^2) exp(-d(m sqrt(1+s^2) - E s)), as (mantissa, shift = d sqrt(m^2-E^2)).
std::pair<double, double> rel2d_integral(double m, double E, double d);
double rel2d_integral_dE(double m, double E, double d);
double rel2d_saddle_estimate(double m, double E, double d);

// Central differences with one Richardson step; independent check of derivative().
Matrix fd_derivative(const PrincipalMatrix& pm, double E);

}  // namespace krein
