#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace krein {

struct FlatPoint {
    std::vector<double> coords;
    std::size_t dim() const { return coords.size(); }
    bool operator==(const FlatPoint&) const = default;
};

double distance(const FlatPoint& a, const FlatPoint& b);

// Point on the hyperboloid <x,x> = -1/kappa^2, x0 > 0 (Minkowski signature -,+,+,...).
class HyperbolicPoint {
public:
    HyperbolicPoint(std::vector<double> hyperboloid_coords, double kappa);
    // Lift spatial coordinates (x1..xn) onto the upper sheet.
    static HyperbolicPoint from_spatial(const std::vector<double>& spatial, double kappa);

    const std::vector<double>& coords() const { return x_; }
    double kappa() const { return kappa_; }
    std::size_t dim() const { return x_.size() - 1; }

private:
    std::vector<double> x_;
    double kappa_;
};

double minkowski(const std::vector<double>& a, const std::vector<double>& b);
double geodesic_distance(const HyperbolicPoint& p, const HyperbolicPoint& q);

enum class Interpolation { Smooth, Linear };

// Simple curve in R^n, reparametrized by arc length.
class Curve {
public:
    static Curve from_samples(std::vector<FlatPoint> samples, bool closed,
                              Interpolation mode = Interpolation::Linear);

    double length() const { return arclen_.back(); }
    bool closed() const { return closed_; }
    std::size_t dim() const { return p_.front().dim(); }
    const std::vector<FlatPoint>& samples() const { return p_; }
    // arclength_table()[i] = arc length at sample i (closed curves also hold the wrap-around total).
    const std::vector<double>& arclength_table() const { return arclen_; }

    // s in [0, L]; closed curves wrap.
    FlatPoint at(double s) const;
    void at(double s, double* out) const;

    FlatPoint center_of_mass() const;
    double diameter() const;

private:
    Curve() = default;
    std::size_t segments() const { return closed_ ? p_.size() : p_.size() - 1; }
    void hermite(std::size_t seg, double u, double* pos, double* der) const;
    double seg_arc(std::size_t seg, double u) const;
    void check_simple() const;

    std::vector<FlatPoint> p_;
    std::vector<std::vector<double>> d0_, d1_;  // per-segment end tangents, index units
    std::vector<double> arclen_;
    bool closed_ = false;
};

Curve curve_from_parametric(const std::function<std::vector<double>(double)>& fn, int n_samples, bool closed);

// Min distance between the polyline proxies.
double curve_distance(const Curve& a, const Curve& b);

struct QuadNode {
    double s, t, w;
};

enum class DiagScheme { RegularizedLog, PlainTensor };

struct QuadratureGrid {
    std::vector<QuadNode> nodes;
    DiagScheme scheme = DiagScheme::PlainTensor;
    double weight_sum() const;
};

QuadratureGrid build_offdiag_grid(const Curve& c1, const Curve& c2, int order);
// nu_hint > 0 sets the split point of the graded singular region.
QuadratureGrid build_diag_grid(const Curve& c, int order, double nu_hint = 0);

}  // namespace krein
