#include "krein/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "krein/errors.hpp"
#include "krein/numerics.hpp"
#include "krein/specfun.hpp"

namespace krein {

namespace {

constexpr double kTwoPi = 2 * kPi;
constexpr double kFourPi = 4 * kPi;
constexpr double kQuadRel = 1e-12;
constexpr double kExpCut = 745.0;

std::string fmt(double x) {
    char b[40];
    std::snprintf(b, sizeof b, "%.17g", x);
    return b;
}

double log_sinh(double x) { return x + std::log1p(-std::exp(-2 * x)) - std::log(2.0); }

}  // namespace

std::string family_name(Family f) {
    switch (f) {
        case Family::Point1D: return "Point1D";
        case Family::Point2D: return "Point2D";
        case Family::Point3D: return "Point3D";
        case Family::PointH2: return "PointH2";
        case Family::PointH3: return "PointH3";
        case Family::Salpeter1D: return "Salpeter1D";
        case Family::Relativistic2D: return "Relativistic2D";
        case Family::Curve2D: return "Curve2D";
        case Family::Curve3D: return "Curve3D";
    }
    return "?";
}

Family family_from_name(const std::string& name) {
    for (Family f : {Family::Point1D, Family::Point2D, Family::Point3D, Family::PointH2, Family::PointH3,
                     Family::Salpeter1D, Family::Relativistic2D, Family::Curve2D, Family::Curve3D})
        if (family_name(f) == name) return f;
    throw InvalidModel("unknown family '" + name + "'");
}

bool uses_couplings(Family f) { return f == Family::Point1D || f == Family::Curve2D; }
bool is_curve_family(Family f) { return f == Family::Curve2D || f == Family::Curve3D; }
bool is_hyperbolic_family(Family f) { return f == Family::PointH2 || f == Family::PointH3; }

int ambient_dimension(Family f) {
    switch (f) {
        case Family::Point1D:
        case Family::Salpeter1D: return 1;
        case Family::Point2D:
        case Family::PointH2:
        case Family::Relativistic2D:
        case Family::Curve2D: return 2;
        default: return 3;
    }
}

std::size_t ModelSpec::size() const {
    if (is_curve_family(family)) return curves.size();
    if (is_hyperbolic_family(family)) return distance_matrix.empty() ? hyperbolic_points.size() : distance_matrix.size();
    return points.size();
}

double threshold(const ModelSpec& m) {
    switch (m.family) {
        case Family::PointH2: return 0.25 * m.kappa * m.kappa;
        case Family::PointH3: return m.kappa * m.kappa;
        case Family::Salpeter1D:
        case Family::Relativistic2D: return m.mass;
        default: return 0.0;
    }
}

double lower_limit(const ModelSpec& m) {
    if (m.family == Family::Salpeter1D || m.family == Family::Relativistic2D) return -m.mass;
    return -std::numeric_limits<double>::infinity();
}

void ModelSpec::validate() const {
    const std::size_t n = size();
    if (n == 0) throw InvalidModel("model has no centers");
    if (is_hyperbolic_family(family) && !(kappa > 0)) throw InvalidModel("curvature_kappa must be positive");
    if ((family == Family::Salpeter1D || family == Family::Relativistic2D) && !(mass > 0))
        throw InvalidModel("mass_m must be positive");

    const std::vector<double>& params = uses_couplings(family) ? couplings : binding_energies;
    const char* pname = uses_couplings(family) ? "couplings_lambda" : "binding_energies";
    if (params.size() != n)
        throw InvalidModel(std::string(pname) + " has " + std::to_string(params.size()) + " entries, expected " +
                           std::to_string(n));
    if (uses_couplings(family)) {
        for (double l : couplings)
            if (!(l > 0) || !std::isfinite(l)) throw InvalidModel("couplings_lambda must be positive, got " + fmt(l));
    } else {
        const double thr = threshold(*this);
        std::string rule;
        switch (family) {
            case Family::PointH2: rule = "κ²/4 = " + fmt(thr); break;
            case Family::PointH3: rule = "κ² = " + fmt(thr); break;
            case Family::Salpeter1D:
            case Family::Relativistic2D: rule = "m = " + fmt(thr); break;
            default: rule = "0"; break;
        }
        for (double e : binding_energies) {
            if (!std::isfinite(e) || !(e < thr))
                throw InvalidModel("binding energy must lie below " + rule + ", got " + fmt(e));
            if ((family == Family::Salpeter1D || family == Family::Relativistic2D) && !(e > -mass))
                throw InvalidModel("binding energy must lie above -m = " + fmt(-mass) + ", got " + fmt(e));
        }
    }
    if (!degenerate)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (params[i] == params[j])
                    throw DegenerateError(std::string(pname) + " entries " + std::to_string(i) + " and " +
                                          std::to_string(j) + " are equal; set degenerate=true for the degenerate path");

    const int dim = ambient_dimension(family);
    if (is_curve_family(family)) {
        for (std::size_t i = 0; i < n; ++i)
            if (static_cast<int>(curves[i].dim()) != dim)
                throw InvalidModel("curve " + std::to_string(i) + " has dimension " + std::to_string(curves[i].dim()) +
                                   ", expected " + std::to_string(dim));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double d = curve_distance(curves[i], curves[j]);
                if (!(d > 1e-12 * std::max(curves[i].length(), curves[j].length())))
                    throw InvalidModel("curves " + std::to_string(i) + " and " + std::to_string(j) +
                                       " overlap (min distance " + fmt(d) + ")");
            }
    } else if (is_hyperbolic_family(family)) {
        if (!distance_matrix.empty()) {
            for (std::size_t i = 0; i < n; ++i) {
                if (distance_matrix[i].size() != n) throw InvalidModel("distance_matrix must be square");
                if (distance_matrix[i][i] != 0) throw InvalidModel("distance_matrix diagonal must be zero");
                for (std::size_t j = 0; j < n; ++j) {
                    if (distance_matrix[i][j] != distance_matrix[j][i])
                        throw InvalidModel("distance_matrix must be symmetric");
                    if (i != j && !(distance_matrix[i][j] > 0))
                        throw InvalidModel("centers " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
                }
            }
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                if (static_cast<int>(hyperbolic_points[i].dim()) != dim)
                    throw InvalidModel("hyperbolic center " + std::to_string(i) + " has wrong dimension");
                if (hyperbolic_points[i].kappa() != kappa)
                    throw InvalidModel("hyperbolic center " + std::to_string(i) + " has a different curvature");
            }
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    if (!(geodesic_distance(hyperbolic_points[i], hyperbolic_points[j]) > 0))
                        throw InvalidModel("centers " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
        }
    } else {
        for (std::size_t i = 0; i < n; ++i)
            if (static_cast<int>(points[i].dim()) != dim)
                throw InvalidModel("center " + std::to_string(i) + " has dimension " + std::to_string(points[i].dim()) +
                                   ", expected " + std::to_string(dim));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (!(distance(points[i], points[j]) > 0))
                    throw InvalidModel("centers " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
    }
}

// ---- relativistic building blocks

double salpeter_phi(double m, double z) {
    const double s = std::sqrt((m - z) * (m + z));
    return z / (kPi * s) * (0.5 * kPi + std::atan(z / s));
}

double salpeter_phi_prime(double m, double z) {
    const double s = std::sqrt((m - z) * (m + z));
    const double a = 0.5 * kPi + std::atan(z / s);
    return a * m * m / (kPi * s * s * s) + z / (kPi * s * s);
}

std::pair<double, double> salpeter_cut_integral(double m, double E, double d) {
    const double md = m * d;
    const double e2 = E * E;
    auto f = [&](double u) {
        const double sh = std::sinh(u);
        const double a = m * m * sh * sh;
        return std::exp(-md * (std::cosh(u) - 1)) * a / (a + e2);
    };
    const double U = std::acosh(1 + kExpCut / md);
    double total = 0;
    if (E != 0) {
        const double b = std::min(0.5 * U, 4 * std::fabs(E) / m);
        total += integrate_adaptive(f, 0, b, 1e-300, kQuadRel).value;
        total += integrate_adaptive(f, b, U, 1e-300, kQuadRel).value;
    } else {
        total = integrate_adaptive(f, 0, U, 1e-300, kQuadRel).value;
    }
    return {total / kPi, md};
}

double salpeter_cut_integral_dE(double m, double E, double d) {
    const double md = m * d;
    if (E == 0) return std::exp(-md) / (2 * m);
    const double e2 = E * E;
    auto f = [&](double u) {
        const double sh = std::sinh(u);
        const double a = m * m * sh * sh;
        return std::exp(-md * std::cosh(u)) * a * (-2 * E) / ((a + e2) * (a + e2));
    };
    const double U = std::acosh(1 + kExpCut / md);
    const double b = std::min(0.5 * U, 4 * std::fabs(E) / m);
    const double v = integrate_adaptive(f, 0, b, 1e-300, kQuadRel).value + integrate_adaptive(f, b, U, 1e-300, kQuadRel).value;
    return v / kPi;
}

namespace {

struct Rel2DFrame {
    double x, u0, cstar, end;
};

Rel2DFrame rel2d_frame(double m, double E, double d) {
    Rel2DFrame r;
    r.x = d * std::sqrt((m - E) * (m + E));
    r.u0 = std::atanh(E / m);
    r.cstar = r.u0 >= 0 ? 1.0 : std::cosh(r.u0);
    r.end = r.u0 + std::acosh(r.cstar + kExpCut / r.x);
    return r;
}

}  // namespace

std::pair<double, double> rel2d_integral(double m, double E, double d) {
    const Rel2DFrame fr = rel2d_frame(m, E, d);
    auto f = [&](double u) { return std::exp(-fr.x * (std::cosh(u - fr.u0) - fr.cstar)); };
    double total = 0;
    if (fr.u0 > 0) {
        total += integrate_adaptive(f, 0, fr.u0, 1e-300, kQuadRel).value;
        total += integrate_adaptive(f, fr.u0, fr.end, 1e-300, kQuadRel).value;
    } else {
        total = integrate_adaptive(f, 0, fr.end, 1e-300, kQuadRel).value;
    }
    return {total, fr.x * fr.cstar};
}

double rel2d_integral_dE(double m, double E, double d) {
    const Rel2DFrame fr = rel2d_frame(m, E, d);
    const double shift = fr.x * fr.cstar;
    auto f = [&](double u) { return d * std::sinh(u) * std::exp(-fr.x * (std::cosh(u - fr.u0) - fr.cstar)); };
    double total = 0;
    if (fr.u0 > 0) {
        total += integrate_adaptive(f, 0, fr.u0, 1e-300, kQuadRel).value;
        total += integrate_adaptive(f, fr.u0, fr.end, 1e-300, kQuadRel).value;
    } else {
        total = integrate_adaptive(f, 0, fr.end, 1e-300, kQuadRel).value;
    }
    return total * std::exp(-shift);
}

double rel2d_saddle_estimate(double m, double E, double d) {
    const double x = d * std::sqrt((m - E) * (m + E));
    return -std::exp(-x) / (std::sqrt(2 * kPi) * std::sqrt(x));
}

// ---- PrincipalMatrix

PrincipalMatrix::PrincipalMatrix(ModelSpec spec, PhiOptions opts) : spec_(std::move(spec)), opts_(opts) {
    spec_.validate();
    if (opts_.quad_order < 2) throw DomainError("quadrature order must be >= 2");
    threshold_ = krein::threshold(spec_);
    lower_ = krein::lower_limit(spec_);
    const std::size_t n = size();
    dist_.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double d;
            if (is_curve_family(spec_.family))
                d = curve_distance(spec_.curves[i], spec_.curves[j]);
            else if (is_hyperbolic_family(spec_.family))
                d = spec_.distance_matrix.empty()
                        ? geodesic_distance(spec_.hyperbolic_points[i], spec_.hyperbolic_points[j])
                        : spec_.distance_matrix[i][j];
            else
                d = distance(spec_.points[i], spec_.points[j]);
            dist_[i][j] = dist_[j][i] = d;
        }

    if (is_curve_family(spec_.family)) {
        blocks_.resize(n * (n + 1) / 2);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                const Curve& ci = spec_.curves[i];
                const Curve& cj = spec_.curves[j];
                double hint = 0;
                if (spec_.family == Family::Curve3D) hint = std::sqrt(-spec_.binding_energies[i]);
                QuadratureGrid g = i == j ? build_diag_grid(ci, opts_.quad_order, hint)
                                          : build_offdiag_grid(ci, cj, opts_.quad_order);
                Block& b = blocks_[i * n - i * (i - 1) / 2 + (j - i)];
                b.r.reserve(g.nodes.size());
                b.w.reserve(g.nodes.size());
                double p[3], q[3];
                b.r_min = std::numeric_limits<double>::infinity();
                for (const auto& nd : g.nodes) {
                    ci.at(nd.s, p);
                    cj.at(nd.t, q);
                    double r2 = 0;
                    for (std::size_t k = 0; k < ci.dim(); ++k) r2 += (p[k] - q[k]) * (p[k] - q[k]);
                    const double r = std::sqrt(r2);
                    if (i == j && r == 0) continue;  // measure-zero coincidence
                    b.r.push_back(r);
                    b.w.push_back(nd.w);
                    b.r_min = std::min(b.r_min, r);
                }
                if (i != j) {
                    if (!(b.r_min > 0)) throw SingularityError("curves touch at a quadrature node");
                    dist_[i][j] = dist_[j][i] = std::min(dist_[i][j], b.r_min);
                }
            }
    }

    e0_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        switch (spec_.family) {
            case Family::Point1D: e0_[k] = -0.25 * spec_.couplings[k] * spec_.couplings[k]; break;
            case Family::Curve2D: {
                auto f = [&](double E) { return diag(k, E); };
                double hi = -1.0 / (length(k) * length(k));
                double fhi = f(hi);
                while (fhi > 0) {
                    hi *= 0.25;
                    if (hi > -1e-280) throw ConvergenceError("no single-curve bound state found");
                    fhi = f(hi);
                }
                double lo = 4 * hi;
                double flo = f(lo);
                while (flo < 0) {
                    hi = lo;
                    fhi = flo;
                    lo *= 4;
                    if (lo < -1e280) throw ConvergenceError("no single-curve bound state found");
                    flo = f(lo);
                }
                e0_[k] = solve_bracketed(f, lo, hi, flo, fhi, 1e-15);
                break;
            }
            default: e0_[k] = spec_.binding_energies[k];
        }
    }
}

const PrincipalMatrix::Block& PrincipalMatrix::block(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    const std::size_t n = size();
    return blocks_[i * n - i * (i - 1) / 2 + (j - i)];
}

double PrincipalMatrix::length(std::size_t k) const {
    if (!is_curve_family(spec_.family)) throw UnsupportedError("length() applies to curve families only");
    return spec_.curves[k].length();
}

void PrincipalMatrix::check_energy(double E) const {
    if (!std::isfinite(E)) throw DomainError("energy must be finite");
    if (!(E < threshold_))
        throw DomainError("energy " + fmt(E) + " is not below the threshold " + fmt(threshold_));
    if (!(E > lower_)) throw DomainError("energy " + fmt(E) + " is not above -m = " + fmt(lower_));
}

double PrincipalMatrix::curve_diag_sum(std::size_t i, double nu) const {
    const Block& b = block(i, i);
    double s = 0;
    if (spec_.family == Family::Curve2D) {
        for (std::size_t q = 0; q < b.r.size(); ++q) s += b.w[q] * bessel_k0(nu * b.r[q]);
    } else {
        const double mu = std::sqrt(-spec_.binding_energies[i]);
        for (std::size_t q = 0; q < b.r.size(); ++q) {
            const double r = b.r[q];
            s += b.w[q] * std::exp(-mu * r) * -std::expm1(-(nu - mu) * r) / r;
        }
    }
    return s;
}

double PrincipalMatrix::diag(std::size_t i, double E) const {
    const double thr = threshold_;
    switch (spec_.family) {
        case Family::Point1D: return 1 / spec_.couplings[i] - 0.5 / std::sqrt(-E);
        case Family::Point2D: return std::log(std::sqrt(-E) / std::sqrt(-spec_.binding_energies[i])) / kTwoPi;
        case Family::Point3D: return (std::sqrt(-E) - std::sqrt(-spec_.binding_energies[i])) / kFourPi;
        case Family::PointH3:
            return (std::sqrt(thr - E) - std::sqrt(thr - spec_.binding_energies[i])) / kFourPi;
        case Family::PointH2: {
            const double k2 = spec_.kappa * spec_.kappa;
            const double w = 0.5 + std::sqrt(0.25 - E / k2);
            const double wb = 0.5 + std::sqrt(0.25 - spec_.binding_energies[i] / k2);
            return (digamma(w) - digamma(wb)) / kTwoPi;
        }
        case Family::Salpeter1D:
            return salpeter_phi(spec_.mass, spec_.binding_energies[i]) - salpeter_phi(spec_.mass, E);
        case Family::Relativistic2D:
            return std::log((spec_.mass - E) / (spec_.mass - spec_.binding_energies[i])) / kTwoPi;
        case Family::Curve2D: {
            const double L = spec_.curves[i].length();
            return 1 / spec_.couplings[i] - curve_diag_sum(i, std::sqrt(-E)) / (kTwoPi * L);
        }
        case Family::Curve3D: {
            const double L = spec_.curves[i].length();
            return curve_diag_sum(i, std::sqrt(-E)) / (kFourPi * L);
        }
    }
    return 0;
}

double PrincipalMatrix::diag_derivative(std::size_t i, double E) const {
    switch (spec_.family) {
        case Family::Point1D: {
            const double nu = std::sqrt(-E);
            return -0.25 / (nu * nu * nu);
        }
        case Family::Point2D: return 1 / (2 * kTwoPi * E);
        case Family::Point3D: return -1 / (8 * kPi * std::sqrt(-E));
        case Family::PointH3: return -1 / (8 * kPi * std::sqrt(threshold_ - E));
        case Family::PointH2: {
            const double k2 = spec_.kappa * spec_.kappa;
            const double root = std::sqrt(0.25 - E / k2);
            return trigamma(0.5 + root) * (-1 / (2 * k2 * root)) / kTwoPi;
        }
        case Family::Salpeter1D: return -salpeter_phi_prime(spec_.mass, E);
        case Family::Relativistic2D: return -1 / (kTwoPi * (spec_.mass - E));
        case Family::Curve2D: {
            const double nu = std::sqrt(-E);
            const Block& b = block(i, i);
            double s = 0;
            for (std::size_t q = 0; q < b.r.size(); ++q) s += b.w[q] * bessel_k1(nu * b.r[q]) * b.r[q];
            return -s / (2 * nu) / (kTwoPi * spec_.curves[i].length());
        }
        case Family::Curve3D: {
            const double nu = std::sqrt(-E);
            const Block& b = block(i, i);
            double s = 0;
            for (std::size_t q = 0; q < b.r.size(); ++q) s += b.w[q] * std::exp(-nu * b.r[q]);
            return -s / (2 * nu) / (kFourPi * spec_.curves[i].length());
        }
    }
    return 0;
}

std::pair<double, double> PrincipalMatrix::offdiag_scaled(std::size_t i, std::size_t j, double E) const {
    const double d = dist_[i][j];
    switch (spec_.family) {
        case Family::Point1D: {
            const double nu = std::sqrt(-E);
            return {-0.5 / nu, nu * d};
        }
        case Family::Point2D: {
            const double x = std::sqrt(-E) * d;
            return {-bessel_k0_scaled(x) / kTwoPi, x};
        }
        case Family::Point3D: {
            const double nu = std::sqrt(-E);
            return {-1 / (kFourPi * d), nu * d};
        }
        case Family::PointH3: {
            const double nu = std::sqrt(threshold_ - E), k = spec_.kappa;
            // k e^{-d nu} / (4 pi sinh(k d)), sinh kept in log form
            return {-k / kFourPi, d * nu + log_sinh(k * d)};
        }
        case Family::PointH2: {
            const double k2 = spec_.kappa * spec_.kappa;
            const double v = -0.5 + std::sqrt(0.25 - E / k2);
            const LegendreQResult q = legendre_q_alpha(v, spec_.kappa * d);
            return {-q.value / kTwoPi, 0.0};
        }
        case Family::Salpeter1D: {
            const double m = spec_.mass;
            const auto [cut, md] = salpeter_cut_integral(m, E, d);
            if (E > 0) {
                const double kap = std::sqrt((m - E) * (m + E));
                const double shift = kap * d;
                return {-(cut * std::exp(-(md - shift)) + E / kap), shift};
            }
            return {-cut, md};
        }
        case Family::Relativistic2D: {
            const auto [val, shift] = rel2d_integral(spec_.mass, E, d);
            return {-val / kTwoPi, shift};
        }
        case Family::Curve2D:
        case Family::Curve3D: {
            const double nu = std::sqrt(-E);
            const Block& b = block(i, j);
            const double norm = std::sqrt(spec_.curves[i].length() * spec_.curves[j].length());
            double s = 0;
            if (spec_.family == Family::Curve2D) {
                for (std::size_t q = 0; q < b.r.size(); ++q)
                    s += b.w[q] * bessel_k0_scaled(nu * b.r[q]) * std::exp(-nu * (b.r[q] - b.r_min));
                return {-s / (kTwoPi * norm), nu * b.r_min};
            }
            for (std::size_t q = 0; q < b.r.size(); ++q) s += b.w[q] * std::exp(-nu * (b.r[q] - b.r_min)) / b.r[q];
            return {-s / (kFourPi * norm), nu * b.r_min};
        }
    }
    return {0, 0};
}

double PrincipalMatrix::offdiag_derivative(std::size_t i, std::size_t j, double E) const {
    const double d = dist_[i][j];
    switch (spec_.family) {
        case Family::Point1D: {
            const double nu = std::sqrt(-E);
            return -std::exp(-nu * d) * (1 + nu * d) / (4 * nu * nu * nu);
        }
        case Family::Point2D: {
            const double nu = std::sqrt(-E);
            return -bessel_k1(nu * d) * d / (2 * kTwoPi * nu);
        }
        case Family::Point3D: {
            const double nu = std::sqrt(-E);
            return -std::exp(-nu * d) / (8 * kPi * nu);
        }
        case Family::PointH3: {
            const double nu = std::sqrt(threshold_ - E), k = spec_.kappa;
            return -k * d * std::exp(-d * nu - log_sinh(k * d)) / (8 * kPi * nu);
        }
        case Family::PointH2: {
            const double k2 = spec_.kappa * spec_.kappa;
            const double root = std::sqrt(0.25 - E / k2);
            const LegendreQResult q = legendre_q_alpha(root - 0.5, spec_.kappa * d, Accuracy{}, 10000, true);
            return -q.dv * (-1 / (2 * k2 * root)) / kTwoPi;
        }
        case Family::Salpeter1D: {
            const double m = spec_.mass;
            double v = salpeter_cut_integral_dE(m, E, d);
            if (E > 0) {
                const double kap = std::sqrt((m - E) * (m + E));
                const double ex = std::exp(-kap * d);
                v += ex / kap + E * E * ex * (d / (kap * kap) + 1 / (kap * kap * kap));
            }
            return -v;
        }
        case Family::Relativistic2D: return -rel2d_integral_dE(spec_.mass, E, d) / kTwoPi;
        case Family::Curve2D:
        case Family::Curve3D: {
            const double nu = std::sqrt(-E);
            const Block& b = block(i, j);
            const double norm = std::sqrt(spec_.curves[i].length() * spec_.curves[j].length());
            double s = 0;
            if (spec_.family == Family::Curve2D) {
                for (std::size_t q = 0; q < b.r.size(); ++q) s += b.w[q] * bessel_k1(nu * b.r[q]) * b.r[q];
                return -s / (2 * nu) / (kTwoPi * norm);
            }
            for (std::size_t q = 0; q < b.r.size(); ++q) s += b.w[q] * std::exp(-nu * b.r[q]);
            return -s / (2 * nu) / (kFourPi * norm);
        }
    }
    return 0;
}

double PrincipalMatrix::entry(std::size_t i, std::size_t j, double E) const {
    check_energy(E);
    if (i == j) return diag(i, E);
    const auto [mant, shift] = offdiag_scaled(std::min(i, j), std::max(i, j), E);
    return mant * std::exp(-shift);
}

double PrincipalMatrix::derivative_entry(std::size_t i, std::size_t j, double E) const {
    check_energy(E);
    if (i == j) return diag_derivative(i, E);
    return offdiag_derivative(std::min(i, j), std::max(i, j), E);
}

double PrincipalMatrix::log_abs_offdiag(std::size_t i, std::size_t j, double E) const {
    check_energy(E);
    if (i == j) throw DomainError("log_abs_offdiag: i == j");
    const auto [mant, shift] = offdiag_scaled(std::min(i, j), std::max(i, j), E);
    return std::log(std::fabs(mant)) - shift;
}

Matrix PrincipalMatrix::eval(double E) const {
    check_energy(E);
    const std::size_t n = size();
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = diag(i, E);
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto [mant, shift] = offdiag_scaled(i, j, E);
            m(i, j) = m(j, i) = mant * std::exp(-shift);
        }
    }
    return m;
}

Matrix PrincipalMatrix::derivative(double E) const {
    check_energy(E);
    const std::size_t n = size();
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = diag_derivative(i, E);
        for (std::size_t j = i + 1; j < n; ++j) m(i, j) = m(j, i) = offdiag_derivative(i, j, E);
    }
    return m;
}

double PrincipalMatrix::pair_bound(std::size_t i, std::size_t j, double E) const {
    check_energy(E);
    const double d = dist_[i][j];
    switch (spec_.family) {
        case Family::Point1D: {
            const double nu = std::sqrt(-E);
            return std::exp(-nu * d) * (0.5 / nu);
        }
        case Family::Point2D: {
            // from K0(x) < (2/x) e^{-x/2}
            const double nu = std::sqrt(-E);
            return std::exp(-0.5 * nu * d) / (kPi * nu * d);
        }
        case Family::Point3D: {
            const double nu = std::sqrt(-E);
            return std::exp(-nu * d) * (1 / (kFourPi * d));
        }
        case Family::PointH3: {
            const double nu = std::sqrt(threshold_ - E), k = spec_.kappa;
            return std::exp(-(d * nu + log_sinh(k * d))) * (k / kFourPi);
        }
        case Family::PointH2: {
            const double k2 = spec_.kappa * spec_.kappa;
            const double v = -0.5 + std::sqrt(0.25 - E / k2);
            const double a = spec_.kappa * d;
            const double c0 = std::exp(0.5 * std::log(kPi) + std::lgamma(v + 1) - std::lgamma(v + 1.5));
            const double c1 = c0 * 0.5 * (v + 1) / (v + 1.5);
            const double c2 = c1 * 1.5 * (v + 2) / ((v + 2.5) * 2);
            const double t0 = c0 * std::exp(-a * (v + 1));
            const double t1 = c1 * std::exp(-a * (v + 3));
            const double tail = std::max(1.0, c2) * std::exp(-a * (v + 5)) / (-std::expm1(-2 * a));
            return (t0 + t1 + tail) / kTwoPi * (1 + 1e-14);  // rounding guard
        }
        case Family::Salpeter1D: {
            const double m = spec_.mass;
            double b = bessel_k0(m * d) / kPi;
            if (E > 0) {
                const double kap = std::sqrt((m - E) * (m + E));
                b += E * std::exp(-kap * d) / kap;
            }
            return b;
        }
        case Family::Relativistic2D: {
            const double m = spec_.mass;
            return bessel_k0(d * std::sqrt((m - E) * (m + E))) / kPi;
        }
        case Family::Curve2D: {
            const double nu = std::sqrt(-E);
            const double norm = std::sqrt(spec_.curves[i].length() * spec_.curves[j].length());
            return norm / kTwoPi * bessel_k0(nu * d);
        }
        case Family::Curve3D: {
            const double nu = std::sqrt(-E);
            const double norm = std::sqrt(spec_.curves[i].length() * spec_.curves[j].length());
            return norm * std::exp(-nu * d) / (kFourPi * d);
        }
    }
    return 0;
}

double PrincipalMatrix::offdiag_bound(double E) const {
    double b = 0;
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = i + 1; j < size(); ++j) b = std::max(b, pair_bound(i, j, E));
    return b;
}

Matrix eval_phi(const ModelSpec& m, double E, PhiOptions opts) { return PrincipalMatrix(m, opts).eval(E); }
Matrix phi_derivative(const ModelSpec& m, double E, PhiOptions opts) { return PrincipalMatrix(m, opts).derivative(E); }
double offdiag_bound(const ModelSpec& m, double E, PhiOptions opts) { return PrincipalMatrix(m, opts).offdiag_bound(E); }

namespace {

void require_family(const ModelSpec& m, Family f, std::size_t i, std::size_t j) {
    if (m.family != f) throw UnsupportedError("expected family " + family_name(f));
    if (i == j) throw DomainError("off-diagonal entry requires i != j");
    if (i >= m.size() || j >= m.size()) throw DomainError("center index out of range");
}

}  // namespace

double eval_phi_offdiag_salpeter(const ModelSpec& m, double E, std::size_t i, std::size_t j) {
    require_family(m, Family::Salpeter1D, i, j);
    return PrincipalMatrix(m).entry(i, j, E);
}

double eval_phi_offdiag_rel2d(const ModelSpec& m, double E, std::size_t i, std::size_t j) {
    require_family(m, Family::Relativistic2D, i, j);
    return PrincipalMatrix(m).entry(i, j, E);
}

Matrix fd_derivative(const PrincipalMatrix& pm, double E) {
    pm.check_energy(E);
    double h = 1e-4 * std::max(1.0, std::fabs(E));
    h = std::min(h, 0.25 * (pm.threshold() - E));
    if (std::isfinite(pm.lower_limit())) h = std::min(h, 0.25 * (E - pm.lower_limit()));
    auto central = [&](double step) {
        Matrix a = pm.eval(E + step), b = pm.eval(E - step);
        Matrix r(pm.size());
        for (std::size_t i = 0; i < pm.size(); ++i)
            for (std::size_t j = 0; j < pm.size(); ++j) r(i, j) = (a(i, j) - b(i, j)) / (2 * step);
        return r;
    };
    Matrix d1 = central(h), d2 = central(0.5 * h);
    Matrix r(pm.size());
    for (std::size_t i = 0; i < pm.size(); ++i)
        for (std::size_t j = 0; j < pm.size(); ++j) r(i, j) = (4 * d2(i, j) - d1(i, j)) / 3;
    return r;
}

}  // namespace krein
