#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "krein/models.hpp"

namespace testutil {

inline const std::vector<krein::Family>& all_families() {
    using krein::Family;
    static const std::vector<Family> f{Family::Point1D,    Family::Point2D,        Family::Point3D,
                                       Family::PointH2,    Family::PointH3,        Family::Salpeter1D,
                                       Family::Relativistic2D, Family::Curve2D,    Family::Curve3D};
    return f;
}

// Distinct draws from [lo, hi].
inline std::vector<double> distinct(std::mt19937_64& rng, int n, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v;
    while (static_cast<int>(v.size()) < n) {
        const double x = u(rng);
        bool ok = true;
        for (double y : v) ok = ok && std::fabs(x - y) > 0.02 * (hi - lo);
        if (ok) v.push_back(x);
    }
    return v;
}

// n points in R^dim with pairwise distance >= dmin inside a box of side box.
inline std::vector<std::vector<double>> spread(std::mt19937_64& rng, int n, int dim, double dmin, double box) {
    std::uniform_real_distribution<double> u(0, box);
    std::vector<std::vector<double>> pts;
    while (static_cast<int>(pts.size()) < n) {
        std::vector<double> p(dim);
        for (auto& c : p) c = u(rng);
        bool ok = true;
        for (const auto& q : pts) {
            double d2 = 0;
            for (int i = 0; i < dim; ++i) d2 += (p[i] - q[i]) * (p[i] - q[i]);
            ok = ok && std::sqrt(d2) >= dmin;
        }
        if (ok) pts.push_back(p);
    }
    return pts;
}

inline krein::Curve ring(const std::vector<double>& c, double r, int n = 48) {
    return krein::curve_from_parametric(
        [c, r](double t) {
            std::vector<double> p = c;
            p[0] += r * std::cos(2 * M_PI * t);
            p[1] += r * std::sin(2 * M_PI * t);
            return p;
        },
        n, true);
}

inline krein::ModelSpec random_model(krein::Family f, std::mt19937_64& rng, int n = 3) {
    using krein::Family;
    krein::ModelSpec m;
    m.family = f;
    const int dim = krein::ambient_dimension(f);
    std::uniform_real_distribution<double> ur(0.3, 0.6);
    switch (f) {
        case Family::Point1D:
            m.couplings = distinct(rng, n, 0.8, 2.0);
            for (auto& p : spread(rng, n, 1, 3.0, 12.0 * n)) m.points.push_back({p});
            break;
        case Family::Point2D:
        case Family::Point3D:
            m.binding_energies = distinct(rng, n, -1.5, -0.3);
            for (auto& p : spread(rng, n, dim, 3.0, 8.0 * n)) m.points.push_back({p});
            break;
        case Family::PointH2:
        case Family::PointH3:
            m.kappa = 1;
            m.binding_energies = distinct(rng, n, -1.5, f == Family::PointH2 ? 0.2 : 0.8);
            for (auto& p : spread(rng, n, dim, 2.0, 4.0 * n))
                m.hyperbolic_points.push_back(krein::HyperbolicPoint::from_spatial(p, 1.0));
            break;
        case Family::Salpeter1D:
        case Family::Relativistic2D:
            m.mass = 1;
            m.binding_energies = distinct(rng, n, -0.8, 0.8);
            for (auto& p : spread(rng, n, dim, 2.5, 8.0 * n)) m.points.push_back({p});
            break;
        case Family::Curve2D:
            m.couplings = distinct(rng, n, 1.0, 3.0);
            for (auto& p : spread(rng, n, 2, 4.0, 8.0 * n)) m.curves.push_back(ring(p, ur(rng)));
            break;
        case Family::Curve3D:
            m.binding_energies = distinct(rng, n, -1.5, -0.4);
            for (auto& p : spread(rng, n, 3, 4.0, 8.0 * n)) m.curves.push_back(ring(p, ur(rng)));
            break;
    }
    return m;
}

}  // namespace testutil
