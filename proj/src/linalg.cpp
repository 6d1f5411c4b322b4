#include "krein/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "krein/errors.hpp"

namespace krein {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

double Matrix::max_abs() const {
    double r = 0;
    for (double x : a_) r = std::max(r, std::fabs(x));
    return r;
}

double Matrix::asymmetry() const {
    double r = 0;
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j) r = std::max(r, std::fabs((*this)(i, j) - (*this)(j, i)));
    return r;
}

Matrix Matrix::transpose() const {
    Matrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix Matrix::operator*(const Matrix& o) const {
    Matrix r(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = 0; k < n_; ++k) {
            const double a = (*this)(i, k);
            for (std::size_t j = 0; j < n_; ++j) r(i, j) += a * o(k, j);
        }
    return r;
}

std::vector<double> Matrix::operator*(const std::vector<double>& v) const {
    std::vector<double> r(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) r[i] += (*this)(i, j) * v[j];
    return r;
}

std::vector<double> EigenSystem::vector(std::size_t k) const {
    std::vector<double> v(vectors.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = vectors(i, k);
    return v;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void fix_sign(std::vector<double>& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (std::fabs(v[i]) > std::fabs(v[best]) * (1 + 1e-12)) best = i;
    if (!v.empty() && v[best] < 0)
        for (double& x : v) x = -x;
}

EigenSystem eig_sym(const Matrix& m) {
    const std::size_t n = m.size();
    const double scale = m.max_abs();
    if (m.asymmetry() > 1e-12 * std::max(1.0, scale)) throw SymmetryError("eig_sym: matrix is not symmetric");

    Matrix a = m;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (m(i, j) + m(j, i));
    Matrix v = Matrix::identity(n);

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (std::sqrt(off) <= 1e-18 * scale || off == 0) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0) continue;
                const double app = a(p, p), aqq = a(q, q);
                // rotation negligible relative to both diagonals
                if (sweep > 3 && std::fabs(apq) <= 1e-18 * std::fabs(app) && std::fabs(apq) <= 1e-18 * std::fabs(aqq)) {
                    a(p, q) = a(q, p) = 0;
                    continue;
                }
                const double theta = (aqq - app) / (2 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1));
                const double c = 1 / std::sqrt(t * t + 1), s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = a(q, p) = 0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
    EigenSystem es;
    es.values.resize(n);
    es.vectors = Matrix(n);
    for (std::size_t k = 0; k < n; ++k) {
        es.values[k] = a(order[k], order[k]);
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = v(i, order[k]);
        fix_sign(col);
        for (std::size_t i = 0; i < n; ++i) es.vectors(i, k) = col[i];
    }
    return es;
}

}  // namespace krein
