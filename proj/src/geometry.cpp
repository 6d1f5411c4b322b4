#include "krein/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "krein/errors.hpp"
#include "krein/numerics.hpp"

namespace krein {

double distance(const FlatPoint& a, const FlatPoint& b) {
    if (a.dim() != b.dim()) throw MismatchError("distance: dimension mismatch");
    double s = 0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += (a.coords[i] - b.coords[i]) * (a.coords[i] - b.coords[i]);
    return std::sqrt(s);
}

double minkowski(const std::vector<double>& a, const std::vector<double>& b) {
    double s = -a[0] * b[0];
    for (std::size_t i = 1; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

HyperbolicPoint::HyperbolicPoint(std::vector<double> x, double kappa) : x_(std::move(x)), kappa_(kappa) {
    if (!(kappa > 0)) throw DomainError("hyperbolic point: curvature must be positive");
    if (x_.size() != 3 && x_.size() != 4) throw DomainError("hyperbolic point: need 3 or 4 hyperboloid coordinates");
    if (!(x_[0] > 0)) throw DomainError("hyperbolic point: time component must be positive");
    const double norm = minkowski(x_, x_) * kappa * kappa;
    if (std::fabs(norm + 1) > 1e-12 * std::max(1.0, x_[0] * x_[0] * kappa * kappa))
        throw DomainError("hyperbolic point: not on the hyperboloid <x,x> = -1/kappa^2");
}

HyperbolicPoint HyperbolicPoint::from_spatial(const std::vector<double>& spatial, double kappa) {
    if (!(kappa > 0)) throw DomainError("hyperbolic point: curvature must be positive");
    std::vector<double> x(spatial.size() + 1);
    double r2 = 0;
    for (std::size_t i = 0; i < spatial.size(); ++i) {
        x[i + 1] = spatial[i];
        r2 += spatial[i] * spatial[i];
    }
    x[0] = std::sqrt(1 / (kappa * kappa) + r2);
    return HyperbolicPoint(std::move(x), kappa);
}

double geodesic_distance(const HyperbolicPoint& p, const HyperbolicPoint& q) {
    if (p.kappa() != q.kappa()) throw MismatchError("geodesic_distance: curvature mismatch");
    if (p.dim() != q.dim()) throw MismatchError("geodesic_distance: dimension mismatch");
    std::vector<double> diff(p.coords().size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = p.coords()[i] - q.coords()[i];
    // <p-q,p-q> = (2/k^2)(cosh(kd) - 1); asinh form keeps precision for close points
    const double chord2 = std::max(0.0, minkowski(diff, diff));
    const double k = p.kappa();
    return 2 / k * std::asinh(0.5 * k * std::sqrt(chord2));
}

namespace {

struct SegDist {
    double dist, u, v;
};

// Closest points between segments p0p1 and q0q1 in any dimension.
SegDist segment_distance(const double* p0, const double* p1, const double* q0, const double* q1, std::size_t n) {
    double a = 0, b = 0, c = 0, d = 0, e = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d1 = p1[i] - p0[i], d2 = q1[i] - q0[i], r = p0[i] - q0[i];
        a += d1 * d1;
        e += d2 * d2;
        b += d1 * d2;
        c += d1 * r;
        d += d2 * r;
    }
    double s, t;
    const double eps = 1e-300;
    if (a <= eps && e <= eps) {
        s = t = 0;
    } else if (a <= eps) {
        s = 0;
        t = std::clamp(d / e, 0.0, 1.0);
    } else if (e <= eps) {
        t = 0;
        s = std::clamp(-c / a, 0.0, 1.0);
    } else {
        const double denom = a * e - b * b;
        s = denom > 0 ? std::clamp((b * d - c * e) / denom, 0.0, 1.0) : 0.0;
        t = (b * s + d) / e;
        if (t < 0) {
            t = 0;
            s = std::clamp(-c / a, 0.0, 1.0);
        } else if (t > 1) {
            t = 1;
            s = std::clamp((b - c) / a, 0.0, 1.0);
        }
    }
    double dist2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = p0[i] + s * (p1[i] - p0[i]) - q0[i] - t * (q1[i] - q0[i]);
        dist2 += x * x;
    }
    return {std::sqrt(dist2), s, t};
}

struct Box {
    double lo[3], hi[3];
};

Box seg_box(const FlatPoint& a, const FlatPoint& b) {
    Box bx{};
    for (std::size_t i = 0; i < a.dim(); ++i) {
        bx.lo[i] = std::min(a.coords[i], b.coords[i]);
        bx.hi[i] = std::max(a.coords[i], b.coords[i]);
    }
    return bx;
}

double box_gap(const Box& x, const Box& y, std::size_t n) {
    double g = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = std::max({0.0, x.lo[i] - y.hi[i], y.lo[i] - x.hi[i]});
        g += d * d;
    }
    return std::sqrt(g);
}

}  // namespace

Curve Curve::from_samples(std::vector<FlatPoint> samples, bool closed, Interpolation mode) {
    if (samples.size() < 2) throw DomainError("curve: need at least two samples");
    const std::size_t dim = samples.front().dim();
    if (dim < 1 || dim > 3) throw DomainError("curve: ambient dimension must be 1, 2 or 3");
    for (const auto& p : samples)
        if (p.dim() != dim) throw DomainError("curve: samples have inconsistent dimension");
    if (closed && samples.size() >= 3 && distance(samples.front(), samples.back()) == 0) samples.pop_back();
    if (closed && samples.size() < 3) throw DomainError("curve: closed curve needs at least three distinct samples");

    Curve c;
    c.p_ = std::move(samples);
    c.closed_ = closed;
    const std::size_t n = c.p_.size(), m = c.segments();
    for (std::size_t i = 0; i < m; ++i)
        if (distance(c.p_[i], c.p_[(i + 1) % n]) == 0)
            throw DomainError("curve: repeated consecutive sample at index " + std::to_string(i));

    const bool smooth = mode == Interpolation::Smooth && n >= 5;
    std::vector<std::vector<double>> tan(n, std::vector<double>(dim, 0.0));
    if (smooth) {
        auto P = [&](long i, std::size_t k) { return c.p_[static_cast<std::size_t>(i)].coords[k]; };
        const long N = static_cast<long>(n);
        for (long i = 0; i < N; ++i)
            for (std::size_t k = 0; k < dim; ++k) {
                if (closed) {
                    auto W = [&](long j) { return P(((j % N) + N) % N, k); };
                    tan[i][k] = (W(i - 2) - 8 * W(i - 1) + 8 * W(i + 1) - W(i + 2)) / 12;
                } else if (i == 0) {
                    tan[i][k] = (-25 * P(0, k) + 48 * P(1, k) - 36 * P(2, k) + 16 * P(3, k) - 3 * P(4, k)) / 12;
                } else if (i == 1) {
                    tan[i][k] = (-3 * P(0, k) - 10 * P(1, k) + 18 * P(2, k) - 6 * P(3, k) + P(4, k)) / 12;
                } else if (i == N - 1) {
                    tan[i][k] = (25 * P(N - 1, k) - 48 * P(N - 2, k) + 36 * P(N - 3, k) - 16 * P(N - 4, k) + 3 * P(N - 5, k)) / 12;
                } else if (i == N - 2) {
                    tan[i][k] = (3 * P(N - 1, k) + 10 * P(N - 2, k) - 18 * P(N - 3, k) + 6 * P(N - 4, k) - P(N - 5, k)) / 12;
                } else {
                    tan[i][k] = (P(i - 2, k) - 8 * P(i - 1, k) + 8 * P(i + 1, k) - P(i + 2, k)) / 12;
                }
            }
    }
    c.d0_.resize(m);
    c.d1_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& a = c.p_[i].coords;
        const auto& b = c.p_[(i + 1) % n].coords;
        if (smooth) {
            c.d0_[i] = tan[i];
            c.d1_[i] = tan[(i + 1) % n];
        } else {
            std::vector<double> chord(dim);
            for (std::size_t k = 0; k < dim; ++k) chord[k] = b[k] - a[k];
            c.d0_[i] = c.d1_[i] = chord;
        }
    }
    c.arclen_.assign(m + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i) c.arclen_[i + 1] = c.arclen_[i] + c.seg_arc(i, 1.0);
    for (std::size_t i = 0; i < m; ++i)
        if (!(c.arclen_[i + 1] > c.arclen_[i])) throw DomainError("curve: arc-length table not increasing");
    c.check_simple();
    return c;
}

void Curve::hermite(std::size_t seg, double u, double* pos, double* der) const {
    const std::size_t n = p_.size(), dim = this->dim();
    const auto& a = p_[seg].coords;
    const auto& b = p_[(seg + 1) % n].coords;
    const auto& d0 = d0_[seg];
    const auto& d1 = d1_[seg];
    const double u2 = u * u, u3 = u2 * u;
    const double h00 = 2 * u3 - 3 * u2 + 1, h10 = u3 - 2 * u2 + u, h01 = -2 * u3 + 3 * u2, h11 = u3 - u2;
    const double g00 = 6 * u2 - 6 * u, g10 = 3 * u2 - 4 * u + 1, g01 = -6 * u2 + 6 * u, g11 = 3 * u2 - 2 * u;
    for (std::size_t k = 0; k < dim; ++k) {
        if (pos) pos[k] = h00 * a[k] + h10 * d0[k] + h01 * b[k] + h11 * d1[k];
        if (der) der[k] = g00 * a[k] + g10 * d0[k] + g01 * b[k] + g11 * d1[k];
    }
}

double Curve::seg_arc(std::size_t seg, double u) const {
    const GaussRule& g = gauss_legendre(12);
    double der[3];
    double s = 0;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
        const double x = 0.5 * u * (g.x[i] + 1);
        hermite(seg, x, nullptr, der);
        double v = 0;
        for (std::size_t k = 0; k < dim(); ++k) v += der[k] * der[k];
        s += g.w[i] * std::sqrt(v);
    }
    return 0.5 * u * s;
}

void Curve::at(double s, double* out) const {
    const double L = length();
    if (closed_) {
        s = std::fmod(s, L);
        if (s < 0) s += L;
    } else {
        s = std::clamp(s, 0.0, L);
    }
    const std::size_t m = segments();
    std::size_t seg = static_cast<std::size_t>(std::upper_bound(arclen_.begin(), arclen_.end(), s) - arclen_.begin());
    seg = seg == 0 ? 0 : std::min(seg - 1, m - 1);
    const double target = s - arclen_[seg];
    const double seglen = arclen_[seg + 1] - arclen_[seg];
    double u = std::clamp(target / seglen, 0.0, 1.0);
    double der[3];
    for (int it = 0; it < 8; ++it) {
        const double g = seg_arc(seg, u) - target;
        hermite(seg, u, nullptr, der);
        double sp = 0;
        for (std::size_t k = 0; k < dim(); ++k) sp += der[k] * der[k];
        sp = std::sqrt(sp);
        if (sp <= 0) break;
        const double du = g / sp;
        u = std::clamp(u - du, 0.0, 1.0);
        if (std::fabs(du) < 1e-15) break;
    }
    hermite(seg, u, out, nullptr);
}

FlatPoint Curve::at(double s) const {
    FlatPoint p;
    p.coords.resize(dim());
    at(s, p.coords.data());
    return p;
}

FlatPoint Curve::center_of_mass() const {
    const GaussRule& g = gauss_legendre(12);
    FlatPoint c;
    c.coords.assign(dim(), 0.0);
    double pos[3], der[3];
    for (std::size_t seg = 0; seg < segments(); ++seg)
        for (std::size_t i = 0; i < g.x.size(); ++i) {
            const double u = 0.5 * (g.x[i] + 1);
            hermite(seg, u, pos, der);
            double sp = 0;
            for (std::size_t k = 0; k < dim(); ++k) sp += der[k] * der[k];
            const double w = 0.5 * g.w[i] * std::sqrt(sp);
            for (std::size_t k = 0; k < dim(); ++k) c.coords[k] += w * pos[k];
        }
    for (double& x : c.coords) x /= length();
    return c;
}

double Curve::diameter() const {
    const std::size_t n = p_.size();
    const std::size_t stride = std::max<std::size_t>(1, n / 1024);
    double d = 0;
    for (std::size_t i = 0; i < n; i += stride)
        for (std::size_t j = i + stride; j < n; j += stride) d = std::max(d, distance(p_[i], p_[j]));
    return d;
}

void Curve::check_simple() const {
    const std::size_t n = p_.size(), m = segments(), dim = this->dim();
    const double tol = 1e-9 * length();
    std::vector<Box> boxes(m);
    for (std::size_t i = 0; i < m; ++i) boxes[i] = seg_box(p_[i], p_[(i + 1) % n]);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 2; j < m; ++j) {
            if (closed_ && i == 0 && j == m - 1) continue;
            if (box_gap(boxes[i], boxes[j], dim) > tol) continue;
            const SegDist sd = segment_distance(p_[i].coords.data(), p_[(i + 1) % n].coords.data(),
                                                p_[j].coords.data(), p_[(j + 1) % n].coords.data(), dim);
            if (sd.dist <= tol) {
                char buf[160];
                std::snprintf(buf, sizeof buf, "curve self-intersects at parameter pair (%.9g, %.9g)",
                              (i + sd.u) / static_cast<double>(m), (j + sd.v) / static_cast<double>(m));
                throw SelfIntersectionError(buf);
            }
        }
}

Curve curve_from_parametric(const std::function<std::vector<double>(double)>& fn, int n_samples, bool closed) {
    if (n_samples < 16) throw DomainError("curve_from_parametric: need at least 16 samples");
    std::vector<FlatPoint> pts;
    pts.reserve(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        const double t = closed ? static_cast<double>(i) / n_samples : static_cast<double>(i) / (n_samples - 1);
        pts.push_back(FlatPoint{fn(t)});
    }
    return Curve::from_samples(std::move(pts), closed, Interpolation::Smooth);
}

double curve_distance(const Curve& a, const Curve& b) {
    if (a.dim() != b.dim()) throw MismatchError("curve_distance: dimension mismatch");
    const auto& pa = a.samples();
    const auto& pb = b.samples();
    const std::size_t ma = a.closed() ? pa.size() : pa.size() - 1;
    const std::size_t mb = b.closed() ? pb.size() : pb.size() - 1;
    std::vector<Box> bb(mb);
    for (std::size_t j = 0; j < mb; ++j) bb[j] = seg_box(pb[j], pb[(j + 1) % pb.size()]);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ma; ++i) {
        const Box ba = seg_box(pa[i], pa[(i + 1) % pa.size()]);
        for (std::size_t j = 0; j < mb; ++j) {
            if (box_gap(ba, bb[j], a.dim()) >= best) continue;
            const SegDist sd = segment_distance(pa[i].coords.data(), pa[(i + 1) % pa.size()].coords.data(),
                                                pb[j].coords.data(), pb[(j + 1) % pb.size()].coords.data(), a.dim());
            best = std::min(best, sd.dist);
        }
    }
    return best;
}

double QuadratureGrid::weight_sum() const {
    double s = 0;
    for (const auto& q : nodes) s += q.w;
    return s;
}

QuadratureGrid build_offdiag_grid(const Curve& c1, const Curve& c2, int order) {
    if (order < 1) throw DomainError("quadrature order must be >= 1");
    const double d = curve_distance(c1, c2);
    if (!(d > 1e-12 * std::max(c1.length(), c2.length())))
        throw OverlapError("curves overlap (min distance " + std::to_string(d) + ")");
    const GaussRule& g = gauss_legendre(order);
    QuadratureGrid q;
    q.scheme = DiagScheme::PlainTensor;
    const double l1 = c1.length(), l2 = c2.length();
    q.nodes.reserve(static_cast<std::size_t>(order) * order);
    for (int i = 0; i < order; ++i)
        for (int j = 0; j < order; ++j)
            q.nodes.push_back({0.5 * l1 * (g.x[i] + 1), 0.5 * l2 * (g.x[j] + 1), 0.25 * l1 * l2 * g.w[i] * g.w[j]});
    return q;
}

namespace {

// Graded composite rule on [0, b] refined geometrically toward 0, then doubling panels to `end`.
std::vector<std::pair<double, double>> graded_rule(double b, double end, int order) {
    constexpr double kRatio = 0.15;
    constexpr int kLevels = 18;
    const GaussRule& g = gauss_legendre(order);
    std::vector<std::pair<double, double>> r;
    auto panel = [&](double lo, double hi) {
        for (int i = 0; i < order; ++i) r.emplace_back(lo + 0.5 * (hi - lo) * (g.x[i] + 1), 0.5 * (hi - lo) * g.w[i]);
    };
    double hi = b;
    for (int j = 0; j < kLevels; ++j) {
        panel(hi * kRatio, hi);
        hi *= kRatio;
    }
    panel(0, hi);
    double lo = b;
    while (lo < end * (1 - 1e-14)) {
        double up = std::min(end, 2 * lo);
        if (end - up < 0.25 * lo) up = end;
        panel(lo, up);
        lo = up;
    }
    return r;
}

}  // namespace

QuadratureGrid build_diag_grid(const Curve& c, int order, double nu_hint) {
    if (order < 1) throw DomainError("quadrature order must be >= 1");
    const double L = c.length();
    QuadratureGrid q;
    q.scheme = DiagScheme::RegularizedLog;
    if (!c.closed()) {
        // s = xi - eta, s' = xi + eta; I = 4 int_0^{L/2} d eta int_eta^{L-eta} d xi f
        const double eta0 = nu_hint > 0 ? std::min(0.5 / nu_hint, 0.25 * L) : 0.25 * L;
        const auto eta_rule = graded_rule(eta0, 0.5 * L, order);
        const GaussRule& g = gauss_legendre(order);
        q.nodes.reserve(eta_rule.size() * order);
        for (const auto& [eta, weta] : eta_rule) {
            const double lo = eta, hi = L - eta, half = 0.5 * (hi - lo);
            for (int i = 0; i < order; ++i) {
                const double xi = lo + half * (g.x[i] + 1);
                q.nodes.push_back({xi - eta, xi + eta, 4 * weta * half * g.w[i]});
            }
        }
    } else {
        // I = 2 int_0^{L/2} dt int_0^L ds f(s, s+t), periodic trapezoid in s
        const double t0 = nu_hint > 0 ? std::min(1.0 / nu_hint, 0.25 * L) : 0.25 * L;
        const auto t_rule = graded_rule(t0, 0.5 * L, order);
        const int ns = 2 * order;
        const double hs = L / ns;
        q.nodes.reserve(t_rule.size() * ns);
        for (const auto& [t, wt] : t_rule)
            for (int i = 0; i < ns; ++i) {
                const double s = i * hs;
                q.nodes.push_back({s, std::fmod(s + t, L), 2 * wt * hs});
            }
    }
    return q;
}

}  // namespace krein
