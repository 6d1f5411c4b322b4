#include <cmath>
#include <random>

#include "doctest.h"
#include "krein/errors.hpp"
#include "krein/specfun.hpp"
#include "test_util.hpp"

#ifdef KREIN_HAVE_BOOST
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/lambert_w.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#endif

using namespace krein;
using testutil::rel;

namespace {

struct Ref {
    double x, k0, k1;
};

// mpmath, 40 digits (tests/oracles/freeze_values.py)
const Ref kBessel[] = {
    {1e-8, 18.536612259610778409, 99999999.999999904817},
    {1e-3, 7.0236888005623813436, 999.99623815608557428},
    {0.1, 2.4270690247020166125, 9.8538447808706061348},
    {1, 0.42102443824070833334, 0.60190723019723457474},
    {1.999, 0.11403383058923292414, 0.1400498420771096829},
    {2, 0.11389387274953343565, 0.13986588181652242728},
    {2.001, 0.1137540987366846116, 0.13968218830176753496},
    {3.7, 0.015630659921626661612, 0.017628035102223266688},
    {10, 1.7780062316167651811e-5, 1.8648773453825584597e-5},
    {50, 3.4101677497894955139e-23, 3.4441022267175556126e-23},
    {300, 3.7236948548891432633e-132, 3.7298958583323726986e-132},
    {700, 4.669776431685376881e-306, 4.6731107967079661091e-306},
};

struct PsiRef {
    double w, psi, psi1;
};

const PsiRef kPsi[] = {
    {0.001, -1000.5755719318103005, 1000001.642533195869},
    {0.5, -1.9635100260214234794, 4.9348022005446793094},
    {3.3, 1.0348224890596217491, 0.35350154184106181026},
    {7.99, 2.0143092220462237711, 0.13331424565985760013},
    {8, 2.0156414779556099965, 0.13313701469403142513},
    {25, 3.1987425128519740085, 0.040810663257225579187},
    {1000, 6.9072551956488120521, 0.0010005001666666333334},
};

}  // namespace

TEST_SUITE("specfun") {
    TEST_CASE("K0 and K1 against frozen high-precision values") {
        for (const auto& r : kBessel) {
            CAPTURE(r.x);
            CHECK(rel(bessel_k0(r.x), r.k0) < 1e-12);
            CHECK(rel(bessel_k1(r.x), r.k1) < 1e-12);
            CHECK(rel(bessel_k0_scaled(r.x), r.k0 * std::exp(r.x)) < 1e-12);
            CHECK(rel(bessel_k1_scaled(r.x), r.k1 * std::exp(r.x)) < 1e-12);
        }
    }

    TEST_CASE("K0 and K1 against the standard library on a dense ladder") {
        for (double x = 0.01; x < 600; x *= 1.07) {
            CAPTURE(x);
            CHECK(rel(bessel_k0(x), std::cyl_bessel_k(0.0, x)) < 5e-12);
            CHECK(rel(bessel_k1(x), std::cyl_bessel_k(1.0, x)) < 5e-12);
        }
    }

    TEST_CASE("Bessel examples and limits") {
        CHECK(bessel_k0(1) == doctest::Approx(0.42102443824070834).epsilon(1e-15));
        CHECK(bessel_k1(1) == doctest::Approx(0.6019072301972346).epsilon(1e-15));
        const double k = bessel_k0(1e-6);
        CHECK(k >= 13.0);
        CHECK(k <= 14.5);
        CHECK(rel(bessel_k0(1e-6), -std::log(0.5e-6) - kEulerGamma) < 1e-10);
        CHECK(rel(bessel_k1(1e-6), 1e6) < 1e-4);
        CHECK(rel(bessel_k0(50), std::sqrt(kPi / 100) * std::exp(-50.0)) < 0.01);
        CHECK(bessel_k0(747) == 0.0);
        CHECK(bessel_k1(800) == 0.0);
        CHECK(bessel_k0_scaled(1e4) > 0);
        CHECK_THROWS_AS(bessel_k0(0), DomainError);
        CHECK_THROWS_AS(bessel_k1(-1), DomainError);
    }

    TEST_CASE("dK0/dx = -K1 by central differences") {
        for (int i = 0; i < 20; ++i) {
            const double x = 0.1 * std::pow(200.0, i / 19.0);
            const double h = 1e-5 * x;
            const double fd = (bessel_k0(x + h) - bessel_k0(x - h)) / (2 * h);
            CAPTURE(x);
            CHECK(rel(fd, -bessel_k1(x)) < 1e-6);
        }
    }

    TEST_CASE("K0 upper bound (2/x) e^{-x/2}") {
        for (double x = 1e-4; x < 700; x *= 1.05) CHECK(bessel_k0(x) < 2 / x * std::exp(-0.5 * x));
    }

    TEST_CASE("digamma and trigamma") {
        for (const auto& r : kPsi) {
            CAPTURE(r.w);
            CHECK(rel(digamma(r.w), r.psi) < 1e-12);
            CHECK(rel(trigamma(r.w), r.psi1) < 1e-12);
        }
        CHECK(std::fabs(digamma(1.4616321449683623)) < 1e-15);
        CHECK(rel(digamma(1), -kEulerGamma) < 1e-14);
        CHECK(rel(digamma(2), 1 - kEulerGamma) < 1e-14);
        CHECK(rel(digamma(0.5), -kEulerGamma - 2 * std::log(2.0)) < 1e-14);
        CHECK(rel(trigamma(1), kPi * kPi / 6) < 1e-14);
        CHECK(rel(trigamma(2), kPi * kPi / 6 - 1) < 1e-14);
        const double h = 1e-4;
        CHECK(rel((digamma(3 + h) - digamma(3 - h)) / (2 * h), trigamma(3)) < 1e-6);
        CHECK_THROWS_AS(digamma(0), DomainError);
        CHECK_THROWS_AS(trigamma(-0.5), DomainError);
    }

    TEST_CASE("gamma function") {
        CHECK(rel(gamma_fn(0.5), std::sqrt(kPi)) < 1e-14);
        CHECK(rel(gamma_fn(5), 24) < 1e-14);
        CHECK_THROWS_AS(gamma_fn(0), PoleError);
        CHECK_THROWS_AS(gamma_fn(-3), PoleError);
        for (int k = 2; k < 40; ++k)
            for (double v : {1.1, 2.5, 7.0}) {
                const double r = gamma_fn(k + v + 1) * gamma_fn(k + 0.5) / (gamma_fn(k + v + 1.5) * gamma_fn(k + 1));
                CHECK(r < 1);
            }
    }

    TEST_CASE("Lambert W examples and round trip") {
        CHECK(lambert_w0(0) == 0);
        CHECK(rel(lambert_w0(std::exp(1.0)), 1) < 1e-15);
        CHECK(lambert_w0(-std::exp(-1.0)) == doctest::Approx(-1).epsilon(1e-7));
        CHECK_THROWS_AS(lambert_w0(-0.5), DomainError);
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(-std::exp(-1.0), 10);
        for (int i = 0; i < 100; ++i) {
            const double x = u(rng);
            const double w = lambert_w0(x);
            CAPTURE(x);
            CHECK(std::fabs(w * std::exp(w) - x) <= 1e-13 * std::max(1.0, std::fabs(x)));
        }
        for (double x : {1e-300, 1e-20, 1e-5, 0.3, 2.9, 3.1, 999.0, 1e3, 1e5, 1e100, 1e300}) {
            const double w = lambert_w0(x);
            CAPTURE(x);
            CHECK(rel(w + std::log(w), std::log(x)) < 1e-14 * std::max(1.0, 1 / std::fabs(std::log(x))) + 1e-15);
        }
    }

    TEST_CASE("Legendre Q closed forms and frozen values") {
        const double a1 = 1.0;
        CHECK(rel(legendre_q(0, std::cosh(a1)), std::log(1 / std::tanh(0.5 * a1))) < 1e-10);
        const double a2 = 1.5, z = std::cosh(a2);
        const double q0 = 0.5 * std::log((z + 1) / (z - 1));
        CHECK(rel(legendre_q(1, z), z * q0 - 1) < 1e-10);
        // mpmath legenq type 3
        CHECK(rel(legendre_q_alpha(0.3, 1.3).value, 0.32400520020460788844) < 1e-13);
        CHECK(rel(legendre_q_alpha(2.5, 0.4).value, 0.31201531498129536423) < 1e-13);
        CHECK(rel(legendre_q_alpha(0, 2).value, 0.27234146891183155342) < 1e-13);
        CHECK(rel(legendre_q_alpha(7.25, 0.05).value, 1.141512251502988674) < 1e-11);
        CHECK(rel(legendre_q_alpha(0.618, 6).value, 9.1416096546079446127e-5) < 1e-13);
        CHECK_THROWS_AS(legendre_q(0.5, 1.0), DomainError);
        CHECK_THROWS_AS(legendre_q(0.5, 0.7), DomainError);
    }

    TEST_CASE("Legendre Q tail bound and dv") {
        const LegendreQResult r = legendre_q_alpha(1.7, 0.8, Accuracy{}, 10000, true);
        CHECK(r.terms > 1);
        CHECK(r.tail_bound <= 1e-15 * r.value);
        const double h = 1e-5;
        const double fd = (legendre_q_alpha(1.7 + h, 0.8).value - legendre_q_alpha(1.7 - h, 0.8).value) / (2 * h);
        CHECK(rel(r.dv, fd) < 1e-7);
        Accuracy bad;
        bad.rel_tol = -1;
        CHECK_THROWS(bad.validate());
    }

#ifdef KREIN_HAVE_BOOST
    TEST_CASE("independent oracles: Boost special functions") {
        for (double w = 0.01; w < 500; w *= 1.3) {
            CAPTURE(w);
            CHECK(rel(digamma(w), boost::math::digamma(w)) < 1e-12 + 1e-15 / std::fabs(boost::math::digamma(w)));
            CHECK(rel(trigamma(w), boost::math::trigamma(w)) < 1e-12);
        }
        for (double x = -0.36; x < 50; x += 0.173) {
            CAPTURE(x);
            CHECK(std::fabs(lambert_w0(x) - boost::math::lambert_w0(x)) < 1e-13 * std::max(1.0, std::fabs(x)));
        }
    }

    TEST_CASE("digamma integral representation") {
        boost::math::quadrature::exp_sinh<double> q;
        for (double w : {0.3, 1.7, 4.2}) {
            auto f = [w](double t) {
                if (t < 1e-5) return w - 1.5;
                return std::exp(-t) / t - std::exp(-w * t) / (-std::expm1(-t));
            };
            const double v = q.integrate(f);
            CAPTURE(w);
            CHECK(std::fabs(v - digamma(w)) < 1e-9);
        }
    }

    TEST_CASE("Legendre Q series vs integral representation") {
        // Q_v(cosh a) = (1/sqrt 2) int_a^inf e^{-(v+1/2)t} / sqrt(cosh t - cosh a) dt, t = a + u^2
        boost::math::quadrature::exp_sinh<double> q;
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> uv(0.0, 3.0), ua(0.5, 5.0);
        std::vector<std::pair<double, double>> cases{{1.3, 3.0}};
        for (int i = 0; i < 10; ++i) cases.push_back({uv(rng), ua(rng)});
        for (auto [v, a] : cases) {
            auto f = [v, a](double u) {
                if (u < 1e-100) return 2 * std::exp(-(v + 0.5) * a) / std::sqrt(std::sinh(a));
                const double t = a + u * u;
                const double den = std::sqrt(2 * std::sinh(0.5 * (t + a)) * std::sinh(0.5 * u * u));
                return 2 * u * std::exp(-(v + 0.5) * t) / den;
            };
            const double ref = q.integrate(f) / std::sqrt(2.0);
            CAPTURE(v);
            CAPTURE(a);
            CHECK(rel(legendre_q(v, std::cosh(a)), ref) < 1e-8);
        }
    }

    TEST_CASE("moments of K0") {
        boost::math::quadrature::exp_sinh<double> q;
        for (double a : {1.0, 2.0})
            for (int n : {0, 1}) {
                auto f = [a, n](double x) { return x == 0 ? (n == 0 ? 1e300 : 0.0) : std::pow(x, n) * bessel_k0(a * x); };
                boost::math::quadrature::tanh_sinh<double> ts;
                const double v = ts.integrate(f, 0.0, 1.0) + q.integrate(f, 1.0, std::numeric_limits<double>::infinity());
                const double g = std::tgamma(0.5 * (1 + n));
                CHECK(rel(v, std::pow(2.0, n - 1) * std::pow(a, -n - 1) * g * g) < 1e-8);
            }
    }
#endif
}
