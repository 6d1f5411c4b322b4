#include <cmath>
#include <random>

#include "doctest.h"
#include "krein/errors.hpp"
#include "krein/exact.hpp"
#include "krein/numerics.hpp"
#include "krein/specfun.hpp"
#include "krein/spectra.hpp"
#include "random_models.hpp"
#include "test_util.hpp"

using namespace krein;
using testutil::rel;

namespace {

double norm2(const BoundState& s, const PrincipalMatrix& pm, int dim) {
    auto radial = [&](double r) {
        if (r == 0) return 0.0;
        std::vector<double> x(dim, 0.0);
        x[0] = r;
        const double p = wavefunction(s, pm, x);
        if (dim == 1) return 2 * p * p;
        if (dim == 2) return 2 * kPi * r * p * p;
        return 4 * kPi * r * r * p * p;
    };
    return integrate_adaptive(radial, 0, 1, 1e-300, 1e-12).value +
           integrate_to_infinity(radial, 1, 1e-300, 1e-12).value;
}

}  // namespace

TEST_SUITE("spectra") {
    TEST_CASE("single 1D delta: E = -lambda^2/4") {
        const PrincipalMatrix pm(testutil::flat(Family::Point1D, {{0}}, {2.0}));
        const auto r = find_bound_states(pm);
        REQUIRE(r.states.size() == 1);
        CHECK(rel(r.states[0].energy, -1.0) < 1e-14);
    }

    TEST_CASE("two 1D deltas match the Lambert-W energies") {
        const PrincipalMatrix pm(testutil::flat(Family::Point1D, {{-5}, {5}}, {1, 1}, true));
        const auto r = find_bound_states(pm);
        REQUIRE(r.states.size() == 2);
        const TwoCenterExact ex = exact_two_center_1d(1, 5);
        CHECK(std::fabs(r.states[0].energy - ex.e_minus) < 1e-10);
        CHECK(std::fabs(r.states[1].energy - ex.e_plus) < 1e-10);
        // ground state symmetric, excited antisymmetric
        CHECK(r.states[0].eigenvector[0] * r.states[0].eigenvector[1] > 0);
        CHECK(r.states[1].eigenvector[0] * r.states[1].eigenvector[1] < 0);
    }

    TEST_CASE("window too small is reported") {
        const PrincipalMatrix pm(testutil::flat(Family::Point3D, {{0, 0, 0}}, {-1}));
        const auto r = find_bound_states(pm, -0.5, -0.1);
        CHECK(r.states.empty());
        REQUIRE(r.warnings.size() == 1);
        CHECK(r.warnings[0].find("root below window") != std::string::npos);
        CHECK(find_bound_states(pm, -0.9, -0.1).states.empty());
        CHECK(find_bound_states(pm, -0.9, -0.1).warnings.size() == 1);
        CHECK(find_bound_states(pm, -2, -0.1).states.size() == 1);
    }

    TEST_CASE("eigenvalue flows decrease") {
        std::mt19937_64 rng(5);
        for (Family f : {Family::Point1D, Family::Point2D, Family::PointH3, Family::Salpeter1D}) {
            const PrincipalMatrix pm(testutil::random_model(f, rng));
            std::vector<double> grid;
            const double lo = std::isfinite(pm.lower_limit()) ? pm.lower_limit() + 0.05 : -3.0;
            for (int i = 0; i < 30; ++i) grid.push_back(lo + (pm.threshold() - 0.01 - lo) * i / 29.0);
            const FlowResult fr = branch_flow(pm, grid);
            CAPTURE(family_name(f));
            CHECK(fr.monotonicity_violations == 0);
        }
    }

    TEST_CASE("wavefunction normalization for single centers") {
        const PrincipalMatrix p1(testutil::flat(Family::Point1D, {{0}}, {1.3}));
        const PrincipalMatrix p2(testutil::flat(Family::Point2D, {{0, 0}}, {-0.7}));
        const PrincipalMatrix p3(testutil::flat(Family::Point3D, {{0, 0, 0}}, {-1.2}));
        CHECK(std::fabs(norm2(find_bound_states(p1).states.at(0), p1, 1) - 1) < 1e-3);
        CHECK(std::fabs(norm2(find_bound_states(p2).states.at(0), p2, 2) - 1) < 1e-3);
        CHECK(std::fabs(norm2(find_bound_states(p3).states.at(0), p3, 3) - 1) < 1e-3);
        const auto s = find_bound_states(p1).states.at(0);
        const double nu = std::sqrt(-s.energy);
        CHECK(rel(wavefunction(s, p1, {0.0}) / wavefunction(s, p1, {1.0}), std::exp(nu)) < 1e-10);
        CHECK_THROWS_AS(wavefunction(find_bound_states(p2).states.at(0), p2, {0.0, 0.0}), SingularityError);
    }

    TEST_CASE("wavefunction parity for a symmetric pair") {
        const PrincipalMatrix pm(testutil::flat(Family::Point2D, {{-3, 0}, {3, 0}}, {-1, -1}, true));
        const auto r = find_bound_states(pm);
        REQUIRE(r.states.size() == 2);
        for (double x : {0.3, 1.7, 4.1}) {
            const std::vector<double> p{x, 0.4}, q{-x, 0.4};
            CHECK(std::fabs(wavefunction(r.states[0], pm, p) - wavefunction(r.states[0], pm, q)) <
                  1e-12 * std::fabs(wavefunction(r.states[0], pm, p)));
            CHECK(std::fabs(wavefunction(r.states[1], pm, p) + wavefunction(r.states[1], pm, q)) <
                  1e-12 * std::fabs(wavefunction(r.states[1], pm, p)));
        }
    }

    TEST_CASE("contour integral and Riesz residue") {
        const auto c = contour_inverse_integral([](std::complex<double> z) { return z - 0.3; }, 0.3, 0.1);
        CHECK(std::fabs(c.real() - 1) < 1e-14);
        CHECK(std::fabs(c.imag()) < 1e-14);
        const PrincipalMatrix pm(testutil::flat(Family::Point3D, {{0, 0, 0}, {0, 0, 4}}, {-1, -0.5}));
        const auto r = find_bound_states(pm);
        REQUIRE(r.states.size() == 2);
        for (const auto& s : r.states) {
            const RieszCheck rc = riesz_projection_check(pm, s, 0, {r.states[0].energy, r.states[1].energy});
            CHECK(rc.residual < 1e-8 * std::fabs(rc.residue));
        }
        CHECK_THROWS_AS(riesz_projection_check(pm, r.states[0], 0.6, {r.states[1].energy}), ContourError);
    }

    TEST_CASE("unsupported wavefunction families") {
        const PrincipalMatrix pm(testutil::hyper(Family::PointH3, {{0}}, {0.2}));
        const auto r = find_bound_states(pm);
        REQUIRE(r.states.size() == 1);
        CHECK_THROWS_AS(wavefunction(r.states[0], pm, {1, 0, 0}), UnsupportedError);
    }
}
