#include <cmath>
#include <random>

#include "doctest.h"
#include "krein/errors.hpp"
#include "krein/linalg.hpp"

using namespace krein;

TEST_SUITE("linalg") {
    TEST_CASE("Jacobi on random symmetric matrices") {
        std::mt19937_64 rng(3);
        std::normal_distribution<double> g;
        for (int n : {1, 2, 3, 7, 20}) {
            Matrix a(n);
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) a(i, j) = a(j, i) = g(rng);
            const EigenSystem es = eig_sym(a);
            for (int k = 0; k < n; ++k) {
                const auto v = es.vector(k);
                const auto av = a * v;
                for (int i = 0; i < n; ++i) CHECK(std::fabs(av[i] - es.values[k] * v[i]) < 1e-12);
                CHECK(std::fabs(dot(v, v) - 1) < 1e-13);
                if (k) CHECK(es.values[k - 1] <= es.values[k]);
            }
        }
    }

    TEST_CASE("2x2 closed form and sign convention") {
        Matrix a(2);
        a(0, 0) = 1;
        a(1, 1) = 1;
        a(0, 1) = a(1, 0) = -0.25;
        const EigenSystem es = eig_sym(a);
        CHECK(es.values[0] == doctest::Approx(0.75));
        CHECK(es.values[1] == doctest::Approx(1.25));
        const auto v0 = es.vector(0);
        CHECK(v0[0] > 0);
        CHECK(v0[1] > 0);
    }

    TEST_CASE("asymmetric input rejected") {
        Matrix a(2);
        a(0, 1) = 1;
        CHECK_THROWS_AS(eig_sym(a), SymmetryError);
    }
}
