#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"
#include "wtm/quadrature.hpp"
#include "wtm/special.hpp"

using namespace wtm;

TEST_SUITE("quadrature") {
    TEST_CASE("Gauss-Legendre rules are exact to degree 2n-1") {
        for (int n : {1, 2, 5, 10, 20}) {
            const quad::GaussRule& rule = quad::gauss_legendre(n);
            REQUIRE(rule.nodes.size() == static_cast<std::size_t>(n));
            double wsum = 0.0;
            for (double w : rule.weights) wsum += w;
            CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
            for (int deg = 0; deg <= 2 * n - 1; ++deg) {
                double s = 0.0;
                for (int i = 0; i < n; ++i) s += rule.weights[i] * std::pow(rule.nodes[i], deg);
                const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
                CHECK(std::abs(s - exact) < 1e-13);
            }
        }
        CHECK(&quad::gauss_legendre(7) == &quad::gauss_legendre(7));
    }

    TEST_CASE("adaptive integration of smooth and peaked integrands") {
        const auto e = quad::integrate_scalar([](double x) { return std::exp(x); }, 0.0, 3.0);
        CHECK(testing::rel_err(e.value[0], std::expm1(3.0)) < 1e-13);
        CHECK_FALSE(e.capped);

        const auto a = quad::integrate_scalar([](double x) { return 1.0 / (1.0 + 1e4 * x * x); }, -1.0, 1.0);
        CHECK(testing::rel_err(a.value[0], 2.0 * std::atan(100.0) / 100.0) < 1e-10);

        // r^{-0.9} on (0, 1] in t = log r: integrand e^{0.1 t}.
        const auto s = quad::integrate_scalar([](double t) { return std::exp(0.1 * t); }, -400.0, 0.0);
        CHECK(testing::rel_err(s.value[0], (1.0 - std::exp(-40.0)) / 0.1) < 1e-10);
    }

    TEST_CASE("vector integrands share panels") {
        const auto r = quad::integrate<2>([](double x) { return std::array<double, 2>{x * x, std::sin(x)}; }, 0.0, 2.0);
        CHECK(testing::rel_err(r.value[0], 8.0 / 3.0) < 1e-13);
        CHECK(testing::rel_err(r.value[1], 1.0 - std::cos(2.0)) < 1e-13);
    }

    TEST_CASE("panel cap is reported") {
        quad::Options opt;
        opt.max_panels = 4;
        opt.rel_tol = 1e-14;
        const auto r = quad::integrate_scalar([](double x) { return std::sin(200.0 * x); }, 0.0, 10.0, opt);
        CHECK(r.capped);
        CHECK(r.panels == 4);
    }

    TEST_CASE("empty interval") {
        const auto r = quad::integrate_scalar([](double) { return 1.0; }, 1.0, 1.0);
        CHECK(r.value[0] == 0.0);
    }
}

TEST_SUITE("special") {
    TEST_CASE("lower incomplete gamma at integer order against the finite sum") {
        for (int n : {0, 1, 2, 3, 4, 7}) {
            for (double x : {1e-3, 0.5, 2.0, 5.0, 12.0, 40.0, 300.0}) {
                const double ref = oracle::lower_gamma_int(n, x);
                CHECK(testing::rel_err(special::lower_incomplete_gamma(n + 1.0, x), ref) < 1e-12);
            }
        }
    }

    TEST_CASE("non-integer order against Simpson quadrature") {
        for (double a : {0.5, 1.5, 2.7, 4.2}) {
            for (double x : {0.3, 1.0, 4.0, 9.0}) {
                // s = v^2 removes the endpoint singularity: int_0^sqrt(x) 2 v^{2a-1} e^{-v^2} dv.
                const double ref = oracle::simpson(
                    [a](double v) { return 2.0 * std::pow(v, 2.0 * a - 1.0) * std::exp(-v * v); },
                    0.0, std::sqrt(x), 20000);
                CHECK(testing::rel_err(special::lower_incomplete_gamma(a, x), ref) < 1e-8);
            }
        }
        CHECK(special::gamma_p(3.0, 0.0) == 0.0);
        CHECK(special::gamma_p(3.0, 1e6) == doctest::Approx(1.0));
    }
}
