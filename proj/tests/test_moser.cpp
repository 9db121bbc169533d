#include <cmath>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"
#include "wtm/error.hpp"
#include "wtm/moser.hpp"

using namespace wtm;

TEST_SUITE("moser") {
    TEST_CASE("shape of u_n") {
        const ProblemParams p = ProblemParams::critical(3, 1.0, 0.5);
        const moser::MoserElement e = moser::build(6, p);
        CHECK(e.depth == doctest::Approx(3.0));
        REQUIRE(e.profile.size() == 2);
        CHECK(e.profile.radii()[0] == doctest::Approx(std::exp(-3.0)));
        CHECK(e.profile.radii()[1] == 1.0);
        // (A_n b_n)^{N/(N-1)} = n / alpha_{N,beta}.
        CHECK(std::pow(e.plateau_value(), 1.5) == doctest::Approx(6.0 / p.alpha).epsilon(1e-13));
        // log-affine between e^{-b} and 1: u(r) = A log(1/r).
        CHECK(e.profile(0.5) == doctest::Approx(e.amplitude * std::log(2.0)).epsilon(1e-13));
        CHECK_THROWS_AS(moser::build(0, p), DomainError);
        CHECK_THROWS_AS(moser::build(100000, p), DomainError);
    }

    TEST_CASE("unit gradient norm") {
        for (const auto& p : testing::parameter_matrix())
            for (int n : {1, 10, 100})
                CHECK(std::abs(grad_norm_pow(moser::build(n, p).profile, p) - 1.0) < 1e-12);
    }

    TEST_CASE("weight norm: closed form, quadrature and the Simpson oracle agree") {
        for (const auto& p : testing::parameter_matrix()) {
            for (int n : {1, 4, 30}) {
                const RadialProfile u = moser::build(n, p).profile;
                const double cf = moser::weight_norm_closed_form(n, p);
                CHECK(testing::rel_err(weighted_lp_pow(u, p.n(), p.gamma, p), cf) < 1e-10);
                const double ref = oracle::radial_integral(u, p.dim, p.gamma, [&](double x) { return std::pow(x, p.n()); }, 20000);
                CHECK(testing::rel_err(cf, ref) < 1e-9);
            }
        }
    }

    TEST_CASE("weight norm limit") {
        const ProblemParams p = ProblemParams::critical(2, 0.0, 0.0);
        // (N - beta) Gamma(N+1) / (N - gamma)^{N+1} = 2 * 2 / 8.
        CHECK(moser::weight_norm_limit(p) == doctest::Approx(0.5));
        for (const auto& c : testing::parameter_matrix())
            CHECK(testing::rel_err(2000 * moser::weight_norm_closed_form(2000, c), moser::weight_norm_limit(c)) < 1e-3);
    }

    TEST_CASE("normalized element sits on the unit sphere") {
        for (const auto& p : testing::parameter_matrix())
            for (int n : {1, 7, 50}) {
                const moser::MoserElement v = moser::normalized(n, p);
                CHECK(v.normalized);
                CHECK(norms(v.profile, p).full_pow == doctest::Approx(1.0).epsilon(1e-10));
            }
    }

    TEST_CASE("plateau integral against direct evaluation") {
        for (const auto& p : testing::parameter_matrix()) {
            for (int n : {2, 9}) {
                for (double c : {1.0, 0.8}) {
                    const moser::MoserElement e = moser::build(n, p);
                    const double r0 = e.profile.radii()[0];
                    const double u0 = c * e.plateau_value();
                    const double ref = oracle::sphere_area(p.dim) * std::pow(r0, p.n() - p.beta) / (p.n() - p.beta) *
                                       oracle::phi(p.dim, p.alpha * std::pow(u0, p.conjugate_exponent()));
                    CHECK(testing::rel_err(moser::plateau_integral(n, p, c).value(), ref) < 1e-12);
                }
            }
        }
    }

    TEST_CASE("plateau bound is below the full functional") {
        for (const auto& p : testing::parameter_matrix())
            for (int n : {1, 5, 40}) {
                const double lb = moser::plateau_lower_bound(n, p).value();
                CHECK(lb <= functional(moser::normalized(n, p).profile, p).linear() * (1.0 + 1e-12));
            }
    }

    TEST_CASE("threshold indices against brute force") {
        for (const auto& p : testing::parameter_matrix()) {
            const int n1 = moser::threshold_weight(p, 300);
            const double bound = 2.0 * moser::weight_norm_limit(p);
            for (int n = n1; n <= 300; ++n) CHECK(n * moser::weight_norm_closed_form(n, p) <= bound);
            if (n1 > 1) CHECK((n1 - 1) * moser::weight_norm_closed_form(n1 - 1, p) > bound);
        }
        for (int dim : {2, 3, 4}) {
            const double a = 0.9;
            const int n2 = moser::threshold_phi(dim, a, 300);
            for (int n = n2; n <= 300; ++n) CHECK(oracle::phi(dim, a * n) >= 0.5 * std::exp(a * n));
            if (n2 > 1) CHECK(oracle::phi(dim, a * (n2 - 1)) < 0.5 * std::exp(a * (n2 - 1)));
        }
    }

    TEST_CASE("asymptotic scan rows") {
        const ProblemParams base = ProblemParams::critical(2, 0.0, 0.0);
        const double crit = base.alpha;
        const moser::ScanTable rows = moser::asymptotic_lower_scan(base, {0.99 * crit, 0.9 * crit});
        REQUIRE(rows.size() == 2);
        CHECK(rows[0].alpha < rows[1].alpha);  // sorted
        CHECK(rows[0].n == 10);
        CHECK(rows[1].n == 100);
        for (const auto& r : rows) {
            CHECK(r.product > 0.0);
            // product = ratio * (1 - a)^{1} for N = 2, beta = gamma.
            CHECK(r.product == doctest::Approx(r.ratio() * (1.0 - r.ratio_to_critical)).epsilon(1e-12));
        }
        CHECK_THROWS_AS(moser::asymptotic_lower_scan(base, {crit}), DomainError);
        CHECK_THROWS_AS(moser::asymptotic_lower_scan(base, {-1.0}), DomainError);

        const io::Table t = moser::to_table(rows, base);
        CHECK(t.columns == std::vector<std::string>{"alpha", "n", "ratio", "product", "flags"});
        CHECK(t.rows.size() == 2);
        CHECK_FALSE(t.comments.empty());
    }
}
