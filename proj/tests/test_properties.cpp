// Randomized invariants. Each case draws its inputs from a fixed seed so failures reproduce.

#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "wtm/analysis.hpp"
#include "wtm/optimizer.hpp"
#include "wtm/quadrature.hpp"
#include "wtm/transform.hpp"

using namespace wtm;

namespace {

constexpr int kTrials = 20;

const ProblemParams& pick(std::mt19937_64& rng) {
    static const auto cells = testing::parameter_matrix();
    return cells[std::uniform_int_distribution<std::size_t>(0, cells.size() - 1)(rng)];
}

double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

}  // namespace

TEST_SUITE("properties") {
    TEST_CASE("norms are N-homogeneous in amplitude") {
        std::mt19937_64 rng(101);
        for (int t = 0; t < kTrials; ++t) {
            const ProblemParams& p = pick(rng);
            const RadialProfile u = random_profile(rng);
            const double c = uniform(rng, 0.1, 4.0);
            const NormReport a = norms(u, p), b = norms(u.scaled(c), p);
            CHECK(testing::rel_err(b.grad_pow, std::pow(c, p.n()) * a.grad_pow) < 1e-12);
            CHECK(testing::rel_err(b.weight_pow, std::pow(c, p.n()) * a.weight_pow) < 1e-9);
        }
    }

    TEST_CASE("functional is strictly increasing in amplitude") {
        std::mt19937_64 rng(102);
        for (int t = 0; t < kTrials; ++t) {
            const ProblemParams& p = pick(rng);
            const RadialProfile u = random_profile(rng);
            const double c = uniform(rng, 0.2, 1.5);
            CHECK(functional(u.scaled(c * 1.01), p).linear() > functional(u.scaled(c), p).linear());
        }
    }

    TEST_CASE("functional dominates its first Taylor term") {
        // Phi_N(t) >= t^{N-1}/(N-1)!, so J_alpha(u) >= alpha^{N-1}/(N-1)! ||u||_{N,beta}^N.
        std::mt19937_64 rng(103);
        for (int t = 0; t < kTrials; ++t) {
            const ProblemParams& p = pick(rng);
            const RadialProfile u = random_profile(rng);
            const double first = std::pow(p.alpha, p.n() - 1.0) / std::tgamma(p.n()) * weighted_lp_pow(u, p.n(), p.beta, p);
            CHECK(functional(u, p).linear() >= first * (1.0 - 1e-10));
        }
    }

    TEST_CASE("dilation composes and at_normalize is idempotent") {
        std::mt19937_64 rng(104);
        for (int t = 0; t < kTrials; ++t) {
            const ProblemParams& p = pick(rng);
            const RadialProfile u = random_profile(rng);
            const double a = uniform(rng, 0.1, 10.0), b = uniform(rng, 0.1, 10.0);
            const RadialProfile ab = dilate(dilate(u, a), b), direct = dilate(u, a * b);
            for (std::size_t i = 0; i < u.size(); ++i) CHECK(testing::rel_err(ab.radii()[i], direct.radii()[i]) < 1e-14);
            const RadialProfile n1 = at_normalize(u, p);
            const RadialProfile n2 = at_normalize(n1, p);
            for (std::size_t i = 0; i < u.size(); ++i) CHECK(testing::rel_err(n2.radii()[i], n1.radii()[i]) < 1e-9);
        }
    }

    TEST_CASE("push and pull are mutually inverse") {
        std::mt19937_64 rng(105);
        for (int t = 0; t < kTrials; ++t) {
            const ProblemParams& p = pick(rng);
            const transform::TransformSpec s(p);
            const RadialProfile u = random_profile(rng);
            const RadialProfile v = transform::pull_profile(transform::push_profile(u, s), s);
            const RadialProfile w = transform::push_profile(transform::pull_profile(u, s), s);
            for (std::size_t i = 0; i < u.size(); ++i) {
                CHECK(testing::rel_err(v.radii()[i], u.radii()[i]) < 1e-14);
                CHECK(testing::rel_err(w.radii()[i], u.radii()[i]) < 1e-14);
                CHECK(std::abs(v.values()[i] - u.values()[i]) < 1e-14);
            }
        }
    }

    TEST_CASE("quadrature is additive over a split interval") {
        std::mt19937_64 rng(106);
        for (int t = 0; t < kTrials; ++t) {
            const double k = uniform(rng, -3.0, 3.0), w = uniform(rng, 0.5, 8.0);
            const double a = uniform(rng, -2.0, 0.0), b = uniform(rng, 0.5, 3.0), m = uniform(rng, a, b);
            auto f = [&](double x) { return std::exp(k * x) * (2.0 + std::sin(w * x)); };
            const double whole = quad::integrate_scalar(f, a, b).value[0];
            const double parts = quad::integrate_scalar(f, a, m).value[0] + quad::integrate_scalar(f, m, b).value[0];
            CHECK(testing::rel_err(parts, whole) < 1e-10);
        }
    }

    TEST_CASE("log-scale sums agree with doubles") {
        std::mt19937_64 rng(107);
        for (int t = 0; t < kTrials; ++t) {
            const double x = uniform(rng, 1e-3, 1e3), y = uniform(rng, 1e-3, 1e3);
            CHECK(testing::rel_err((LogReal(x) + LogReal(y)).value(), x + y) < 1e-14);
            CHECK(testing::rel_err((LogReal(x) * LogReal(y)).value(), x * y) < 1e-14);
        }
    }

    TEST_CASE("scaling transport image is always in the full-norm ball") {
        std::mt19937_64 rng(108);
        for (int t = 0; t < kTrials; ++t) {
            const ProblemParams& cell = pick(rng);
            const ProblemParams p = cell.with_alpha(uniform(rng, 0.05, 0.95) * cell.alpha);
            const analysis::ScalingTransport r = analysis::scaling_transport(testing::random_at_feasible(rng, p), p);
            CHECK(r.full_norm_pow <= 1.0 + 1e-10);
            CHECK(r.residual < 1e-7);
        }
    }

    TEST_CASE("gradient check stays below 1e-5 on random monotone profiles") {
        std::mt19937_64 rng(109);
        SampleOptions so;
        so.monotone = true;
        so.nodes = 12;
        for (int t = 0; t < 6; ++t) {
            const ProblemParams& cell = pick(rng);
            const ProblemParams p = cell.with_alpha(uniform(rng, 0.1, 1.0) * cell.alpha);
            CHECK(opt::gradient_check(p, random_profile(rng, so)) < 1e-5);
        }
    }
}
