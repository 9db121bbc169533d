#pragma once

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "wtm/core.hpp"
#include "wtm/profile.hpp"
#include "wtm/sampling.hpp"

namespace testing {

/// The (N, beta, gamma) cells every identity is checked on.
inline std::vector<wtm::ProblemParams> parameter_matrix() {
    const std::array<std::array<double, 3>, 6> cells{{{2, 0, 0}, {2, 1, 0.5}, {2, 1, 1}, {3, 1, 0.5}, {3, 0, -1}, {4, 2, 1}}};
    std::vector<wtm::ProblemParams> out;
    for (const auto& c : cells) out.push_back(wtm::ProblemParams::critical(static_cast<int>(c[0]), c[1], c[2]));
    return out;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

/// Random profile with ||grad u||_N^N = g in [0.5, 1] and ||u||_{N,gamma} = 1.
inline wtm::RadialProfile random_at_feasible(std::mt19937_64& rng, const wtm::ProblemParams& p) {
    std::uniform_real_distribution<double> level(0.5, 1.0);
    const wtm::RadialProfile u = wtm::random_profile(rng);
    const double g = level(rng);
    const wtm::RadialProfile s = u.scaled(std::pow(g / wtm::grad_norm_pow(u, p), 1.0 / p.n()));
    return wtm::at_normalize(s, p);
}

/// Random profile on the unit sphere of the full X^{1,N}_gamma norm.
inline wtm::RadialProfile random_unit_sphere(std::mt19937_64& rng, const wtm::ProblemParams& p) {
    const wtm::RadialProfile u = wtm::random_profile(rng);
    return u.scaled(std::pow(wtm::norms(u, p).full_pow, -1.0 / p.n()));
}

}  // namespace testing
