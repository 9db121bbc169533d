#pragma once

#include <random>

#include "wtm/profile.hpp"

namespace wtm {

struct SampleOptions {
    std::size_t nodes = 24;
    double r_min = 1e-3;
    double r_max = 1e2;
    bool monotone = false;  // nonincreasing values when true
};

/// Random profile: sorted log-uniform radii in [r_min, r_max], values in (0, 1], last value 0.
RadialProfile random_profile(std::mt19937_64& rng, const SampleOptions& opt = {});

}  // namespace wtm
