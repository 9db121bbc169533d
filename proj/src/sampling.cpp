#include "wtm/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "wtm/error.hpp"

namespace wtm {

RadialProfile random_profile(std::mt19937_64& rng, const SampleOptions& opt) {
    if (opt.nodes < 2) throw ValidationError("random profile needs at least 2 nodes");
    if (!(opt.r_min > 0.0) || !(opt.r_max > opt.r_min)) throw ValidationError("random profile needs 0 < r_min < r_max");
    std::uniform_real_distribution<double> log_r(std::log(opt.r_min), std::log(opt.r_max));
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<double> radii;
    while (radii.size() < opt.nodes) {
        radii.clear();
        for (std::size_t i = 0; i < opt.nodes; ++i) radii.push_back(std::exp(log_r(rng)));
        std::sort(radii.begin(), radii.end());
        radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
    }
    std::vector<double> values(opt.nodes);
    for (auto& v : values) v = 0.05 + 0.95 * unit(rng);
    if (opt.monotone) std::sort(values.begin(), values.end(), std::greater<>());
    values.back() = 0.0;
    return RadialProfile(std::move(radii), std::move(values));
}

}  // namespace wtm
