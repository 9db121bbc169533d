#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "wtm/core.hpp"
#include "wtm/profile.hpp"

namespace wtm::opt {

struct GridSpec {
    std::size_t nodes = 129;
    double r_min = 1e-8;  // plateau node
    double r_max = 1e3;   // tail truncation: u = 0 from here on
};

struct StepRule {
    double initial_step = 1.0;
    double backtrack = 0.5;
    double armijo = 1e-4;
    double growth = 2.0;       // step multiplier after an accepted iteration
    double step_floor = 1e-16; // backtracking below this ends the start unconverged
};

struct OptimizerConfig {
    GridSpec grid;
    int max_iterations = 400;
    StepRule step;
    /// Stop when the preconditioned tangent-gradient norm falls below tolerance * |objective|.
    double tolerance = 1e-7;
    std::vector<int> moser_starts{1, 5, 20};
    bool broad_bump = true;
    int random_starts = 2;
    std::uint64_t seed = 20240607;
    int jobs = 1;
    quad::Options quad;

    /// Throws ValidationError when a field is out of range.
    void validate() const;
};

struct StartSummary {
    std::string id;
    double initial_value = 0.0;
    double final_value = 0.0;
    int iterations = 0;
    bool converged = false;
    std::string stop_reason;
};

struct MaximizationResult {
    RadialProfile best = RadialProfile::zero();
    FunctionalValue value;                   // objective at best (J for B, J at the normalized slice for A)
    std::vector<std::pair<std::string, double>> residuals;  // constraint name -> |violation|
    std::vector<double> trace;               // objective after each accepted step of the winning start
    std::string start_id;
    bool converged = false;
    int iterations = 0;
    double half_mass_radius = 0.0;           // spreading diagnostic
    double tail_sensitivity = 0.0;           // relative objective change when r_M is doubled
    std::vector<StartSummary> starts;

    double max_residual() const;
};

/// How maximize_A handles the weight-norm constraint.
enum class AFormulation {
    Slice,  // ||grad u||_N = 1 and ||u||_{N,gamma} = 1, the second by dilation after each step
    Ratio,  // ||grad u||_N = 1 only, objective J / ||u||_{N,gamma}^{N(N-beta)/(N-gamma)}
};

/// Projected gradient ascent of J_alpha on the unit sphere of the full X^{1,N}_gamma norm.
/// Throws PreconditionError for alpha > alpha_{N,beta}, where the supremum is infinite.
MaximizationResult maximize_B(const ProblemParams& params, const OptimizerConfig& config,
                              const std::vector<RadialProfile>& extra_starts = {});

/// Ascent of J_alpha over ||grad u||_N = 1, ||u||_{N,gamma} = 1 (equivalently of the scale-invariant
/// Adachi-Tanaka ratio). Throws PreconditionError for alpha >= alpha_{N,beta}.
MaximizationResult maximize_A(const ProblemParams& params, const OptimizerConfig& config,
                              AFormulation formulation = AFormulation::Slice,
                              const std::vector<RadialProfile>& extra_starts = {});

/// J_alpha(u) / ||u||_{N,gamma}^{N(N-beta)/(N-gamma)}, invariant under dilation.
double at_ratio(const RadialProfile& u, const ProblemParams& params, const quad::Options& opt = {});

/// Worst relative error ||analytic - fd||_inf / ||fd||_inf over the gradients of J, grad_pow and
/// weight_pow, using central differences with relative step 1e-6 at the free nodes.
double gradient_check(const ProblemParams& params, const RadialProfile& u);

/// Default multistart profiles on the configured grid (before projection).
std::vector<std::pair<std::string, RadialProfile>> default_starts(const ProblemParams& params,
                                                                   const OptimizerConfig& config);

nlohmann::json to_json(const MaximizationResult& r);
nlohmann::json to_json(const OptimizerConfig& c);

}  // namespace wtm::opt
