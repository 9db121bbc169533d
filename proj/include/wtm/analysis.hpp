#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "wtm/core.hpp"
#include "wtm/log_real.hpp"
#include "wtm/optimizer.hpp"
#include "wtm/profile.hpp"
#include "wtm/table.hpp"

namespace wtm::analysis {

/// g(alpha) = ((1 - a^{N-1}) / a^{N-1})^{(N-beta)/(N-gamma)}, a = alpha/alpha_{N,beta}.
/// Throws DomainError unless 0 < alpha < alpha_{N,beta}.
double g_factor(double alpha, const ProblemParams& params);

/// v = C u(lambda x) with C = a^{(N-1)/N}, lambda = (C^N/(1-C^N))^{1/(N-gamma)}:
/// maps the Adachi-Tanaka slice at alpha into the full-norm ball at alpha_{N,beta}.
struct ScalingTransport {
    RadialProfile transported = RadialProfile::zero();
    double c = 0.0;
    double lambda = 0.0;
    FunctionalValue source_value;  // J_alpha(u)
    FunctionalValue target_value;  // J_{alpha_{N,beta}}(v)
    double predicted_log = 0.0;    // log J_alpha(u) - (N-beta) log lambda
    double residual = 0.0;         // |target / predicted - 1|
    double full_norm_pow = 0.0;    // ||v||_X^N, at most 1
};

/// params.alpha is the source exponent. Throws PreconditionError unless ||grad u||_N^N <= 1 + 1e-8 and
/// | ||u||_{N,gamma}^N - 1 | <= 1e-8; DomainError unless 0 < alpha < alpha_{N,beta}.
ScalingTransport scaling_transport(const RadialProfile& u, const ProblemParams& params, const quad::Options& opt = {});

/// For ||u||_X <= 1 with G = ||grad u||_N^N in (0, 1):
///   lambda = ((1 - G)/G)^{1/(N-gamma)},  v = u(lambda x) / G^{1/N},  alpha' = alpha_{N,beta} G^{1/(N-1)},
///   J_{alpha_{N,beta}}(u) = lambda^{N-beta} J_{alpha'}(v) <= g(alpha') * (Adachi-Tanaka ratio of v at alpha').
struct BallTransport {
    RadialProfile transported = RadialProfile::zero();
    double grad_pow = 0.0;          // G
    double lambda = 0.0;
    double alpha_prime = 0.0;
    FunctionalValue source_value;   // J_{alpha_{N,beta}}(u)
    FunctionalValue target_value;   // J_{alpha'}(v)
    double identity_residual = 0.0; // |lambda^{N-beta} J_{alpha'}(v) / J_{alpha_{N,beta}}(u) - 1|
    double v_grad_pow = 0.0;        // 1 up to rounding
    double v_weight_factor = 0.0;   // ||v||_{N,gamma}^{N(N-beta)/(N-gamma)} <= 1
    double g_alpha_prime = 0.0;     // g(alpha') = lambda^{N-beta}
    double at_ratio = 0.0;          // ratio of v at alpha'
    double bound = 0.0;             // g(alpha') * at_ratio
    double slack = 0.0;             // bound / J_{alpha_{N,beta}}(u) - 1, nonnegative up to quadrature
};

/// params.alpha is ignored (the source exponent is alpha_{N,beta}).
/// Throws PreconditionError if ||u||_X^N > 1 + 1e-8, DegenerateInputError if G is 0 or >= 1.
BallTransport ball_transport(const RadialProfile& u, const ProblemParams& params,
                                    const quad::Options& opt = {});

struct RelationRow {
    double alpha = 0.0;
    double ratio_to_critical = 0.0;
    double g_factor = 0.0;
    double a_estimate = 0.0;
    double product = 0.0;  // g_factor * a_estimate
    bool a_converged = false;
};

struct RelationScan {
    std::vector<RelationRow> rows;   // sorted by alpha
    double b_estimate = 0.0;         // maximize_B at alpha_{N,beta}
    bool b_converged = false;
    std::string b_start_id;
    double sup_product = 0.0;        // max over rows of g * A
    double sup_alpha = 0.0;
    double min_margin = 0.0;         // min over rows of B - g * A; >= -1e-6 is the one-sided check
    double gap = 0.0;                // |sup_product - B| / B, an optimizer-quality diagnostic
};

/// k/(count+1) * alpha_{N,beta} for k = 1..count.
std::vector<double> default_relation_grid(const ProblemParams& base, int count = 16);

/// A estimates on alpha_grid and one B estimate at alpha_{N,beta}. The B multistart also
/// starts from the scaling_transport image of every A maximizer, so B >= g * A by construction
/// of the ascent. base.alpha is ignored; config.jobs workers share the grid points.
RelationScan relation_scan(const ProblemParams& base, const std::vector<double>& alpha_grid,
                           const opt::OptimizerConfig& config);

io::Table to_table(const RelationScan& scan, const ProblemParams& base);
nlohmann::json summary_json(const RelationScan& scan);

/// d/dtau at tau = 1 of J_alpha(w_tau), w_tau = v_tau / ||v_tau||_X, v_tau(x) = sqrt(tau) v(sqrt(tau) x),
/// for N = 2 and gamma = beta.
struct OrbitReport {
    double alpha = 0.0;
    double series = 0.0;
    double fd = 0.0;
    double relative_error = 0.0;          // |series - fd| / max(1, |fd|)
    int j_max = 200;
    int terms = 0;
    std::vector<double> contributions;    // term j at index j - 1
    double bounded_variant = 0.0;         // series with -a + (j-1) b replaced by its bound j
    int sign = 0;
    bool saturated = false;
};

/// Throws PreconditionError unless N = 2, gamma = beta >= 0 and | ||v||_X^2 - 1 | <= 1e-8.
OrbitReport orbit_derivative(const RadialProfile& v, const ProblemParams& params, const quad::Options& opt = {});

nlohmann::json to_json(const OrbitReport& r);

struct MomentRow {
    int j = 0;
    double ratio = 0.0;        // ||v||_{2j,beta}^{2j} at^j / (j! ||grad v||_2^{2j-2} ||v||_{2,beta}^2)
    double log_ratio = 0.0;
    double running_max = 0.0;
};

/// Rows j = 2..j_max. Throws PreconditionError unless N = 2, gamma = beta, j_max >= 2, alpha_tilde > 0;
/// DegenerateInputError for the zero profile.
std::vector<MomentRow> moment_ratio_table(const RadialProfile& v, double alpha_tilde, const ProblemParams& params,
                                          int j_max, const quad::Options& opt = {});

io::Table to_table(const std::vector<MomentRow>& rows, double alpha_tilde, const ProblemParams& params);

}  // namespace wtm::analysis
