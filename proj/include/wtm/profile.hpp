#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wtm/core.hpp"
#include "wtm/log_real.hpp"
#include "wtm/quadrature.hpp"

namespace wtm {

/// Non-negative radial profile u(|x|) on R^N.
///
/// Nodes r_0 < r_1 < ... < r_M carry values u_0, ..., u_M with u_M = 0:
///   u = u_0              on [0, r_0]          (plateau)
///   u affine in log r    on [r_i, r_{i+1}]
///   u = 0                for r >= r_M
/// Moser functions live in this class exactly. Immutable once built.
class RadialProfile {
public:
    /// Validates and throws ValidationError on bad nodes.
    RadialProfile(std::vector<double> radii, std::vector<double> values);

    /// The zero function, a single node at r = 1.
    static RadialProfile zero();

    std::span<const double> radii() const { return radii_; }
    std::span<const double> values() const { return values_; }
    std::span<const double> log_radii() const { return log_radii_; }
    std::size_t size() const { return radii_.size(); }
    std::size_t segment_count() const { return radii_.size() - 1; }

    double operator()(double r) const;
    bool is_zero() const;

    /// Same radii, new values (validated).
    RadialProfile with_values(std::vector<double> values) const;
    /// c * u, c >= 0.
    RadialProfile scaled(double c) const;

    friend bool operator==(const RadialProfile&, const RadialProfile&) = default;

private:
    std::vector<double> radii_;
    std::vector<double> values_;
    std::vector<double> log_radii_;
};

/// ||grad u||_N^N, ||u||_{N,gamma}^N and their sum ||u||_{X^{1,N}_gamma}^N.
struct NormReport {
    double grad_pow = 0.0;
    double weight_pow = 0.0;
    double full_pow = 0.0;
    bool quadrature_capped = false;
};

/// J_alpha(u) on log scale with its numerical diagnostics.
struct FunctionalValue {
    LogReal value;
    bool quadrature_capped = false;

    double linear() const { return value.value(); }
    double log() const { return value.log(); }
    bool saturated() const { return value.saturated(); }
};

struct FunctionalGradient {
    FunctionalValue value;
    std::vector<double> grad;  // dJ/du_i, one entry per node
    bool saturated = false;    // an entry overflowed double
};

struct NormsGradient {
    std::vector<double> grad_pow;
    std::vector<double> weight_pow;
};

/// omega_{N-1} int_0^inf |u'(r)|^N r^{N-1} dr. Closed form on every log-affine segment.
double grad_norm_pow(const RadialProfile& u, const ProblemParams& params);

/// omega_{N-1} int_0^inf u^p r^{N-1-delta} dr for p >= 1, delta < N.
/// Plateau exact, segments by adaptive Gauss-Legendre in t = log r.
double weighted_lp_pow(const RadialProfile& u, double p, double delta, const ProblemParams& params,
                       const quad::Options& opt = {});

/// log of weighted_lp_pow; stays finite for large p where the linear value overflows.
double log_weighted_lp_pow(const RadialProfile& u, double p, double delta, const ProblemParams& params,
                           const quad::Options& opt = {});

NormReport norms(const RadialProfile& u, const ProblemParams& params, const quad::Options& opt = {});

/// omega_{N-1} int_0^inf Phi_N(alpha u^{N/(N-1)}) r^{N-1-beta} dr.
FunctionalValue functional(const RadialProfile& u, const ProblemParams& params, const quad::Options& opt = {});

/// Value and analytic dJ/du_i (chain rule through Phi_N' and the interpolation weights).
FunctionalGradient functional_gradient(const RadialProfile& u, const ProblemParams& params,
                                       const quad::Options& opt = {});

/// Analytic partials of grad_pow and weight_pow (delta = gamma) with respect to node values.
NormsGradient norms_gradient(const RadialProfile& u, const ProblemParams& params, const quad::Options& opt = {});

/// u_lambda(x) = u(lambda x): radii divided by lambda, values unchanged.
RadialProfile dilate(const RadialProfile& u, double lambda);

/// Dilation with lambda = ||u||_{N,gamma}^{N/(N-gamma)}, giving ||u||_{N,gamma} = 1.
RadialProfile at_normalize(const RadialProfile& u, const ProblemParams& params, const quad::Options& opt = {});

/// Radius enclosing half of ||u||_{N,gamma}^N; the spreading diagnostic for vanishing runs.
double half_mass_radius(const RadialProfile& u, const ProblemParams& params);

/// count radii log-uniform over [r_min, r_max].
std::vector<double> log_uniform_grid(std::size_t count, double r_min, double r_max);

}  // namespace wtm
