#include "wtm/transform.hpp"

#include <cmath>
#include <vector>

#include "wtm/error.hpp"

namespace wtm::transform {

TransformSpec::TransformSpec(int dim_, double gamma_) : dim(dim_), gamma(gamma_) {
    if (dim < 2) throw DomainError("dimension must be >= 2");
    if (!(gamma < dim)) throw DomainError("transform needs gamma < N");
}

double TransformSpec::radius_prefactor() const {
    return std::exp(radius_exponent() * std::log((n() - gamma) / n()));
}

double TransformSpec::amplitude_factor() const { return std::pow((n() - gamma) / n(), (n() - 1.0) / n()); }

namespace {

double log_radius_map(double log_r, const TransformSpec& spec) {
    const double p = spec.radius_exponent();
    return p * (std::log((spec.n() - spec.gamma) / spec.n()) + log_r);
}

double log_radius_preimage(double log_rho, const TransformSpec& spec) {
    return log_rho / spec.radius_exponent() - std::log((spec.n() - spec.gamma) / spec.n());
}

}  // namespace

double radius_map(double r, const TransformSpec& spec) {
    if (!(r > 0.0)) throw DomainError("radius_map needs r > 0");
    return std::exp(log_radius_map(std::log(r), spec));
}

double radius_preimage(double rho, const TransformSpec& spec) {
    if (!(rho > 0.0)) throw DomainError("radius_preimage needs rho > 0");
    return std::exp(log_radius_preimage(std::log(rho), spec));
}

double jacobian_det(double r, const TransformSpec& spec) {
    if (!(r > 0.0)) throw DomainError("jacobian_det needs r > 0");
    const double ratio = (spec.n() - spec.gamma) / spec.n();
    return std::exp((spec.n() - 1.0) * std::log(ratio) + spec.gamma * log_radius_map(std::log(r), spec));
}

RadialProfile push_profile(const RadialProfile& u, const TransformSpec& spec) {
    if (spec.gamma == 0.0) return u;
    const double amp = spec.amplitude_factor();
    std::vector<double> radii(u.size()), values(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        radii[i] = std::exp(log_radius_preimage(u.log_radii()[i], spec));
        values[i] = amp * u.values()[i];
    }
    return RadialProfile(std::move(radii), std::move(values));
}

RadialProfile pull_profile(const RadialProfile& v, const TransformSpec& spec) {
    if (spec.gamma == 0.0) return v;
    const double amp = spec.amplitude_factor();
    std::vector<double> radii(v.size()), values(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        radii[i] = std::exp(log_radius_map(v.log_radii()[i], spec));
        values[i] = v.values()[i] / amp;
    }
    return RadialProfile(std::move(radii), std::move(values));
}

ProblemParams transported_params(const ProblemParams& params) {
    const TransformSpec spec(params);
    const double a = params.n() * params.alpha / (params.n() - params.gamma);
    return ProblemParams(params.dim, a, spec.induced_beta(params.beta), 0.0);
}

double integral_identity_factor(const ProblemParams& params) {
    const double n = params.n(), g = params.gamma, b = params.beta;
    return std::pow((n - g) / n, n - 1.0 + n * (g - b) / (n - g));
}

IdentityCheck verify_integral_identity(const RadialProfile& u, const ProblemParams& params,
                                       const quad::Options& opt) {
    const TransformSpec spec(params);
    const RadialProfile v = push_profile(u, spec);
    const FunctionalValue lhs = functional(u, params, opt);
    const FunctionalValue rhs_raw = functional(v, transported_params(params), opt);
    IdentityCheck out;
    out.lhs = lhs.value;
    out.rhs = rhs_raw.value * LogReal(integral_identity_factor(params));
    if (out.lhs.is_zero() && out.rhs.is_zero())
        out.residual = 0.0;
    else
        out.residual = std::abs(std::expm1(out.rhs.log() - out.lhs.log()));
    out.saturated = lhs.saturated() || out.rhs.saturated();
    return out;
}

}  // namespace wtm::transform
