#pragma once

#include "wtm/core.hpp"
#include "wtm/profile.hpp"

namespace wtm::transform {

/// The radial change of variables F(x) = ((N-g)/N)^{N/(N-g)} |x|^{g/(N-g)} x and the
/// change of functions v(x) = ((N-g)/N)^{(N-1)/N} u(F(x)) that carries X^{1,N}_gamma onto W^{1,N}.
struct TransformSpec {
    int dim;
    double gamma;

    /// Throws DomainError unless gamma < N.
    TransformSpec(int dim, double gamma);
    explicit TransformSpec(const ProblemParams& p) : TransformSpec(p.dim, p.gamma) {}

    double n() const { return static_cast<double>(dim); }
    /// N/(N-gamma): |F(x)| grows like |x|^{radius_exponent}.
    double radius_exponent() const { return n() / (n() - gamma); }
    /// ((N-gamma)/N)^{N/(N-gamma)}
    double radius_prefactor() const;
    /// ((N-gamma)/N)^{(N-1)/N}
    double amplitude_factor() const;
    /// Induced weight exponent N(beta-gamma)/(N-gamma).
    double induced_beta(double beta) const { return n() * (beta - gamma) / (n() - gamma); }
};

/// |F(x)| for |x| = r.
double radius_map(double r, const TransformSpec& spec);
/// Inverse of radius_map, computed in log space.
double radius_preimage(double rho, const TransformSpec& spec);
/// det DF(x) = ((N-gamma)/N)^{N-1} |F(x)|^gamma for |x| = r.
double jacobian_det(double r, const TransformSpec& spec);

/// u -> v. Nodes map to preimages of the radius map; log-affine segments stay log-affine.
RadialProfile push_profile(const RadialProfile& u, const TransformSpec& spec);
/// v -> u, exact inverse of push_profile.
RadialProfile pull_profile(const RadialProfile& v, const TransformSpec& spec);

/// Parameters of the transported problem: alpha' = N alpha/(N-gamma), beta' = induced beta, gamma' = 0.
ProblemParams transported_params(const ProblemParams& params);

/// Constant ((N-gamma)/N)^{N-1+N(gamma-beta)/(N-gamma)} relating the two functionals.
double integral_identity_factor(const ProblemParams& params);

struct IdentityCheck {
    LogReal lhs;       // J_alpha(u) with weight |x|^{-beta}
    LogReal rhs;       // factor * J_{N alpha/(N-gamma)}(v) with weight |y|^{-beta~}
    double residual;   // |rhs/lhs - 1|
    bool saturated = false;
};

/// Both sides of the change-of-variables identity for J_alpha, with v = push_profile(u).
IdentityCheck verify_integral_identity(const RadialProfile& u, const ProblemParams& params,
                                       const quad::Options& opt = {});

}  // namespace wtm::transform
