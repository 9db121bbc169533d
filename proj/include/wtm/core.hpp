#pragma once

#include "wtm/log_real.hpp"

namespace wtm {

/// The quadruple (N, alpha, beta, gamma) driving every computation.
///
/// Functionals act on X^{1,N}_gamma with the singular weight |x|^{-beta}:
///   J_alpha(u) = int Phi_N(alpha |u|^{N/(N-1)}) |x|^{-beta} dx.
/// Requires N >= 2, gamma <= beta < N and alpha > 0.
struct ProblemParams {
    int dim = 2;
    double alpha = 1.0;
    double beta = 0.0;
    double gamma = 0.0;

    ProblemParams() = default;
    /// Throws ValidationError if the invariants do not hold.
    ProblemParams(int dim, double alpha, double beta, double gamma);

    /// Same (N, beta, gamma) at alpha = alpha_{N,beta}.
    static ProblemParams critical(int dim, double beta, double gamma);

    ProblemParams with_alpha(double a) const { return ProblemParams(dim, a, beta, gamma); }

    double n() const { return static_cast<double>(dim); }
    /// N/(N-1), the exponent applied to |u| inside Phi_N.
    double conjugate_exponent() const { return n() / (n() - 1.0); }
    /// (N-beta)/(N-gamma), the exponent in the Adachi-Tanaka normalization.
    double at_exponent() const { return (n() - beta) / (n() - gamma); }
    /// Non-radial statements additionally need gamma >= 0.
    bool nonradial_admissible() const { return gamma >= 0.0; }
};

/// omega_{N-1}: area of the unit sphere S^{N-1} in R^N.
double sphere_area(int dim);

/// alpha_N = N omega_{N-1}^{1/(N-1)}.
double critical_alpha(int dim);

/// alpha_{N,beta} = ((N-beta)/N) alpha_N.
double critical_alpha_beta(const ProblemParams& params);
double critical_alpha_beta(int dim, double beta);

/// Truncated exponential Phi_N(t) = e^t - sum_{j=0}^{N-2} t^j/j!. Returns +inf past overflow;
/// use log_phi or phi_scaled in that regime.
double phi(int dim, double t);

/// log Phi_N(t), finite for every t > 0 (and -inf at t = 0).
double log_phi(int dim, double t);

/// Phi_N(t) carried on log scale; saturated() reports whether the linear value overflows.
LogReal phi_scaled(int dim, double t);

/// d/dt Phi_N(t) = Phi_{N-1}(t) for N >= 3 and e^t for N = 2.
double phi_derivative(int dim, double t);
double log_phi_derivative(int dim, double t);

/// log of e^t - sum_{j<k} t^j/j!, i.e. the exponential with its first k Taylor terms removed.
/// k = 0 gives t itself. Requires t >= 0.
double log_truncated_exp(int k, double t);

}  // namespace wtm
