#include "wtm/core.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "wtm/error.hpp"

namespace wtm {

namespace {

void require_dim(int dim) {
    if (dim < 2) throw DomainError("dimension must be >= 2, got " + std::to_string(dim));
}

void require_nonnegative(double t) {
    if (!(t >= 0.0)) throw DomainError("truncated exponential needs t >= 0, got " + std::to_string(t));
}

// log of the tail sum_{j>=k} t^j/j!, all terms positive so there is no cancellation.
double log_tail_series(int k, double t) {
    // Factor out the leading term t^k/k! and sum the ratios.
    double term = 1.0;
    double sum = 1.0;
    for (int j = k + 1; j < k + 2000; ++j) {
        term *= t / j;
        sum += term;
        if (term < sum * 1e-17 && j > t) break;
    }
    return k * std::log(t) - std::lgamma(k + 1.0) + std::log(sum);
}

// log of sum_{j<k} t^j/j!.
double log_partial_sum(int k, double t) {
    double term = 1.0;
    double sum = 1.0;
    for (int j = 1; j < k; ++j) {
        term *= t / j;
        sum += term;
    }
    return std::log(sum);
}

}  // namespace

ProblemParams::ProblemParams(int dim_, double alpha_, double beta_, double gamma_)
    : dim(dim_), alpha(alpha_), beta(beta_), gamma(gamma_) {
    if (dim < 2) throw ValidationError("dim must be >= 2");
    if (!std::isfinite(alpha) || !(alpha > 0.0)) throw ValidationError("alpha must be a positive finite number");
    if (!std::isfinite(beta) || !std::isfinite(gamma)) throw ValidationError("beta and gamma must be finite");
    if (!(gamma <= beta)) throw ValidationError("need gamma <= beta");
    if (!(beta < dim)) throw ValidationError("need beta < N");
}

ProblemParams ProblemParams::critical(int dim, double beta, double gamma) {
    require_dim(dim);
    return ProblemParams(dim, critical_alpha_beta(dim, beta), beta, gamma);
}

double sphere_area(int dim) {
    require_dim(dim);
    const double half = 0.5 * dim;
    return 2.0 * std::exp(half * std::log(std::numbers::pi) - std::lgamma(half));
}

double critical_alpha(int dim) {
    const double omega = sphere_area(dim);
    return dim * std::pow(omega, 1.0 / (dim - 1));
}

double critical_alpha_beta(int dim, double beta) {
    require_dim(dim);
    return ((dim - beta) / dim) * critical_alpha(dim);
}

double critical_alpha_beta(const ProblemParams& params) {
    return critical_alpha_beta(params.dim, params.beta);
}

double log_truncated_exp(int k, double t) {
    require_nonnegative(t);
    if (t == 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    if (k == 0) return t;
    if (k == 1) {
        // log(e^t - 1)
        return t < 30.0 ? std::log(std::expm1(t)) : t + std::log1p(-std::exp(-t));
    }
    // Below 2k the removed polynomial is comparable to e^t; sum the tail instead.
    if (t < 2.0 * k + 10.0) return log_tail_series(k, t);
    return t + std::log1p(-std::exp(log_partial_sum(k, t) - t));
}

double log_phi(int dim, double t) {
    require_dim(dim);
    return log_truncated_exp(dim - 1, t);
}

double phi(int dim, double t) {
    require_dim(dim);
    require_nonnegative(t);
    if (dim == 2) return std::expm1(t);
    return std::exp(log_phi(dim, t));
}

LogReal phi_scaled(int dim, double t) { return LogReal::from_log(log_phi(dim, t)); }

double log_phi_derivative(int dim, double t) {
    require_dim(dim);
    return log_truncated_exp(dim - 2, t);
}

double phi_derivative(int dim, double t) {
    require_dim(dim);
    require_nonnegative(t);
    if (dim == 2) return std::exp(t);
    if (dim == 3) return std::expm1(t);
    return std::exp(log_phi_derivative(dim, t));
}

}  // namespace wtm
