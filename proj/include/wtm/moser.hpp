#pragma once

#include <string>
#include <vector>

#include "wtm/core.hpp"
#include "wtm/profile.hpp"
#include "wtm/table.hpp"

namespace wtm::moser {

/// n-th weighted Moser function
///   u_n = A_n b_n on |x| < e^{-b_n},  A_n log(1/|x|) on e^{-b_n} < |x| < 1,  0 outside,
/// with A_n = omega_{N-1}^{-1/N} (n/(N-beta))^{-1/N}, b_n = n/(N-beta), so that
/// (A_n b_n)^{N/(N-1)} = n/alpha_{N,beta} and ||grad u_n||_N = 1.
struct MoserElement {
    int n = 1;
    double amplitude = 0.0;  // A_n
    double depth = 0.0;      // b_n
    double lambda = 1.0;     // lambda_n^N (1 + ||u_n||_{N,gamma}^N) = 1
    bool normalized = false; // profile holds lambda_n u_n instead of u_n
    RadialProfile profile = RadialProfile::zero();

    double plateau_value() const { return amplitude * depth; }
};

/// u_n. Throws DomainError for n < 1.
MoserElement build(int n, const ProblemParams& params);

/// Exact ||u_n||_{N,gamma}^N = I + II with
///   I  = omega (A_n b_n)^N e^{-(N-gamma) b_n}/(N-gamma)
///   II = ((N-beta)/n) (N-gamma)^{-(N+1)} gamma_inc(N+1, (N-gamma) b_n).
double weight_norm_closed_form(int n, const ProblemParams& params);

/// lim_n n ||u_n||_{N,gamma}^N = (N-beta) Gamma(N+1) / (N-gamma)^{N+1}.
double weight_norm_limit(const ProblemParams& params);

/// v_n = lambda_n u_n on the unit sphere of the full norm.
MoserElement normalized(int n, const ProblemParams& params);

/// Exact functional over the plateau of c * u_n:
///   (omega/(N-beta)) e^{-n} Phi_N((n alpha/alpha_{N,beta}) c^{N/(N-1)}).
LogReal plateau_integral(int n, const ProblemParams& params, double amplitude_scale);

/// plateau_integral with c = lambda_n, a lower bound on J_alpha(v_n).
LogReal plateau_lower_bound(int n, const ProblemParams& params);

/// Smallest n0 such that n ||u_n||_{N,gamma}^N <= 2 (limit) for every n in [n0, cap].
int threshold_weight(const ProblemParams& params, int cap = 4096);

/// Smallest n0 such that Phi_N(a n) >= e^{a n}/2 for every n in [n0, cap], a = alpha/alpha_{N,beta}.
int threshold_phi(int dim, double ratio, int cap = 4096);

struct AsymptoticRow {
    double alpha = 0.0;
    double ratio_to_critical = 0.0;  // alpha / alpha_{N,beta}
    int n = 0;                       // ceil(1/(1 - alpha/alpha_{N,beta}))
    double log_ratio = 0.0;          // log of plateau integral / ||u_n||^{N(N-beta)/(N-gamma)}
    double product = 0.0;            // ratio * (1 - a^{N-1})^{(N-beta)/(N-gamma)}
    int window_low = 0;              // max(N1, N2)
    std::vector<std::string> flags;

    double ratio() const;
    std::string flag_string() const;
};

using ScanTable = std::vector<AsymptoticRow>;

/// Adachi-Tanaka lower bracket along alpha -> alpha_{N,beta}. base.alpha is ignored.
/// Throws DomainError if some alpha >= alpha_{N,beta}.
ScanTable asymptotic_lower_scan(const ProblemParams& base, const std::vector<double>& alpha_grid);

/// Columns: alpha, n, ratio, product, flags.
io::Table to_table(const ScanTable& rows, const ProblemParams& base);

}  // namespace wtm::moser
