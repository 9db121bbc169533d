#include "wtm/moser.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>
#include <utility>

#include "wtm/error.hpp"
#include "wtm/special.hpp"

namespace wtm::moser {

namespace {

// (A_n, b_n) without materializing the profile; e^{-b_n} underflows for large n.
std::pair<double, double> constants(int n, const ProblemParams& params) {
    if (n < 1) throw DomainError("Moser index must be >= 1");
    const double N = params.n();
    const double depth = n / (N - params.beta);
    const double amplitude = std::pow(1.0 / sphere_area(params.dim), 1.0 / N) * std::pow(depth, -1.0 / N);
    return {amplitude, depth};
}

}  // namespace

MoserElement build(int n, const ProblemParams& params) {
    MoserElement e;
    e.n = n;
    std::tie(e.amplitude, e.depth) = constants(n, params);
    const double inner = std::exp(-e.depth);
    if (!(inner > 0.0) || !std::isnormal(inner))
        throw DomainError("Moser index " + std::to_string(n) + " puts the plateau radius below double range");
    e.profile = RadialProfile({inner, 1.0}, {e.amplitude * e.depth, 0.0});
    return e;
}

double weight_norm_closed_form(int n, const ProblemParams& params) {
    const auto [amplitude, depth] = constants(n, params);
    const double N = params.n();
    const double c = N - params.gamma;
    const double omega = sphere_area(params.dim);
    const double first = omega * std::exp(N * std::log(amplitude * depth) - c * depth) / c;
    const double second =
        ((N - params.beta) / n) * std::pow(c, -(N + 1.0)) * special::lower_incomplete_gamma(N + 1.0, c * depth);
    return first + second;
}

double weight_norm_limit(const ProblemParams& params) {
    const double N = params.n();
    return (N - params.beta) * std::tgamma(N + 1.0) / std::pow(N - params.gamma, N + 1.0);
}

MoserElement normalized(int n, const ProblemParams& params) {
    MoserElement e = build(n, params);
    e.lambda = std::pow(1.0 + weight_norm_closed_form(n, params), -1.0 / params.n());
    e.profile = e.profile.scaled(e.lambda);
    e.normalized = true;
    return e;
}

LogReal plateau_integral(int n, const ProblemParams& params, double amplitude_scale) {
    const double N = params.n();
    const double arg = n * params.alpha / critical_alpha_beta(params) * std::pow(amplitude_scale, params.conjugate_exponent());
    const double log_value = std::log(sphere_area(params.dim) / (N - params.beta)) - n + log_phi(params.dim, arg);
    return LogReal::from_log(log_value);
}

LogReal plateau_lower_bound(int n, const ProblemParams& params) {
    const double lambda = std::pow(1.0 + weight_norm_closed_form(n, params), -1.0 / params.n());
    return plateau_integral(n, params, lambda);
}

int threshold_weight(const ProblemParams& params, int cap) {
    const double bound = 2.0 * weight_norm_limit(params);
    int n0 = cap + 1;
    for (int n = cap; n >= 1; --n) {
        if (n * weight_norm_closed_form(n, params) > bound) break;
        n0 = n;
    }
    return n0;
}

int threshold_phi(int dim, double ratio, int cap) {
    int n0 = cap + 1;
    for (int n = cap; n >= 1; --n) {
        const double t = ratio * n;
        if (log_phi(dim, t) < t - std::log(2.0)) break;
        n0 = n;
    }
    return n0;
}

double AsymptoticRow::ratio() const { return std::exp(log_ratio); }

std::string AsymptoticRow::flag_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < flags.size(); ++i) os << (i ? ";" : "") << flags[i];
    return os.str();
}

ScanTable asymptotic_lower_scan(const ProblemParams& base, const std::vector<double>& alpha_grid) {
    const double crit = critical_alpha_beta(base);
    for (double a : alpha_grid)
        if (!(a > 0.0) || !(a < crit))
            throw DomainError("asymptotic scan needs 0 < alpha < alpha_{N,beta}");

    const double N = base.n();
    const double k = base.at_exponent();
    const int n1 = threshold_weight(base);

    ScanTable rows;
    for (double alpha : alpha_grid) {
        const ProblemParams p = base.with_alpha(alpha);
        AsymptoticRow row;
        row.alpha = alpha;
        row.ratio_to_critical = alpha / crit;
        const double gap = 1.0 - row.ratio_to_critical;
        // The relative slack absorbs rounding in 1 - a (1 - 0.9 is slightly below 0.1).
        row.n = std::max(1, static_cast<int>(std::ceil(1.0 / gap * (1.0 - 1e-12))));

        const double log_plateau = plateau_integral(row.n, p, 1.0).log();
        const double log_weight = std::log(weight_norm_closed_form(row.n, p));
        row.log_ratio = log_plateau - k * log_weight;
        const double log_factor = k * std::log1p(-std::pow(row.ratio_to_critical, N - 1.0));
        row.product = std::exp(row.log_ratio + log_factor);

        const int n2 = threshold_phi(base.dim, row.ratio_to_critical);
        row.window_low = std::max(n1, n2);
        if (row.n < row.window_low) row.flags.push_back("below_window");
        if (row.n > 2.0 / gap) row.flags.push_back("above_window");
        if ((1.0 - std::pow(row.ratio_to_critical, N - 1.0)) / gap < 0.5 * (N - 1.0))
            row.flags.push_back("alpha_not_close");
        if (row.log_ratio > LogReal::kMaxLinearLog) row.flags.push_back("saturated");
        rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.alpha < b.alpha; });
    return rows;
}

io::Table to_table(const ScanTable& rows, const ProblemParams& base) {
    io::Table t;
    t.comments = {
        "Adachi-Tanaka lower bracket from the weighted Moser sequence",
        "N=" + std::to_string(base.dim) + " beta=" + io::format_double(base.beta) +
            " gamma=" + io::format_double(base.gamma) + " alpha_crit=" + io::format_double(critical_alpha_beta(base)),
        "n = ceil(1/(1 - alpha/alpha_crit)); ratio = plateau integral of u_n / ||u_n||_{N,gamma}^{N(N-beta)/(N-gamma)}",
        "product = ratio * (1 - (alpha/alpha_crit)^{N-1})^{(N-beta)/(N-gamma)} (dimensionless)",
    };
    t.columns = {"alpha", "n", "ratio", "product", "flags"};
    for (const auto& r : rows)
        t.add_row({r.alpha, static_cast<std::int64_t>(r.n), r.ratio(), r.product, r.flag_string()});
    return t;
}

}  // namespace wtm::moser
