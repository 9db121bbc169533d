#include "wtm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wtm/error.hpp"
#include "wtm/parallel.hpp"

namespace wtm::analysis {

namespace {

std::string cell_label(const ProblemParams& p) {
    return "N=" + std::to_string(p.dim) + " beta=" + io::format_double(p.beta) +
           " gamma=" + io::format_double(p.gamma) + " alpha_crit=" + io::format_double(critical_alpha_beta(p));
}

void require_orbit_setting(const ProblemParams& params) {
    if (params.dim != 2 || params.gamma != params.beta || params.beta < 0.0)
        throw PreconditionError("the dilation orbit needs N = 2 and gamma = beta in [0, 2)");
}

quad::Options tightened(const quad::Options& opt) {
    quad::Options t = opt;
    t.rel_tol = std::min(opt.rel_tol, 1e-13);
    return t;
}

}  // namespace

double g_factor(double alpha, const ProblemParams& params) {
    const double crit = critical_alpha_beta(params);
    if (!(alpha > 0.0 && alpha < crit)) throw DomainError("g_factor needs 0 < alpha < alpha_{N,beta}");
    const double an = std::pow(alpha / crit, params.n() - 1.0);
    return std::pow((1.0 - an) / an, params.at_exponent());
}

ScalingTransport scaling_transport(const RadialProfile& u, const ProblemParams& params, const quad::Options& opt) {
    const double crit = critical_alpha_beta(params);
    if (!(params.alpha < crit)) throw DomainError("scaling_transport needs alpha < alpha_{N,beta}");
    const NormReport nu = norms(u, params, opt);
    if (nu.grad_pow > 1.0 + 1e-8) throw PreconditionError("scaling_transport needs ||grad u||_N <= 1");
    if (std::abs(nu.weight_pow - 1.0) > 1e-8) throw PreconditionError("scaling_transport needs ||u||_{N,gamma} = 1");

    const double n = params.n();
    ScalingTransport r;
    const double cn = std::pow(params.alpha / crit, n - 1.0);  // C^N
    r.c = std::pow(cn, 1.0 / n);
    r.lambda = std::pow(cn / (1.0 - cn), 1.0 / (n - params.gamma));
    r.transported = dilate(u, r.lambda).scaled(r.c);

    const ProblemParams at_crit = params.with_alpha(crit);
    r.source_value = functional(u, params, opt);
    r.target_value = functional(r.transported, at_crit, opt);
    r.predicted_log = r.source_value.log() - (n - params.beta) * std::log(r.lambda);
    r.residual = std::abs(std::expm1(r.target_value.log() - r.predicted_log));
    r.full_norm_pow = norms(r.transported, params, opt).full_pow;
    return r;
}

BallTransport ball_transport(const RadialProfile& u, const ProblemParams& params, const quad::Options& opt) {
    const ProblemParams at_crit = params.with_alpha(critical_alpha_beta(params));
    const NormReport nu = norms(u, at_crit, opt);
    if (nu.full_pow > 1.0 + 1e-8) throw PreconditionError("ball_transport needs ||u||_X <= 1");
    if (!(nu.grad_pow > 0.0) || !(nu.grad_pow < 1.0))
        throw DegenerateInputError("ball_transport needs 0 < ||grad u||_N < 1");

    const double n = params.n();
    BallTransport r;
    r.grad_pow = nu.grad_pow;
    r.lambda = std::pow((1.0 - r.grad_pow) / r.grad_pow, 1.0 / (n - params.gamma));
    r.alpha_prime = at_crit.alpha * std::pow(r.grad_pow, 1.0 / (n - 1.0));
    r.transported = dilate(u, r.lambda).scaled(std::pow(r.grad_pow, -1.0 / n));

    const ProblemParams prime = params.with_alpha(r.alpha_prime);
    r.source_value = functional(u, at_crit, opt);
    r.target_value = functional(r.transported, prime, opt);
    const double log_lambda_power = (n - params.beta) * std::log(r.lambda);
    r.identity_residual = std::abs(std::expm1(log_lambda_power + r.target_value.log() - r.source_value.log()));

    const NormReport nv = norms(r.transported, prime, opt);
    r.v_grad_pow = nv.grad_pow;
    r.v_weight_factor = std::pow(nv.weight_pow, params.at_exponent());
    r.g_alpha_prime = std::exp(log_lambda_power);
    r.at_ratio = std::exp(r.target_value.log() - std::log(r.v_weight_factor));
    r.bound = r.g_alpha_prime * r.at_ratio;
    r.slack = std::expm1(log_lambda_power + std::log(r.at_ratio) - r.source_value.log());
    return r;
}

std::vector<double> default_relation_grid(const ProblemParams& base, int count) {
    if (count < 1) throw ValidationError("relation grid needs at least one point");
    const double crit = critical_alpha_beta(base);
    std::vector<double> grid;
    for (int k = 1; k <= count; ++k) grid.push_back(crit * k / (count + 1.0));
    return grid;
}

RelationScan relation_scan(const ProblemParams& base, const std::vector<double>& alpha_grid,
                           const opt::OptimizerConfig& config) {
    const double crit = critical_alpha_beta(base);
    if (alpha_grid.empty()) throw ValidationError("relation scan needs a nonempty alpha grid");
    std::vector<double> grid(alpha_grid);
    std::sort(grid.begin(), grid.end());
    for (double a : grid)
        if (!(a > 0.0 && a < crit)) throw DomainError("relation grid must lie in (0, alpha_{N,beta})");

    opt::OptimizerConfig inner = config;
    inner.jobs = 1;
    std::vector<opt::MaximizationResult> a_results(grid.size());
    parallel_for(grid.size(), config.jobs,
                 [&](std::size_t i) { a_results[i] = opt::maximize_A(base.with_alpha(grid[i]), inner); });

    RelationScan scan;
    std::vector<RadialProfile> transported;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        RelationRow row;
        row.alpha = grid[i];
        row.ratio_to_critical = grid[i] / crit;
        row.g_factor = g_factor(grid[i], base);
        row.a_estimate = a_results[i].value.linear();
        row.product = row.g_factor * row.a_estimate;
        row.a_converged = a_results[i].converged;
        scan.rows.push_back(row);
        transported.push_back(scaling_transport(a_results[i].best, base.with_alpha(grid[i]), config.quad).transported);
    }

    const opt::MaximizationResult b = opt::maximize_B(base.with_alpha(crit), config, transported);
    scan.b_estimate = b.value.linear();
    scan.b_converged = b.converged;
    scan.b_start_id = b.start_id;
    scan.min_margin = std::numeric_limits<double>::infinity();
    for (const auto& row : scan.rows) {
        if (row.product > scan.sup_product) {
            scan.sup_product = row.product;
            scan.sup_alpha = row.alpha;
        }
        scan.min_margin = std::min(scan.min_margin, scan.b_estimate - row.product);
    }
    scan.gap = std::abs(scan.sup_product - scan.b_estimate) / scan.b_estimate;
    return scan;
}

io::Table to_table(const RelationScan& scan, const ProblemParams& base) {
    io::Table t;
    t.comments = {
        "Relation scan: g(alpha) * A(alpha) against B at alpha_crit",
        cell_label(base),
        "g = ((1 - a^{N-1}) / a^{N-1})^{(N-beta)/(N-gamma)}, a = alpha/alpha_crit",
        "A = Adachi-Tanaka ascent estimate; B = full-norm ascent estimate at alpha_crit (same on every row)",
        "B=" + io::format_double(scan.b_estimate) + " sup_product=" + io::format_double(scan.sup_product) +
            " gap=" + io::format_double(scan.gap) + " min_margin=" + io::format_double(scan.min_margin),
    };
    t.columns = {"alpha", "ratio_to_critical", "g_factor", "a_estimate", "product", "b_estimate", "a_converged"};
    for (const auto& r : scan.rows)
        t.add_row({r.alpha, r.ratio_to_critical, r.g_factor, r.a_estimate, r.product, scan.b_estimate,
                   static_cast<std::int64_t>(r.a_converged)});
    return t;
}

nlohmann::json summary_json(const RelationScan& scan) {
    return {{"b_estimate", scan.b_estimate},     {"b_converged", scan.b_converged},
            {"b_start_id", scan.b_start_id},     {"sup_product", scan.sup_product},
            {"sup_alpha", scan.sup_alpha},       {"min_margin", scan.min_margin},
            {"one_sided_ok", scan.min_margin >= -1e-6}, {"gap", scan.gap},
            {"gap_within_soft_threshold", scan.gap < 0.15}};
}

OrbitReport orbit_derivative(const RadialProfile& v, const ProblemParams& params, const quad::Options& opt) {
    require_orbit_setting(params);
    const quad::Options tight = tightened(opt);
    const NormReport nv = norms(v, params, tight);
    if (std::abs(nv.full_pow - 1.0) > 1e-8) throw PreconditionError("orbit_derivative needs ||v||_X = 1");

    OrbitReport r;
    r.alpha = params.alpha;
    const double a = nv.grad_pow;
    const double b = nv.weight_pow;
    const double damp = 1.0 - 0.5 * params.beta;
    const double vmax = *std::max_element(v.values().begin(), v.values().end());
    const double peak = params.alpha * vmax * vmax;  // terms decay once j exceeds this
    double sum = 0.0, bounded = 0.0, scale = 0.0;
    bool done = false;
    for (int j = 1; j <= r.j_max; ++j) {
        // log of (alpha^j / j!) ||v||_{2j,beta}^{2j} / (a+b)^{j+1}
        const double log_base = j * std::log(params.alpha) - std::lgamma(j + 1.0) +
                                log_weighted_lp_pow(v, 2.0 * j, params.beta, params, tight) -
                                (j + 1.0) * std::log(a + b);
        const double base_term = std::exp(log_base);
        const double term = damp * base_term * (-a + (j - 1.0) * b);
        r.contributions.push_back(term);
        sum += term;
        bounded += damp * base_term * j;
        scale = std::max({scale, std::abs(sum), std::abs(term)});
        r.terms = j;
        if (j > peak && std::abs(term) < 1e-14 * scale) {
            done = true;
            break;
        }
    }
    r.saturated = !done || !std::isfinite(sum);
    r.series = sum;
    r.bounded_variant = bounded;

    auto along = [&](double tau) {
        const double s = std::sqrt(tau);
        const RadialProfile vt = dilate(v, s).scaled(s);
        const RadialProfile wt = vt.scaled(1.0 / std::sqrt(norms(vt, params, tight).full_pow));
        return functional(wt, params, tight).linear();
    };
    const double h = 1e-5;
    const double d1 = (along(1.0 + h) - along(1.0 - h)) / (2.0 * h);
    const double d2 = (along(1.0 + 0.5 * h) - along(1.0 - 0.5 * h)) / h;
    r.fd = (4.0 * d2 - d1) / 3.0;  // Richardson
    r.relative_error = std::abs(r.series - r.fd) / std::max(1.0, std::abs(r.fd));
    r.sign = (r.series > 0.0) - (r.series < 0.0);
    return r;
}

nlohmann::json to_json(const OrbitReport& r) {
    return {{"alpha", r.alpha},
            {"series", r.series},
            {"fd", r.fd},
            {"relative_error", r.relative_error},
            {"j_max", r.j_max},
            {"terms", r.terms},
            {"contributions", r.contributions},
            {"bounded_variant", r.bounded_variant},
            {"sign", r.sign},
            {"saturated", r.saturated}};
}

std::vector<MomentRow> moment_ratio_table(const RadialProfile& v, double alpha_tilde, const ProblemParams& params,
                                          int j_max, const quad::Options& opt) {
    require_orbit_setting(params);
    if (j_max < 2) throw PreconditionError("moment table needs j_max >= 2");
    if (!(alpha_tilde > 0.0)) throw PreconditionError("moment table needs alpha_tilde > 0");
    if (v.is_zero()) throw DegenerateInputError("moment table of the zero profile");
    const double a = grad_norm_pow(v, params);
    const double log_b = log_weighted_lp_pow(v, 2.0, params.beta, params, opt);
    if (!(a > 0.0)) throw DegenerateInputError("moment table needs a nonconstant profile");

    std::vector<MomentRow> rows;
    double running = 0.0;
    for (int j = 2; j <= j_max; ++j) {
        MomentRow row;
        row.j = j;
        row.log_ratio = log_weighted_lp_pow(v, 2.0 * j, params.beta, params, opt) + j * std::log(alpha_tilde) -
                        std::lgamma(j + 1.0) - (j - 1.0) * std::log(a) - log_b;
        row.ratio = std::exp(row.log_ratio);
        running = std::max(running, row.ratio);
        row.running_max = running;
        rows.push_back(row);
    }
    return rows;
}

io::Table to_table(const std::vector<MomentRow>& rows, double alpha_tilde, const ProblemParams& params) {
    io::Table t;
    t.comments = {
        "Moment ratios ||v||_{2j,beta}^{2j} at^j / (j! ||grad v||_2^{2j-2} ||v||_{2,beta}^2)",
        cell_label(params) + " alpha_tilde=" + io::format_double(alpha_tilde),
        "running_max is the empirical bounding constant up to row j",
    };
    t.columns = {"j", "ratio", "log_ratio", "running_max"};
    for (const auto& r : rows) t.add_row({static_cast<std::int64_t>(r.j), r.ratio, r.log_ratio, r.running_max});
    return t;
}

}  // namespace wtm::analysis
