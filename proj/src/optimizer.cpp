#include "wtm/optimizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "wtm/error.hpp"
#include "wtm/moser.hpp"
#include "wtm/parallel.hpp"
#include "wtm/profile_json.hpp"

namespace wtm::opt {

void OptimizerConfig::validate() const {
    if (grid.nodes < 3) throw ValidationError("grid needs at least 3 nodes");
    if (!(grid.r_min > 0.0) || !(grid.r_max > grid.r_min)) throw ValidationError("grid needs 0 < r_min < r_max");
    if (max_iterations < 0) throw ValidationError("max_iterations must be >= 0");
    if (!(step.initial_step > 0.0)) throw ValidationError("initial step must be positive");
    if (!(step.backtrack > 0.0 && step.backtrack < 1.0)) throw ValidationError("backtrack factor must lie in (0, 1)");
    if (!(step.armijo > 0.0 && step.armijo < 1.0)) throw ValidationError("Armijo constant must lie in (0, 1)");
    if (!(step.growth >= 1.0)) throw ValidationError("step growth must be >= 1");
    if (!(step.step_floor > 0.0)) throw ValidationError("step floor must be positive");
    if (!(tolerance > 0.0) || !(tolerance < step.initial_step)) throw ValidationError("need 0 < tolerance < initial step");
    for (int n : moser_starts)
        if (n < 1) throw ValidationError("Moser start indices must be >= 1");
    if (random_starts < 0) throw ValidationError("random_starts must be >= 0");
    if (jobs < 1) throw ValidationError("jobs must be >= 1");
    if (!(quad.rel_tol > 0.0) || quad.max_panels < 1) throw ValidationError("invalid quadrature options");
}

double MaximizationResult::max_residual() const {
    double m = 0.0;
    for (const auto& [_, v] : residuals) m = std::max(m, v);
    return m;
}

double at_ratio(const RadialProfile& u, const ProblemParams& params, const quad::Options& opt) {
    const double w = weighted_lp_pow(u, params.n(), params.gamma, params, opt);
    if (!(w > 0.0)) throw DegenerateInputError("Adachi-Tanaka ratio of the zero profile");
    return std::exp(functional(u, params, opt).log() - params.at_exponent() * std::log(w));
}

namespace {

enum class Kind { B, ASlice, ARatio };

double dot(const std::vector<double>& a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

struct Evaluation {
    double value = 0.0;
    std::vector<double> tangent;  // gradient of objective o projection at the current feasible point
};

// Objective, constraint projection and tangent gradient for the three problem shapes.
class Problem {
public:
    Problem(const ProblemParams& p, Kind k, const quad::Options& q) : params_(p), kind_(k), quad_(q) {}

    Kind kind() const { return kind_; }

    double constraint(const RadialProfile& u) const {
        const double g = grad_norm_pow(u, params_);
        if (kind_ != Kind::B) return g;
        return g + weighted_lp_pow(u, params_.n(), params_.gamma, params_, quad_);
    }

    RadialProfile project(const RadialProfile& u) const {
        const double c = constraint(u);
        if (!(c > 0.0)) throw DegenerateInputError("cannot project the zero profile");
        RadialProfile v = u.scaled(std::pow(c, -1.0 / params_.n()));
        if (kind_ == Kind::ASlice) v = at_normalize(v, params_, quad_);
        return v;
    }

    double objective(const RadialProfile& u) const {
        if (kind_ == Kind::B) return functional(u, params_, quad_).linear();
        return at_ratio(u, params_, quad_);
    }

    Evaluation evaluate(const RadialProfile& u) const {
        const FunctionalGradient fg = functional_gradient(u, params_, quad_);
        const NormsGradient ng = norms_gradient(u, params_, quad_);
        const double n = params_.n();
        Evaluation e;
        std::vector<double> grad_obj, grad_con(u.size());
        if (kind_ == Kind::B) {
            e.value = fg.value.linear();
            grad_obj = fg.grad;
            for (std::size_t i = 0; i < u.size(); ++i) grad_con[i] = ng.grad_pow[i] + ng.weight_pow[i];
        } else {
            // Euler: grad W . u = N W for the N-homogeneous weight norm.
            const double w = dot(ng.weight_pow, u.values()) / n;
            const double k = params_.at_exponent();
            const double j = fg.value.linear();
            const double wk = std::pow(w, k);
            e.value = j / wk;
            grad_obj.resize(u.size());
            for (std::size_t i = 0; i < u.size(); ++i)
                grad_obj[i] = fg.grad[i] / wk - k * e.value / w * ng.weight_pow[i];
            grad_con = ng.grad_pow;
        }
        const double g_con = dot(grad_con, u.values()) / n;  // = constraint value
        const double radial = dot(grad_obj, u.values()) / (n * g_con);
        e.tangent.resize(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) e.tangent[i] = grad_obj[i] - radial * grad_con[i];
        return e;
    }

    // Ascent direction M^{-1} g for the tridiagonal metric
    //   M = omega (sum_i (e_{i+1} - e_i)^2 / h_i + hat-function mass with weight e^{(N-gamma)t}),
    // the quadratic model of the full norm in t = log r. Nodes in `fixed` get d = 0.
    std::vector<double> direction(const RadialProfile& u, const std::vector<double>& g,
                                  const std::vector<bool>& fixed) const {
        const double n = params_.n();
        const double c = n - params_.gamma;
        const auto lr = u.log_radii();
        const auto val = u.values();
        const std::size_t m = u.size();
        // Curvature of |x|^N is N(N-1)|x|^{N-2}; freeze it at the current profile, floored so the
        // metric stays definite where slopes or values vanish.
        const double umax = *std::max_element(val.begin(), val.end());
        double smax = 0.0;
        for (std::size_t i = 0; i + 1 < m; ++i)
            smax = std::max(smax, std::abs(val[i + 1] - val[i]) / (lr[i + 1] - lr[i]));
        auto curv = [&](double x, double scale) {
            return 0.5 * n * (n - 1.0) * std::pow(std::max(x, 1e-2 * scale), n - 2.0);
        };
        std::vector<double> diag(m, 0.0), off(m, 0.0);  // off[i] couples i and i+1
        diag[0] += curv(val[0], umax) * std::exp(c * lr[0]) / c;
        static const quad::GaussRule& rule = quad::gauss_legendre(8);
        for (std::size_t i = 0; i + 1 < m; ++i) {
            const double h = lr[i + 1] - lr[i];
            double ll = 0.0, lr_ = 0.0, rr = 0.0;
            for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
                const double w = 0.5 * (rule.nodes[k] + 1.0);
                const double f = 0.5 * h * rule.weights[k] * std::exp(c * (lr[i] + w * h));
                ll += f * (1.0 - w) * (1.0 - w);
                lr_ += f * (1.0 - w) * w;
                rr += f * w * w;
            }
            const double k = curv(std::abs(val[i + 1] - val[i]) / h, smax) / h;
            const double mass = curv(0.5 * (val[i] + val[i + 1]), umax);
            diag[i] += k + mass * ll;
            diag[i + 1] += k + mass * rr;
            off[i] = -k + mass * lr_;
        }
        std::vector<double> rhs(g);
        for (std::size_t i = 0; i < m; ++i) {
            if (!fixed[i]) continue;
            diag[i] = 1.0;
            rhs[i] = 0.0;
            off[i] = 0.0;
            if (i > 0) off[i - 1] = 0.0;
        }
        // Thomas algorithm; M is symmetric positive definite on the free nodes.
        std::vector<double> cp(m, 0.0), d(m);
        double denom = diag[0];
        cp[0] = off[0] / denom;
        d[0] = rhs[0] / denom;
        for (std::size_t i = 1; i < m; ++i) {
            denom = diag[i] - off[i - 1] * cp[i - 1];
            cp[i] = off[i] / denom;
            d[i] = (rhs[i] - off[i - 1] * d[i - 1]) / denom;
        }
        for (std::size_t i = m - 1; i-- > 0;) d[i] -= cp[i] * d[i + 1];
        const double omega = sphere_area(params_.dim);
        for (auto& x : d) x /= omega;
        return d;
    }

private:
    ProblemParams params_;
    Kind kind_;
    quad::Options quad_;
};

struct StartOutcome {
    StartSummary summary;
    RadialProfile profile = RadialProfile::zero();
    std::vector<double> trace;
};

StartOutcome ascend(const Problem& problem, const std::string& id, const RadialProfile& start,
                    const OptimizerConfig& cfg) {
    StartOutcome out;
    out.summary.id = id;
    RadialProfile u = problem.project(start);
    Evaluation e = problem.evaluate(u);
    out.summary.initial_value = e.value;
    out.trace.push_back(e.value);

    double step = cfg.step.initial_step;
    int stagnant = 0;
    out.summary.stop_reason = "max_iterations";
    int it = 0;
    for (; it < cfg.max_iterations; ++it) {
        const std::size_t m = u.size();
        // Pin the tail node and, iteratively, zero nodes the direction would push negative.
        std::vector<bool> fixed(m, false);
        fixed[m - 1] = true;
        std::vector<double> d;
        for (int pass = 0; pass < 8; ++pass) {
            d = problem.direction(u, e.tangent, fixed);
            bool changed = false;
            for (std::size_t i = 0; i < m; ++i)
                if (!fixed[i] && u.values()[i] <= 0.0 && d[i] < 0.0) fixed[i] = changed = true;
            if (!changed) break;
        }
        const double gd = dot(e.tangent, d);
        if (!(gd > 0.0) || std::sqrt(gd) < cfg.tolerance * std::max(std::abs(e.value), 1e-300)) {
            out.summary.converged = true;
            out.summary.stop_reason = "stationary";
            break;
        }

        bool accepted = false;
        RadialProfile candidate = u;
        double candidate_value = e.value;
        while (step >= cfg.step.step_floor) {
            std::vector<double> trial(m);
            for (std::size_t i = 0; i < m; ++i) trial[i] = std::max(0.0, u.values()[i] + step * d[i]);
            trial[m - 1] = 0.0;
            double predicted = 0.0;
            for (std::size_t i = 0; i < m; ++i) predicted += e.tangent[i] * (trial[i] - u.values()[i]);
            if (std::any_of(trial.begin(), trial.end(), [](double x) { return x > 0.0; }) && predicted > 0.0) {
                const RadialProfile p = problem.project(u.with_values(std::move(trial)));
                const double f = problem.objective(p);
                if (std::isfinite(f) && f >= e.value + cfg.step.armijo * predicted) {
                    candidate = p;
                    candidate_value = f;
                    accepted = true;
                    break;
                }
            }
            step *= cfg.step.backtrack;
        }
        if (!accepted) {
            out.summary.stop_reason = "step_floor";
            break;
        }
        const double gain = candidate_value - e.value;
        u = candidate;
        e = problem.evaluate(u);
        out.trace.push_back(e.value);
        step = std::min(step * cfg.step.growth, 1e8);
        stagnant = gain <= 1e-12 * std::abs(e.value) ? stagnant + 1 : 0;
        if (stagnant >= 20) {
            out.summary.converged = true;
            out.summary.stop_reason = "stagnation";
            ++it;
            break;
        }
    }
    out.summary.iterations = it;
    out.summary.final_value = e.value;
    out.profile = u;
    return out;
}

RadialProfile resample(const RadialProfile& src, const std::vector<double>& grid) {
    std::vector<double> radii(grid);
    // Keep the source breakpoints so log-affine sources are represented exactly.
    for (double r : src.radii())
        if (r > grid.front() * (1.0 - 1e-12)) radii.push_back(r);
    std::sort(radii.begin(), radii.end());
    std::vector<double> merged;
    for (double r : radii)
        if (merged.empty() || r > merged.back() * (1.0 + 1e-12)) merged.push_back(r);
    std::vector<double> values(merged.size());
    for (std::size_t i = 0; i < merged.size(); ++i) values[i] = src(merged[i]);
    values.back() = 0.0;
    // If the source plateau starts below the grid, prepend its own plateau node.
    if (src.radii().front() < merged.front()) {
        merged.insert(merged.begin(), src.radii().front());
        values.insert(values.begin(), src.values().front());
    }
    return RadialProfile(std::move(merged), std::move(values));
}

std::vector<double> decreasing_logistic(const std::vector<double>& grid, double center, double width) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = 1.0 / (1.0 + std::exp((std::log(grid[i]) - center) / width));
    const double tail = v.back();
    for (auto& x : v) x = std::max(0.0, x - tail);
    v.back() = 0.0;
    return v;
}

MaximizationResult run(const Problem& problem, const ProblemParams& params, const OptimizerConfig& cfg,
                       const std::vector<RadialProfile>& extra) {
    cfg.validate();
    auto starts = default_starts(params, cfg);
    for (std::size_t i = 0; i < extra.size(); ++i) starts.emplace_back("extra_" + std::to_string(i), extra[i]);
    if (starts.empty()) throw ValidationError("optimizer has no start profiles");

    std::vector<StartOutcome> outcomes(starts.size());
    parallel_for(starts.size(), cfg.jobs, [&](std::size_t i) {
        outcomes[i] = ascend(problem, starts[i].first, starts[i].second, cfg);
    });

    std::size_t best = 0;
    for (std::size_t i = 1; i < outcomes.size(); ++i)
        if (outcomes[i].summary.final_value > outcomes[best].summary.final_value) best = i;

    MaximizationResult r;
    const StartOutcome& b = outcomes[best];
    r.best = b.profile;
    r.value = functional(r.best, params, cfg.quad);
    r.trace = b.trace;
    r.start_id = b.summary.id;
    r.converged = b.summary.converged;
    r.iterations = b.summary.iterations;
    for (const auto& o : outcomes) r.starts.push_back(o.summary);

    const NormReport nr = norms(r.best, params, cfg.quad);
    if (problem.kind() == Kind::B) {
        r.residuals = {{"full_norm", std::abs(nr.full_pow - 1.0)}};
    } else if (problem.kind() == Kind::ASlice) {
        r.residuals = {{"grad_norm", std::abs(nr.grad_pow - 1.0)}, {"weight_norm", std::abs(nr.weight_pow - 1.0)}};
    } else {
        r.residuals = {{"grad_norm", std::abs(nr.grad_pow - 1.0)}};
        // Report the slice-normalized representative; the ratio is dilation invariant.
        r.best = at_normalize(r.best, params, cfg.quad);
        r.value = functional(r.best, params, cfg.quad);
    }
    r.half_mass_radius = half_mass_radius(r.best, params);

    std::vector<double> stretched(r.best.radii().begin(), r.best.radii().end());
    stretched.back() *= 2.0;
    const RadialProfile wider(std::move(stretched), std::vector<double>(r.best.values().begin(), r.best.values().end()));
    const double base = problem.objective(problem.kind() == Kind::ARatio ? r.best : problem.project(r.best));
    r.tail_sensitivity = std::abs(problem.objective(problem.project(wider)) / base - 1.0);
    return r;
}

}  // namespace

std::vector<std::pair<std::string, RadialProfile>> default_starts(const ProblemParams& params,
                                                                   const OptimizerConfig& cfg) {
    const std::vector<double> grid = log_uniform_grid(cfg.grid.nodes, cfg.grid.r_min, cfg.grid.r_max);
    std::vector<std::pair<std::string, RadialProfile>> starts;
    for (int n : cfg.moser_starts)
        starts.emplace_back("moser_" + std::to_string(n), resample(moser::build(n, params).profile, grid));
    if (cfg.broad_bump) starts.emplace_back("broad_bump", RadialProfile(grid, decreasing_logistic(grid, std::log(10.0), 0.5)));
    for (int k = 0; k < cfg.random_starts; ++k) {
        std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(k));
        std::uniform_real_distribution<double> center(std::log(1e-3), std::log(1e2));
        std::uniform_real_distribution<double> width(0.3, 3.0);
        std::uniform_real_distribution<double> jitter(0.9, 1.1);
        std::vector<double> v = decreasing_logistic(grid, center(rng), width(rng));
        for (std::size_t i = 0; i + 1 < v.size(); ++i) v[i] *= jitter(rng);
        starts.emplace_back("random_" + std::to_string(k), RadialProfile(grid, std::move(v)));
    }
    return starts;
}

MaximizationResult maximize_B(const ProblemParams& params, const OptimizerConfig& config,
                              const std::vector<RadialProfile>& extra_starts) {
    const double crit = critical_alpha_beta(params);
    if (params.alpha > crit * (1.0 + 1e-12))
        throw PreconditionError("alpha exceeds alpha_{N,beta} = " + std::to_string(crit) +
                                ": the supremum is infinite (see moser plateau_lower_bound for the divergence witness)");
    const Problem problem(params, Kind::B, config.quad);
    MaximizationResult r = run(problem, params, config, extra_starts);
    // J is strictly increasing in amplitude, so the maximum over the ball sits on the sphere.
    if (!(functional(r.best.scaled(1.001), params, config.quad).value > r.value.value))
        throw std::logic_error("functional failed to increase under amplitude scaling");
    return r;
}

MaximizationResult maximize_A(const ProblemParams& params, const OptimizerConfig& config, AFormulation formulation,
                              const std::vector<RadialProfile>& extra_starts) {
    const double crit = critical_alpha_beta(params);
    if (!(params.alpha < crit))
        throw PreconditionError("alpha must be < alpha_{N,beta} = " + std::to_string(crit) +
                                ": the Adachi-Tanaka supremum is infinite at and above the critical value "
                                "(see moser plateau_lower_bound)");
    const Problem problem(params, formulation == AFormulation::Slice ? Kind::ASlice : Kind::ARatio, config.quad);
    return run(problem, params, config, extra_starts);
}

double gradient_check(const ProblemParams& params, const RadialProfile& u) {
    quad::Options tight;
    tight.rel_tol = 1e-13;
    const FunctionalGradient fg = functional_gradient(u, params, tight);
    const NormsGradient ng = norms_gradient(u, params, tight);

    const double scale = *std::max_element(u.values().begin(), u.values().end());
    if (!(scale > 0.0)) {
        // Zero profile: every partial vanishes.
        double worst = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i)
            worst = std::max({worst, std::abs(fg.grad[i]), std::abs(ng.grad_pow[i]), std::abs(ng.weight_pow[i])});
        return worst;
    }

    auto eval = [&](const std::vector<double>& v) {
        const RadialProfile p = u.with_values(v);
        return std::array<double, 3>{functional(p, params, tight).linear(), grad_norm_pow(p, params),
                                     weighted_lp_pow(p, params.n(), params.gamma, params, tight)};
    };
    std::array<std::vector<double>, 3> fd;
    for (auto& f : fd) f.assign(u.size() - 1, 0.0);
    std::vector<double> v(u.values().begin(), u.values().end());
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
        const double h = 1e-6 * std::max(v[i], 1e-3 * scale);
        const double orig = v[i];
        std::array<double, 3> d{};
        if (orig >= h) {
            v[i] = orig + h;
            const auto fp = eval(v);
            v[i] = orig - h;
            const auto fm = eval(v);
            for (int k = 0; k < 3; ++k) d[k] = (fp[k] - fm[k]) / (2.0 * h);
        } else {
            // Node at (or near) zero: second-order forward difference.
            v[i] = orig;
            const auto f0 = eval(v);
            v[i] = orig + h;
            const auto f1 = eval(v);
            v[i] = orig + 2.0 * h;
            const auto f2 = eval(v);
            for (int k = 0; k < 3; ++k) d[k] = (-3.0 * f0[k] + 4.0 * f1[k] - f2[k]) / (2.0 * h);
        }
        v[i] = orig;
        for (int k = 0; k < 3; ++k) fd[k][i] = d[k];
    }
    const std::array<const std::vector<double>*, 3> analytic{&fg.grad, &ng.grad_pow, &ng.weight_pow};
    double worst = 0.0;
    for (int k = 0; k < 3; ++k) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i + 1 < u.size(); ++i) {
            num = std::max(num, std::abs((*analytic[k])[i] - fd[k][i]));
            den = std::max(den, std::abs(fd[k][i]));
        }
        worst = std::max(worst, den > 0.0 ? num / den : num);
    }
    return worst;
}

nlohmann::json to_json(const OptimizerConfig& c) {
    return {{"grid", {{"nodes", c.grid.nodes}, {"r_min", c.grid.r_min}, {"r_max", c.grid.r_max}}},
            {"max_iterations", c.max_iterations},
            {"step",
             {{"initial_step", c.step.initial_step},
              {"backtrack", c.step.backtrack},
              {"armijo", c.step.armijo},
              {"growth", c.step.growth},
              {"step_floor", c.step.step_floor}}},
            {"tolerance", c.tolerance},
            {"moser_starts", c.moser_starts},
            {"broad_bump", c.broad_bump},
            {"random_starts", c.random_starts},
            {"seed", c.seed},
            {"quad_rel_tol", c.quad.rel_tol},
            {"quad_max_panels", c.quad.max_panels}};
}

nlohmann::json to_json(const MaximizationResult& r) {
    nlohmann::json residuals = nlohmann::json::object();
    for (const auto& [k, v] : r.residuals) residuals[k] = v;
    nlohmann::json starts = nlohmann::json::array();
    for (const auto& s : r.starts)
        starts.push_back({{"id", s.id},
                          {"initial_value", s.initial_value},
                          {"final_value", s.final_value},
                          {"iterations", s.iterations},
                          {"converged", s.converged},
                          {"stop_reason", s.stop_reason}});
    return {{"profile", profile_to_json(r.best)},
            {"value", r.value.saturated() ? nlohmann::json(nullptr) : nlohmann::json(r.value.linear())},
            {"log_value", r.value.log()},
            {"saturated", r.value.saturated()},
            {"quadrature_capped", r.value.quadrature_capped},
            {"residuals", residuals},
            {"trace", r.trace},
            {"start_id", r.start_id},
            {"converged", r.converged},
            {"iterations", r.iterations},
            {"diagnostics", {{"half_mass_radius", r.half_mass_radius}, {"tail_sensitivity", r.tail_sensitivity}}},
            {"starts", starts}};
}

}  // namespace wtm::opt
