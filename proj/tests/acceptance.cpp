// Acceptance gate: every criterion at its stated tolerance, one PASS/FAIL line each.
// Exit status is nonzero when any criterion fails or exceeds its time budget.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "helpers.hpp"
#include "wtm/analysis.hpp"
#include "wtm/moser.hpp"
#include "wtm/optimizer.hpp"
#include "wtm/profile_json.hpp"
#include "wtm/sampling.hpp"
#include "wtm/transform.hpp"

using namespace wtm;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

const std::vector<ProblemParams> kMatrix = testing::parameter_matrix();

Outcome moser_gradient() {
    double worst = 0.0;
    for (const auto& p : kMatrix)
        for (int n : {1, 10, 100}) worst = std::max(worst, std::abs(grad_norm_pow(moser::build(n, p).profile, p) - 1.0));
    return {worst < 1e-12, "max |grad_pow - 1| = " + sci(worst)};
}

Outcome moser_weight() {
    double worst_limit = 0.0, worst_cf = 0.0;
    for (const auto& p : kMatrix) {
        const double limit = (p.n() - p.beta) * std::tgamma(p.n() + 1.0) / std::pow(p.n() - p.gamma, p.n() + 1.0);
        worst_limit = std::max(worst_limit, std::abs(200.0 * moser::weight_norm_closed_form(200, p) / limit - 1.0));
        for (int n : {1, 10, 100, 200}) {
            const double cf = moser::weight_norm_closed_form(n, p);
            const double q = weighted_lp_pow(moser::build(n, p).profile, p.n(), p.gamma, p);
            worst_cf = std::max(worst_cf, std::abs(q / cf - 1.0));
        }
    }
    return {worst_limit < 0.05 && worst_cf < 1e-8,
            "max |n W_n / limit - 1| at n=200 = " + sci(worst_limit) + ", closed form vs quadrature = " + sci(worst_cf)};
}

Outcome transform_identities() {
    std::mt19937_64 rng(3003);
    double grad = 0.0, weight = 0.0, identity = 0.0, roundtrip = 0.0;
    for (const auto& p : kMatrix) {
        const transform::TransformSpec spec(p);
        const ProblemParams tp = transform::transported_params(p);
        for (int i = 0; i < 50; ++i) {
            const RadialProfile u = random_profile(rng);
            const RadialProfile v = transform::push_profile(u, spec);
            const NormReport nu = norms(u, p), nv = norms(v, tp);
            grad = std::max(grad, std::abs(nv.grad_pow / nu.grad_pow - 1.0));
            weight = std::max(weight, std::abs(nv.weight_pow / nu.weight_pow - 1.0));
            identity = std::max(identity, transform::verify_integral_identity(u, p).residual);
            const RadialProfile back = transform::pull_profile(v, spec);
            for (std::size_t k = 0; k < u.size(); ++k) {
                roundtrip = std::max(roundtrip, std::abs(back.radii()[k] / u.radii()[k] - 1.0));
                roundtrip = std::max(roundtrip, std::abs(back.values()[k] - u.values()[k]));
            }
        }
    }
    return {grad < 1e-7 && weight < 1e-7 && identity < 1e-7 && roundtrip < 1e-14,
            "grad " + sci(grad) + ", weight " + sci(weight) + ", identity " + sci(identity) + ", roundtrip " +
                sci(roundtrip)};
}

Outcome divergence_witness() {
    int violations = 0;
    double min_step = std::numeric_limits<double>::infinity();
    for (const auto& cell : kMatrix) {
        const ProblemParams p = cell.with_alpha(1.05 * cell.alpha);
        double prev = moser::plateau_lower_bound(50, p).log();
        for (int n = 51; n <= 200; ++n) {
            const double cur = moser::plateau_lower_bound(n, p).log();
            if (!(cur > prev)) ++violations;
            min_step = std::min(min_step, cur - prev);
            prev = cur;
        }
    }
    return {violations == 0, std::to_string(violations) + " non-increasing steps; min log increment " + sci(min_step)};
}

Outcome critical_boundedness() {
    bool ok = true;
    std::string detail;
    for (const auto& p : kMatrix) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (int n = 1; n <= 500; ++n) {
            const FunctionalValue fv = functional(moser::normalized(n, p).profile, p);
            if (fv.saturated() || !std::isfinite(fv.linear()) || !(fv.linear() > 0.0)) ok = false;
            lo = std::min(lo, fv.linear());
            hi = std::max(hi, fv.linear());
        }
        if (!std::isfinite(hi / lo)) ok = false;
        detail += (detail.empty() ? "" : "; ") + std::string("N=") + std::to_string(p.dim) + " [" + sci(lo) + ", " + sci(hi) + "]";
    }
    return {ok, detail};
}

Outcome gradient_correctness() {
    std::mt19937_64 rng(6006);
    double worst = 0.0;
    for (const auto& p : kMatrix)
        for (int i = 0; i < 50; ++i) worst = std::max(worst, opt::gradient_check(p, random_profile(rng)));
    return {worst < 1e-5, "worst relative error " + sci(worst) + " over 300 profiles"};
}

Outcome scaling() {
    std::mt19937_64 rng(7007);
    double norm_excess = -1.0, residual = 0.0;
    for (const auto& cell : kMatrix)
        for (double ratio : {0.25, 0.5, 0.9}) {
            const ProblemParams p = cell.with_alpha(ratio * cell.alpha);
            for (int i = 0; i < 50; ++i) {
                const analysis::ScalingTransport r = analysis::scaling_transport(testing::random_at_feasible(rng, p), p);
                norm_excess = std::max(norm_excess, std::pow(r.full_norm_pow, 1.0 / p.n()) - 1.0);
                residual = std::max(residual, r.residual);
            }
        }
    return {norm_excess <= 1e-10 && residual < 1e-7,
            "max ||v||_X - 1 = " + sci(norm_excess) + ", max identity residual " + sci(residual)};
}

Outcome relation() {
    bool ok = true;
    std::string detail;
    for (const ProblemParams& base : {ProblemParams::critical(2, 0.0, 0.0), ProblemParams::critical(3, 1.0, 0.5)}) {
        const opt::OptimizerConfig config;
        const analysis::RelationScan scan =
            analysis::relation_scan(base, analysis::default_relation_grid(base, 16), config);
        if (!(scan.min_margin >= -1e-6)) ok = false;
        detail += (detail.empty() ? "" : "; ") + std::string("N=") + std::to_string(base.dim) +
                  " B=" + sci(scan.b_estimate) + " sup gA=" + sci(scan.sup_product) +
                  " min(B-gA)=" + sci(scan.min_margin) + " gap=" + sci(scan.gap) +
                  (scan.gap < 0.15 ? " (gap within 0.15)" : " (gap above soft 0.15)");
    }
    return {ok, detail};
}

Outcome asymptotic_bracket() {
    bool ok = true;
    double worst_spread = 0.0;
    for (const auto& cell : kMatrix) {
        std::vector<double> grid;
        for (double r : {0.9, 0.99, 0.999}) grid.push_back(r * cell.alpha);
        const moser::ScanTable rows = moser::asymptotic_lower_scan(cell, grid);
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (const auto& row : rows) {
            if (!(row.product > 0.0) || !std::isfinite(row.product)) ok = false;
            lo = std::min(lo, row.product);
            hi = std::max(hi, row.product);
        }
        worst_spread = std::max(worst_spread, hi / lo);
    }
    ok = ok && worst_spread <= 10.0;
    return {ok, "largest max/min product ratio per cell " + sci(worst_spread)};
}

Outcome orbit() {
    std::mt19937_64 rng(1010);
    double worst = 0.0;
    int nonnegative = 0, saturated = 0;
    for (double beta : {0.0, 0.5, 1.0}) {
        const ProblemParams cell = ProblemParams::critical(2, beta, beta);
        for (int i = 0; i < 20; ++i) {
            const RadialProfile v = testing::random_unit_sphere(rng, cell);
            for (double ratio : {0.01, 0.5}) {
                const analysis::OrbitReport r = analysis::orbit_derivative(v, cell.with_alpha(ratio * cell.alpha));
                worst = std::max(worst, r.relative_error);
                if (r.saturated) ++saturated;
                if (ratio == 0.01 && r.sign >= 0) ++nonnegative;
            }
        }
    }
    return {worst < 1e-4 && nonnegative == 0 && saturated == 0,
            "series vs FD worst " + sci(worst) + "; nonnegative at 0.01 alpha_crit: " + std::to_string(nonnegative) +
                " of 60; saturated: " + std::to_string(saturated)};
}

Outcome determinism() {
    namespace fs = std::filesystem;
    const fs::path profile = fs::temp_directory_path() / "wtm_acceptance_profile.json";
    save_profile(profile, moser::build(10, ProblemParams::critical(2, 0.0, 0.0)).profile);
    const fs::path cfg = fs::temp_directory_path() / "wtm_acceptance_optimizer.json";
    {
        std::ofstream(cfg) << R"({"optimizer": {"nodes": 49, "max_iterations": 40, "random_starts": 2}})";
    }
    const std::vector<std::vector<std::string>> commands = {
        {"eval", "--profile", profile.string()},
        {"moser", "--n-max", "30", "--dim", "3", "--beta", "1", "--gamma", "0.5"},
        {"asymptotic", "--dim", "4", "--beta", "2", "--gamma", "1"},
        {"transform-check", "--samples", "5", "--seed", "77", "--dim", "3", "--beta", "1", "--gamma", "0.5"},
        {"orbit", "--beta", "0.5", "--gamma", "0.5", "--moments-j-max", "20"},
        {"optimize", "--config", cfg.string(), "--mode", "A", "--alpha-ratio", "0.5", "--seed", "11"},
        {"optimize", "--config", cfg.string(), "--mode", "B", "--seed", "11", "--format", "csv"},
        {"relation", "--config", cfg.string(), "--alpha-count", "2", "--seed", "11"},
    };
    int differing = 0;
    for (const auto& args : commands) {
        std::string first;
        for (const char* jobs : {"1", "1", "2"}) {
            std::vector<std::string> full{"wtm"};
            full.insert(full.end(), args.begin(), args.end());
            full.push_back("--jobs");
            full.push_back(jobs);
            std::vector<const char*> argv;
            for (const auto& a : full) argv.push_back(a.c_str());
            std::ostringstream out, err;
            const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
            const std::string text = std::to_string(code) + "\n" + out.str();
            if (first.empty())
                first = text;
            else if (text != first)
                ++differing;
        }
    }
    fs::remove(profile);
    fs::remove(cfg);
    return {differing == 0, std::to_string(commands.size()) + " commands x 3 runs (jobs 1, 1, 2); " +
                                std::to_string(differing) + " differing outputs"};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "Moser gradient normalization", 1.0, moser_gradient},
        {2, "Moser weight-norm asymptotics", 5.0, moser_weight},
        {3, "transformation identities", 30.0, transform_identities},
        {4, "supercritical divergence witness", 2.0, divergence_witness},
        {5, "critical boundedness consistency", 5.0, critical_boundedness},
        {6, "gradient correctness", 60.0, gradient_correctness},
        {7, "scaling transport", 30.0, scaling},
        {8, "relation one-sided check", 600.0, relation},
        {9, "asymptotic bracket", 10.0, asymptotic_bracket},
        {10, "orbit derivative", 60.0, orbit},
        {11, "determinism", 120.0, determinism},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs < c.budget_s;
        const bool pass = o.pass && in_time;
        if (!pass) ++failures;
        std::printf("%s criterion %2d (%s): %s [%.2f s of %.0f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.name,
                    o.detail.c_str(), secs, c.budget_s, in_time ? "" : ", over budget");
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
