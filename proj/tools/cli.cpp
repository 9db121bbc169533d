#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "wtm/analysis.hpp"
#include "wtm/error.hpp"
#include "wtm/moser.hpp"
#include "wtm/optimizer.hpp"
#include "wtm/profile_json.hpp"
#include "wtm/sampling.hpp"
#include "wtm/table.hpp"
#include "wtm/transform.hpp"

#ifndef WTM_VERSION
#define WTM_VERSION "unknown"
#endif
#ifndef WTM_BUILD_TYPE
#define WTM_BUILD_TYPE "unknown"
#endif

namespace wtm::cli {

using nlohmann::json;

namespace {

constexpr std::uint64_t kDefaultSeed = 20240607;

json optimizer_defaults() {
    const opt::OptimizerConfig c;
    return {{"nodes", c.grid.nodes},
            {"r_min", c.grid.r_min},
            {"r_max", c.grid.r_max},
            {"max_iterations", c.max_iterations},
            {"initial_step", c.step.initial_step},
            {"backtrack", c.step.backtrack},
            {"armijo", c.step.armijo},
            {"growth", c.step.growth},
            {"step_floor", c.step.step_floor},
            {"tolerance", c.tolerance},
            {"moser_starts", c.moser_starts},
            {"broad_bump", c.broad_bump},
            {"random_starts", c.random_starts},
            {"quad_rel_tol", c.quad.rel_tol},
            {"quad_max_panels", c.quad.max_panels}};
}

// Run settings that never change results; kept out of the echoed config.
struct RunSettings {
    std::string output;
    int jobs = 1;
};

template <class T>
T get(const json& cfg, const std::string& key) {
    try {
        return cfg.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("config key '" + key + "': " + e.what());
    }
}

ProblemParams params_of(const json& cfg) {
    const int dim = get<int>(cfg, "dim");
    const double beta = get<double>(cfg, "beta");
    const double gamma = get<double>(cfg, "gamma");
    const ProblemParams crit = ProblemParams::critical(dim, beta, gamma);
    const bool has_alpha = !cfg.at("alpha").is_null();
    if (cfg.contains("alpha_ratio")) {
        const bool has_ratio = !cfg.at("alpha_ratio").is_null();
        if (has_alpha && has_ratio) throw ConfigError("set either 'alpha' or 'alpha_ratio', not both");
        if (has_ratio) return crit.with_alpha(get<double>(cfg, "alpha_ratio") * crit.alpha);
    }
    if (has_alpha) return crit.with_alpha(get<double>(cfg, "alpha"));
    return crit;
}

std::vector<double> alpha_list(const json& cfg, const ProblemParams& base) {
    const auto alphas = get<std::vector<double>>(cfg, "alphas");
    const auto ratios = get<std::vector<double>>(cfg, "alpha_ratios");
    if (!alphas.empty() && !ratios.empty()) throw ConfigError("set either 'alphas' or 'alpha_ratios', not both");
    if (!alphas.empty()) return alphas;
    std::vector<double> out;
    for (double r : ratios) out.push_back(r * critical_alpha_beta(base));
    return out;
}

opt::OptimizerConfig optimizer_of(const json& cfg, const RunSettings& run) {
    const json& o = cfg.at("optimizer");
    opt::OptimizerConfig c;
    c.grid.nodes = get<std::size_t>(o, "nodes");
    c.grid.r_min = get<double>(o, "r_min");
    c.grid.r_max = get<double>(o, "r_max");
    c.max_iterations = get<int>(o, "max_iterations");
    c.step.initial_step = get<double>(o, "initial_step");
    c.step.backtrack = get<double>(o, "backtrack");
    c.step.armijo = get<double>(o, "armijo");
    c.step.growth = get<double>(o, "growth");
    c.step.step_floor = get<double>(o, "step_floor");
    c.tolerance = get<double>(o, "tolerance");
    c.moser_starts = get<std::vector<int>>(o, "moser_starts");
    c.broad_bump = get<bool>(o, "broad_bump");
    c.random_starts = get<int>(o, "random_starts");
    c.quad.rel_tol = get<double>(o, "quad_rel_tol");
    c.quad.max_panels = get<int>(o, "quad_max_panels");
    c.seed = get<std::uint64_t>(cfg, "seed");
    c.jobs = run.jobs;
    c.validate();
    return c;
}

RadialProfile load_input_profile(const std::string& path) {
    if (path.empty()) throw ConfigError("config key 'profile' must name a profile JSON file");
    try {
        return load_profile(path);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

json params_json(const ProblemParams& p) {
    return {{"dim", p.dim},
            {"alpha", p.alpha},
            {"beta", p.beta},
            {"gamma", p.gamma},
            {"alpha_crit", critical_alpha_beta(p)}};
}

// Output of one command: a JSON document and, where it has rows, a table for CSV.
struct Output {
    json result;
    std::optional<io::Table> table;
};

json value_json(const FunctionalValue& v) {
    return {{"value", v.saturated() ? json(nullptr) : json(v.linear())},
            {"log_value", v.log()},
            {"saturated", v.saturated()},
            {"quadrature_capped", v.quadrature_capped}};
}

Output cmd_eval(const json& cfg, const RunSettings&) {
    const ProblemParams p = params_of(cfg);
    const RadialProfile u = load_input_profile(get<std::string>(cfg, "profile"));
    const NormReport nr = norms(u, p);
    const FunctionalValue fv = functional(u, p);
    Output o;
    o.result = {{"params", params_json(p)},
                {"norms",
                 {{"grad_pow", nr.grad_pow},
                  {"weight_pow", nr.weight_pow},
                  {"full_pow", nr.full_pow},
                  {"quadrature_capped", nr.quadrature_capped}}},
                {"functional", value_json(fv)}};
    io::Table t;
    t.comments = {"Norms (N-th powers) and functional J_alpha of the input profile"};
    t.columns = {"grad_pow", "weight_pow", "full_pow", "functional", "log_functional", "saturated"};
    t.add_row({nr.grad_pow, nr.weight_pow, nr.full_pow, fv.linear(), fv.log(),
               static_cast<std::int64_t>(fv.saturated())});
    o.table = std::move(t);
    return o;
}

Output cmd_optimize(const json& cfg, const RunSettings& run) {
    const ProblemParams p = params_of(cfg);
    const opt::OptimizerConfig oc = optimizer_of(cfg, run);
    const auto mode = get<std::string>(cfg, "mode");
    const auto formulation = get<std::string>(cfg, "formulation");
    if (formulation != "slice" && formulation != "ratio") throw ConfigError("formulation must be 'slice' or 'ratio'");
    opt::MaximizationResult r;
    if (mode == "B")
        r = opt::maximize_B(p, oc);
    else if (mode == "A")
        r = opt::maximize_A(p, oc, formulation == "slice" ? opt::AFormulation::Slice : opt::AFormulation::Ratio);
    else
        throw ConfigError("mode must be 'A' or 'B'");
    Output o;
    o.result = opt::to_json(r);
    o.result["params"] = params_json(p);
    io::Table t;
    t.comments = {"Best profile found by mode " + mode + " ascent (start " + r.start_id + ")",
                  "value=" + io::format_double(r.value.linear()) + " log_value=" + io::format_double(r.value.log()) +
                      " converged=" + std::to_string(r.converged) + " iterations=" + std::to_string(r.iterations),
                  "r = radius of the node; u = profile value (log-affine in r between nodes, constant below r_0)"};
    t.columns = {"r", "u"};
    for (std::size_t i = 0; i < r.best.size(); ++i) t.add_row({r.best.radii()[i], r.best.values()[i]});
    o.table = std::move(t);
    return o;
}

Output cmd_moser(const json& cfg, const RunSettings&) {
    const ProblemParams p = params_of(cfg);
    const int lo = get<int>(cfg, "n_min");
    const int hi = get<int>(cfg, "n_max");
    if (lo < 1 || hi < lo) throw PreconditionError("need 1 <= n_min <= n_max");
    io::Table t;
    t.comments = {"Weighted Moser sequence u_n and normalized v_n = lambda_n u_n",
                  "N=" + std::to_string(p.dim) + " alpha=" + io::format_double(p.alpha) +
                      " beta=" + io::format_double(p.beta) + " gamma=" + io::format_double(p.gamma),
                  "weight_pow = ||u_n||_{N,gamma}^N (closed form); limit = lim n*weight_pow",
                  "log_plateau_bound = log of the plateau part of J_alpha(v_n); log_functional = log J_alpha(v_n)"};
    t.columns = {"n", "grad_pow", "weight_pow", "n_weight_pow", "limit", "lambda", "log_plateau_bound",
                 "log_functional", "saturated"};
    const double limit = moser::weight_norm_limit(p);
    for (int n = lo; n <= hi; ++n) {
        const moser::MoserElement m = moser::build(n, p);
        const moser::MoserElement v = moser::normalized(n, p);
        const double w = moser::weight_norm_closed_form(n, p);
        const FunctionalValue fv = functional(v.profile, p);
        t.add_row({static_cast<std::int64_t>(n), grad_norm_pow(m.profile, p), w, n * w, limit, v.lambda,
                   moser::plateau_lower_bound(n, p).log(), fv.log(), static_cast<std::int64_t>(fv.saturated())});
    }
    Output o;
    o.result = io::to_json(t);
    o.table = std::move(t);
    return o;
}

Output cmd_relation(const json& cfg, const RunSettings& run) {
    const ProblemParams p = params_of(cfg);
    const opt::OptimizerConfig oc = optimizer_of(cfg, run);
    std::vector<double> grid = alpha_list(cfg, p);
    if (grid.empty()) grid = analysis::default_relation_grid(p, get<int>(cfg, "alpha_count"));
    const analysis::RelationScan scan = analysis::relation_scan(p, grid, oc);
    Output o;
    io::Table t = analysis::to_table(scan, p);
    o.result = {{"rows", io::to_json(t)["rows"]}, {"summary", analysis::summary_json(scan)}};
    o.table = std::move(t);
    return o;
}

Output cmd_asymptotic(const json& cfg, const RunSettings&) {
    const ProblemParams p = params_of(cfg);
    const moser::ScanTable rows = moser::asymptotic_lower_scan(p, alpha_list(cfg, p));
    Output o;
    io::Table t = moser::to_table(rows, p);
    o.result = io::to_json(t);
    o.table = std::move(t);
    return o;
}

RadialProfile default_orbit_profile() {
    const std::vector<double> grid = log_uniform_grid(64, 1e-4, 20.0);
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = std::exp(-grid[i] * grid[i]);
    v.back() = 0.0;
    return RadialProfile(grid, std::move(v));
}

Output cmd_orbit(const json& cfg, const RunSettings&) {
    const ProblemParams p = params_of(cfg);
    if (p.dim != 2 || p.gamma != p.beta) throw PreconditionError("orbit needs dim = 2 and gamma = beta");
    const auto path = get<std::string>(cfg, "profile");
    RadialProfile v = path.empty() ? default_orbit_profile() : load_input_profile(path);
    if (get<bool>(cfg, "normalize")) {
        if (v.is_zero()) throw DegenerateInputError("cannot normalize the zero profile");
        v = v.scaled(1.0 / std::sqrt(norms(v, p).full_pow));
    }
    const analysis::OrbitReport r = analysis::orbit_derivative(v, p);
    Output o;
    o.result = analysis::to_json(r);
    o.result["params"] = params_json(p);
    const int j_max = get<int>(cfg, "moments_j_max");
    if (j_max > 0) o.result["moments"] = io::to_json(analysis::to_table(analysis::moment_ratio_table(v, p.alpha, p, j_max), p.alpha, p));
    io::Table t;
    t.comments = {"Orbit derivative d/dtau J_alpha(w_tau) at tau = 1, term by term",
                  "series=" + io::format_double(r.series) + " fd=" + io::format_double(r.fd) +
                      " relative_error=" + io::format_double(r.relative_error) + " sign=" + std::to_string(r.sign) +
                      " saturated=" + std::to_string(r.saturated)};
    t.columns = {"j", "term"};
    for (std::size_t j = 0; j < r.contributions.size(); ++j)
        t.add_row({static_cast<std::int64_t>(j + 1), r.contributions[j]});
    o.table = std::move(t);
    return o;
}

Output cmd_transform_check(const json& cfg, const RunSettings&) {
    const ProblemParams p = params_of(cfg);
    const transform::TransformSpec spec(p);
    const ProblemParams tp = transform::transported_params(p);
    std::vector<RadialProfile> inputs;
    const auto path = get<std::string>(cfg, "profile");
    if (!path.empty()) {
        inputs.push_back(load_input_profile(path));
    } else {
        const int samples = get<int>(cfg, "samples");
        if (samples < 1) throw PreconditionError("samples must be >= 1");
        std::mt19937_64 rng(get<std::uint64_t>(cfg, "seed"));
        for (int i = 0; i < samples; ++i) inputs.push_back(random_profile(rng));
    }
    io::Table t;
    t.comments = {"Change of variables u -> v = c u(F(x)) onto the unweighted space",
                  "N=" + std::to_string(p.dim) + " alpha=" + io::format_double(p.alpha) +
                      " beta=" + io::format_double(p.beta) + " gamma=" + io::format_double(p.gamma) +
                      " transported alpha=" + io::format_double(tp.alpha) + " beta=" + io::format_double(tp.beta),
                  "grad_residual, weight_residual: relative mismatch of ||grad v||^N and ||v||_N^N vs u",
                  "residual: relative mismatch of the functional identity; roundtrip: max nodewise pull(push(u)) error"};
    t.columns = {"sample", "lhs", "rhs", "residual", "grad_residual", "weight_residual", "roundtrip"};
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const RadialProfile& u = inputs[i];
        const RadialProfile v = transform::push_profile(u, spec);
        const RadialProfile back = transform::pull_profile(v, spec);
        double roundtrip = 0.0;
        for (std::size_t k = 0; k < u.size(); ++k) {
            roundtrip = std::max(roundtrip, std::abs(back.radii()[k] / u.radii()[k] - 1.0));
            roundtrip = std::max(roundtrip, std::abs(back.values()[k] - u.values()[k]));
        }
        const NormReport nu = norms(u, p);
        const NormReport nv = norms(v, tp);
        const transform::IdentityCheck id = transform::verify_integral_identity(u, p);
        t.add_row({static_cast<std::int64_t>(i), id.lhs.value(), id.rhs.value(), id.residual,
                   std::abs(nv.grad_pow / nu.grad_pow - 1.0), std::abs(nv.weight_pow / nu.weight_pow - 1.0),
                   roundtrip});
    }
    Output o;
    o.result = io::to_json(t);
    o.table = std::move(t);
    return o;
}

using Handler = std::function<Output(const json&, const RunSettings&)>;

struct CommandInfo {
    const char* name;
    const char* help;
    Handler handler;
};

const std::vector<CommandInfo>& commands() {
    static const std::vector<CommandInfo> list = {
        {"eval", "Norms and functional value of a profile JSON file", cmd_eval},
        {"optimize", "Projected gradient ascent for the Li-Ruf (B) or Adachi-Tanaka (A) supremum", cmd_optimize},
        {"moser", "Weighted Moser sequence diagnostics over a range of n", cmd_moser},
        {"relation", "g(alpha) * A(alpha) against B at the critical exponent", cmd_relation},
        {"asymptotic", "Moser lower bracket of the Adachi-Tanaka supremum near the critical exponent", cmd_asymptotic},
        {"orbit", "Derivative along the dilation orbit (N = 2, gamma = beta)", cmd_orbit},
        {"transform-check", "Change-of-variables identities on sampled or given profiles", cmd_transform_check},
    };
    return list;
}

std::string render(const std::string& command, const json& cfg, const Output& o, const std::string& format) {
    std::ostringstream os;
    if (format == "json") {
        const json doc = {{"command", command}, {"version", WTM_VERSION}, {"config", cfg}, {"result", o.result}};
        os << doc.dump(2) << "\n";
    } else {
        if (!o.table) throw ConfigError("command '" + command + "' has no CSV form; use --format json");
        io::Table t = *o.table;
        t.comments.insert(t.comments.begin(), {"wtm " + std::string(WTM_VERSION) + " " + command, "config " + cfg.dump()});
        io::write_csv(os, t);
    }
    return os.str();
}

int default_jobs() {
    if (const char* env = std::getenv("WTM_JOBS")) {
        try {
            const int j = std::stoi(env);
            if (j >= 1) return j;
        } catch (const std::exception&) {
        }
    }
    return 1;
}

}  // namespace

json default_config(const std::string& command) {
    json c = {{"dim", 2}, {"beta", 0.0}, {"gamma", 0.0}, {"alpha", nullptr}, {"seed", kDefaultSeed}};
    if (command == "eval") {
        c["alpha_ratio"] = nullptr;
        c["profile"] = "";
        c["format"] = "json";
    } else if (command == "optimize") {
        c["alpha_ratio"] = nullptr;
        c["mode"] = "B";
        c["formulation"] = "slice";
        c["optimizer"] = optimizer_defaults();
        c["format"] = "json";
    } else if (command == "moser") {
        c["alpha_ratio"] = nullptr;
        c["n_min"] = 1;
        c["n_max"] = 20;
        c["format"] = "csv";
    } else if (command == "relation") {
        c["alphas"] = json::array();
        c["alpha_ratios"] = json::array();
        c["alpha_count"] = 16;
        c["optimizer"] = optimizer_defaults();
        c["format"] = "csv";
    } else if (command == "asymptotic") {
        c["alphas"] = json::array();
        c["alpha_ratios"] = {0.9, 0.99, 0.999};
        c["format"] = "csv";
    } else if (command == "orbit") {
        c["alpha_ratio"] = 0.01;
        c["profile"] = "";
        c["normalize"] = true;
        c["moments_j_max"] = 0;
        c["format"] = "json";
    } else if (command == "transform-check") {
        c["alpha_ratio"] = nullptr;
        c["profile"] = "";
        c["samples"] = 10;
        c["format"] = "csv";
    } else {
        throw ConfigError("unknown command '" + command + "'");
    }
    return c;
}

json merge_config(json base, const json& overrides, const std::string& where) {
    if (!overrides.is_object()) throw ConfigError("config" + where + " must be a JSON object");
    for (const auto& [key, value] : overrides.items()) {
        if (!base.contains(key)) throw ConfigError("unknown config key '" + where + key + "'");
        if (base[key].is_object())
            base[key] = merge_config(base[key], value, where + key + ".");
        else
            base[key] = value;
    }
    return base;
}

std::string version_string() {
    std::ostringstream os;
    os << "wtm " << WTM_VERSION << " (" << WTM_BUILD_TYPE << ", C++" << __cplusplus / 100 % 100 << ", ";
#if defined(__clang__)
    os << "clang " << __clang_major__ << "." << __clang_minor__;
#elif defined(__GNUC__)
    os << "gcc " << __GNUC__ << "." << __GNUC_MINOR__;
#else
    os << "unknown compiler";
#endif
    os << ")";
    return os.str();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Numerical experiments for weighted Trudinger-Moser suprema", "wtm"};
    app.require_subcommand(0, 1);
    bool show_version = false;
    app.add_flag("--version", show_version, "Print version and build metadata");

    struct Flags {
        std::string config_path, output, format, profile, mode, formulation;
        std::optional<int> dim, n_min, n_max, alpha_count, samples, moments_j_max, nodes, max_iterations,
            random_starts;
        std::optional<double> alpha, alpha_ratio, beta, gamma, tolerance;
        std::optional<std::uint64_t> seed;
        std::vector<double> alpha_ratios;
        int jobs = default_jobs();
    };
    std::map<std::string, Flags> flags;
    std::map<std::string, CLI::App*> subs;

    for (const auto& info : commands()) {
        const std::string name = info.name;
        Flags& f = flags[name];
        CLI::App* s = app.add_subcommand(name, info.help);
        subs[name] = s;
        const json d = default_config(name);
        s->add_option("--config", f.config_path, "JSON config file; flags override its keys");
        s->add_option("--output,-o", f.output, "Output file (default: stdout)");
        s->add_option("--format", f.format, "Output format: csv or json (default " + d["format"].get<std::string>() + ")")
            ->check(CLI::IsMember({"csv", "json"}));
        s->add_option("--jobs", f.jobs, "Worker threads (default: $WTM_JOBS or 1)")->check(CLI::PositiveNumber);
        s->add_option("--seed", f.seed, "Random seed (default " + std::to_string(kDefaultSeed) + ")");
        s->add_option("--dim", f.dim, "Dimension N >= 2 (default 2)");
        s->add_option("--beta", f.beta, "Singular weight exponent beta (default 0)");
        s->add_option("--gamma", f.gamma, "Norm weight exponent gamma <= beta (default 0)");
        if (d.contains("alpha")) s->add_option("--alpha", f.alpha, "Exponent coefficient alpha (default alpha_crit)");
        if (d.contains("alpha_ratio"))
            s->add_option("--alpha-ratio", f.alpha_ratio, "alpha as a multiple of alpha_crit");
        if (d.contains("alpha_ratios"))
            s->add_option("--alpha-ratios", f.alpha_ratios, "alpha grid as multiples of alpha_crit")->delimiter(',');
        if (d.contains("profile")) s->add_option("--profile", f.profile, "Profile JSON file {radii, values}");
        if (d.contains("mode")) s->add_option("--mode", f.mode, "A or B (default B)");
        if (d.contains("formulation"))
            s->add_option("--formulation", f.formulation, "A-mode constraint handling: slice or ratio (default slice)");
        if (d.contains("n_min")) s->add_option("--n-min", f.n_min, "First Moser index (default 1)");
        if (d.contains("n_max")) s->add_option("--n-max", f.n_max, "Last Moser index (default 20)");
        if (d.contains("alpha_count"))
            s->add_option("--alpha-count", f.alpha_count, "Grid k/(count+1) alpha_crit, k = 1..count (default 16)");
        if (d.contains("samples")) s->add_option("--samples", f.samples, "Random profiles to check (default 10)");
        if (d.contains("moments_j_max"))
            s->add_option("--moments-j-max", f.moments_j_max, "Also emit moment ratios up to this j (default off)");
        if (d.contains("optimizer")) {
            s->add_option("--nodes", f.nodes, "Optimizer grid nodes (default 129)");
            s->add_option("--max-iterations", f.max_iterations, "Iterations per start (default 400)");
            s->add_option("--random-starts", f.random_starts, "Seeded random starts (default 2)");
            s->add_option("--tolerance", f.tolerance, "Relative stationarity tolerance (default 1e-7)");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kIoError;
    }
    if (show_version) {
        out << version_string() << "\n";
        return kOk;
    }
    const auto chosen = app.get_subcommands();
    if (chosen.empty()) {
        out << app.help();
        return kOk;
    }
    const std::string name = chosen.front()->get_name();
    const Flags& f = flags[name];
    const Handler handler =
        std::find_if(commands().begin(), commands().end(), [&](const CommandInfo& c) { return c.name == name; })
            ->handler;

    try {
        json cfg = default_config(name);
        if (!f.config_path.empty()) {
            std::ifstream in(f.config_path);
            if (!in) throw ConfigError("cannot open config file '" + f.config_path + "'");
            json file;
            try {
                file = json::parse(in);
            } catch (const json::exception& e) {
                throw ConfigError("config file '" + f.config_path + "': " + e.what());
            }
            if (file.is_object() && file.contains("command")) {
                if (file["command"] != name) throw ConfigError("config file is for command " + file["command"].dump());
                file.erase("command");
            }
            cfg = merge_config(cfg, file);
        }
        auto set = [&](const char* key, const auto& opt) {
            if (opt) cfg[key] = *opt;
        };
        set("dim", f.dim);
        set("beta", f.beta);
        set("gamma", f.gamma);
        set("seed", f.seed);
        set("n_min", f.n_min);
        set("n_max", f.n_max);
        set("alpha_count", f.alpha_count);
        set("samples", f.samples);
        set("moments_j_max", f.moments_j_max);
        if (f.alpha) {
            cfg["alpha"] = *f.alpha;
            if (cfg.contains("alpha_ratio")) cfg["alpha_ratio"] = nullptr;
        }
        if (f.alpha_ratio) {
            cfg["alpha_ratio"] = *f.alpha_ratio;
            cfg["alpha"] = nullptr;
        }
        if (!f.alpha_ratios.empty()) {
            cfg["alpha_ratios"] = f.alpha_ratios;
            cfg["alphas"] = json::array();
        }
        if (!f.profile.empty()) cfg["profile"] = f.profile;
        if (!f.mode.empty()) cfg["mode"] = f.mode;
        if (!f.formulation.empty()) cfg["formulation"] = f.formulation;
        if (!f.format.empty()) cfg["format"] = f.format;
        if (cfg.contains("optimizer")) {
            json& o = cfg["optimizer"];
            if (f.nodes) o["nodes"] = *f.nodes;
            if (f.max_iterations) o["max_iterations"] = *f.max_iterations;
            if (f.random_starts) o["random_starts"] = *f.random_starts;
            if (f.tolerance) o["tolerance"] = *f.tolerance;
        }

        const auto format = get<std::string>(cfg, "format");
        if (format != "csv" && format != "json") throw ConfigError("format must be 'csv' or 'json'");
        const RunSettings run{f.output, f.jobs};
        const Output result = handler(cfg, run);
        const std::string text = render(name, cfg, result, format);
        if (f.output.empty()) {
            out << text;
        } else {
            std::ofstream file(f.output, std::ios::binary);
            if (!file) throw ConfigError("cannot open output file '" + f.output + "'");
            file << text;
            if (!file) throw ConfigError("failed writing '" + f.output + "'");
        }
        return kOk;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kIoError;
    } catch (const wtm::Error& e) {
        err << "error: " << e.what() << "\n";
        return kPrecondition;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternal;
    }
}

}  // namespace wtm::cli
