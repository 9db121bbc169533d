#include "wtm/profile.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "wtm/error.hpp"

namespace wtm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

double safe_log(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

// One log-affine piece, parametrized by t = log r.
struct Segment {
    double ta, tb, ua, ub;

    double width() const { return tb - ta; }
    double weight(double t) const { return (t - ta) / (tb - ta); }
    double value(double t) const {
        const double w = weight(t);
        return std::max(0.0, ua * (1.0 - w) + ub * w);
    }
};

Segment segment(const RadialProfile& u, std::size_t i) {
    const auto lr = u.log_radii();
    const auto v = u.values();
    return {lr[i], lr[i + 1], v[i], v[i + 1]};
}

// Largest finite value of log_f sampled on [ta, tb]; used to rescale before exponentiating.
template <class LogF>
double sample_shift(const LogF& log_f, const Segment& s) {
    constexpr int kSamples = 12;
    double best = kNegInf;
    for (int k = 0; k <= kSamples; ++k) {
        const double t = s.ta + s.width() * k / kSamples;
        const double l = log_f(t);
        if (l > best) best = l;
    }
    return best;
}

void require_weight(double delta, const ProblemParams& params) {
    if (!(delta < params.n()))
        throw DivergentWeightError("weight exponent " + std::to_string(delta) + " >= N is not integrable at 0");
}

// log Phi_N(s) and log Phi_N'(s) from a single series: Phi_N' = Phi_N + s^{N-2}/(N-2)!.
struct LogPhiPair {
    double phi, dphi;
};

LogPhiPair log_phi_pair(int dim, double s) {
    const double lp = log_phi(dim, s);
    if (s == 0.0) return {lp, dim == 2 ? 0.0 : kNegInf};
    const int k = dim - 2;
    const double lead = k * std::log(s) - std::lgamma(k + 1.0);
    return {lp, log_add(lp, lead)};
}

struct LogIntegral {
    double log_value = kNegInf;
    bool capped = false;
};

// log of omega * int_seg u(t)^p e^{c t} dt
LogIntegral segment_log_power(const Segment& s, double p, double c, const quad::Options& opt) {
    auto log_f = [&](double t) { return p * safe_log(s.value(t)) + c * t; };
    const double shift = sample_shift(log_f, s);
    if (shift == kNegInf) return {};
    auto r = quad::integrate_scalar([&](double t) { return std::exp(log_f(t) - shift); }, s.ta, s.tb, opt);
    return {shift + safe_log(r.value[0]), r.capped};
}

}  // namespace

// ---------------------------------------------------------------------------------------------
// RadialProfile

RadialProfile::RadialProfile(std::vector<double> radii, std::vector<double> values)
    : radii_(std::move(radii)), values_(std::move(values)) {
    if (radii_.empty()) throw ValidationError("profile needs at least one node");
    if (radii_.size() != values_.size()) throw ValidationError("radii and values differ in length");
    for (std::size_t i = 0; i < radii_.size(); ++i) {
        if (!std::isfinite(radii_[i]) || !(radii_[i] > 0.0))
            throw ValidationError("radius " + std::to_string(i) + " must be positive and finite");
        if (i > 0 && !(radii_[i] > radii_[i - 1]))
            throw ValidationError("radii must be strictly increasing (node " + std::to_string(i) + ")");
        if (!std::isfinite(values_[i]) || values_[i] < 0.0)
            throw ValidationError("value " + std::to_string(i) + " must be finite and >= 0");
    }
    if (values_.back() != 0.0) throw ValidationError("last node value must be 0");
    log_radii_.resize(radii_.size());
    std::transform(radii_.begin(), radii_.end(), log_radii_.begin(), [](double r) { return std::log(r); });
}

RadialProfile RadialProfile::zero() { return RadialProfile({1.0}, {0.0}); }

double RadialProfile::operator()(double r) const {
    if (r <= radii_.front()) return values_.front();
    if (r >= radii_.back()) return 0.0;
    const auto it = std::upper_bound(radii_.begin(), radii_.end(), r);
    const std::size_t i = static_cast<std::size_t>(it - radii_.begin()) - 1;
    const double w = (std::log(r) - log_radii_[i]) / (log_radii_[i + 1] - log_radii_[i]);
    return values_[i] * (1.0 - w) + values_[i + 1] * w;
}

bool RadialProfile::is_zero() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

RadialProfile RadialProfile::with_values(std::vector<double> values) const {
    return RadialProfile(radii_, std::move(values));
}

RadialProfile RadialProfile::scaled(double c) const {
    if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("amplitude factor must be finite and >= 0");
    std::vector<double> v(values_);
    for (auto& x : v) x *= c;
    return RadialProfile(radii_, std::move(v));
}

// ---------------------------------------------------------------------------------------------
// Norms

double grad_norm_pow(const RadialProfile& u, const ProblemParams& params) {
    const double n = params.n();
    double sum = 0.0;
    for (std::size_t i = 0; i < u.segment_count(); ++i) {
        const Segment s = segment(u, i);
        const double slope = (s.ub - s.ua) / s.width();
        sum += std::pow(std::abs(slope), n) * s.width();
    }
    return sphere_area(params.dim) * sum;
}

double log_weighted_lp_pow(const RadialProfile& u, double p, double delta, const ProblemParams& params,
                           const quad::Options& opt) {
    if (!(p >= 1.0)) throw DomainError("weighted L^p needs p >= 1");
    require_weight(delta, params);
    const double c = params.n() - delta;
    // Plateau: u_0^p r_0^{N-delta} / (N - delta)
    double total = p * safe_log(u.values()[0]) + c * u.log_radii()[0] - std::log(c);
    for (std::size_t i = 0; i < u.segment_count(); ++i) {
        const LogIntegral seg = segment_log_power(segment(u, i), p, c, opt);
        total = log_add(total, seg.log_value);
    }
    return total + std::log(sphere_area(params.dim));
}

double weighted_lp_pow(const RadialProfile& u, double p, double delta, const ProblemParams& params,
                       const quad::Options& opt) {
    return std::exp(log_weighted_lp_pow(u, p, delta, params, opt));
}

NormReport norms(const RadialProfile& u, const ProblemParams& params, const quad::Options& opt) {
    NormReport r;
    r.grad_pow = grad_norm_pow(u, params);
    const double c = params.n() - params.gamma;
    double total = params.n() * safe_log(u.values()[0]) + c * u.log_radii()[0] - std::log(c);
    for (std::size_t i = 0; i < u.segment_count(); ++i) {
        const LogIntegral seg = segment_log_power(segment(u, i), params.n(), c, opt);
        total = log_add(total, seg.log_value);
        r.quadrature_capped = r.quadrature_capped || seg.capped;
    }
    r.weight_pow = sphere_area(params.dim) * std::exp(total);
    r.full_pow = r.grad_pow + r.weight_pow;
    return r;
}

// ---------------------------------------------------------------------------------------------
// Functional

FunctionalValue functional(const RadialProfile& u, const ProblemParams& params, const quad::Options& opt) {
    const int dim = params.dim;
    const double q = params.conjugate_exponent();
    const double c = params.n() - params.beta;
    FunctionalValue out;

    double total = log_phi(dim, params.alpha * std::pow(u.values()[0], q)) + c * u.log_radii()[0] - std::log(c);
    for (std::size_t i = 0; i < u.segment_count(); ++i) {
        const Segment s = segment(u, i);
        auto log_f = [&](double t) {
            const double x = s.value(t);
            return x > 0.0 ? log_phi(dim, params.alpha * std::pow(x, q)) + c * t : kNegInf;
        };
        const double shift = sample_shift(log_f, s);
        if (shift == kNegInf) continue;
        auto r = quad::integrate_scalar([&](double t) { return std::exp(log_f(t) - shift); }, s.ta, s.tb, opt);
        total = log_add(total, shift + safe_log(r.value[0]));
        out.quadrature_capped = out.quadrature_capped || r.capped;
    }
    out.value = LogReal::from_log(total + std::log(sphere_area(dim)));
    return out;
}

FunctionalGradient functional_gradient(const RadialProfile& u, const ProblemParams& params,
                                       const quad::Options& opt) {
    const int dim = params.dim;
    const double q = params.conjugate_exponent();
    const double c = params.n() - params.beta;
    const double alpha = params.alpha;
    const double log_omega = std::log(sphere_area(dim));
    // d/du Phi(alpha u^q) = Phi'(alpha u^q) alpha q u^{q-1}
    const double log_aq = std::log(alpha * q);

    FunctionalGradient out;
    out.grad.assign(u.size(), 0.0);
    std::vector<double> log_grad(u.size(), kNegInf);

    const double u0 = u.values()[0];
    const LogPhiPair p0 = log_phi_pair(dim, alpha * std::pow(u0, q));
    const double plateau_scale = c * u.log_radii()[0] - std::log(c);
    double total = p0.phi + plateau_scale;
    if (u0 > 0.0) log_grad[0] = p0.dphi + log_aq + (q - 1.0) * std::log(u0) + plateau_scale;

    for (std::size_t i = 0; i < u.segment_count(); ++i) {
        const Segment s = segment(u, i);
        auto log_f = [&](double t) {
            const double x = s.value(t);
            return x > 0.0 ? log_phi(dim, alpha * std::pow(x, q)) + c * t : kNegInf;
        };
        const double shift = sample_shift(log_f, s);
        if (shift == kNegInf) continue;
        auto integrand = [&](double t) -> std::array<double, 3> {
            const double x = s.value(t);
            if (x <= 0.0) return {0.0, 0.0, 0.0};
            const LogPhiPair lp = log_phi_pair(dim, alpha * std::pow(x, q));
            const double base = c * t - shift;
            const double d = std::exp(lp.dphi + log_aq + (q - 1.0) * std::log(x) + base);
            const double w = s.weight(t);
            return {std::exp(lp.phi + base), d * (1.0 - w), d * w};
        };
        const auto r = quad::integrate<3>(integrand, s.ta, s.tb, opt);
        total = log_add(total, shift + safe_log(r.value[0]));
        log_grad[i] = log_add(log_grad[i], shift + safe_log(r.value[1]));
        log_grad[i + 1] = log_add(log_grad[i + 1], shift + safe_log(r.value[2]));
        out.value.quadrature_capped = out.value.quadrature_capped || r.capped;
    }
    out.value.value = LogReal::from_log(total + log_omega);
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double l = log_grad[i] + log_omega;
        out.grad[i] = std::exp(l);
        if (l > LogReal::kMaxLinearLog) out.saturated = true;
    }
    return out;
}

NormsGradient norms_gradient(const RadialProfile& u, const ProblemParams& params, const quad::Options& opt) {
    const double n = params.n();
    const double omega = sphere_area(params.dim);
    const double c = n - params.gamma;
    NormsGradient g;
    g.grad_pow.assign(u.size(), 0.0);
    g.weight_pow.assign(u.size(), 0.0);

    const double u0 = u.values()[0];
    if (u0 > 0.0)
        g.weight_pow[0] = omega * n * std::exp((n - 1.0) * std::log(u0) + c * u.log_radii()[0] - std::log(c));

    for (std::size_t i = 0; i < u.segment_count(); ++i) {
        const Segment s = segment(u, i);
        const double slope = (s.ub - s.ua) / s.width();
        const double dslope = omega * n * std::pow(std::abs(slope), n - 1.0) * (slope < 0.0 ? -1.0 : 1.0);
        g.grad_pow[i] -= dslope;
        g.grad_pow[i + 1] += dslope;

        auto log_f = [&](double t) { return (n - 1.0) * safe_log(s.value(t)) + c * t; };
        const double shift = sample_shift(log_f, s);
        if (shift == kNegInf) continue;
        auto integrand = [&](double t) -> std::array<double, 2> {
            const double f = std::exp(log_f(t) - shift);
            const double w = s.weight(t);
            return {f * (1.0 - w), f * w};
        };
        const auto r = quad::integrate<2>(integrand, s.ta, s.tb, opt);
        const double scale = omega * n * std::exp(shift);
        g.weight_pow[i] += scale * r.value[0];
        g.weight_pow[i + 1] += scale * r.value[1];
    }
    return g;
}

// ---------------------------------------------------------------------------------------------
// Scaling

RadialProfile dilate(const RadialProfile& u, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("dilation factor must be positive and finite");
    if (lambda == 1.0) return u;
    std::vector<double> r(u.radii().begin(), u.radii().end());
    for (auto& x : r) x /= lambda;
    return RadialProfile(std::move(r), std::vector<double>(u.values().begin(), u.values().end()));
}

RadialProfile at_normalize(const RadialProfile& u, const ProblemParams& params, const quad::Options& opt) {
    if (u.is_zero()) throw DegenerateInputError("cannot normalize the zero profile");
    const double w = weighted_lp_pow(u, params.n(), params.gamma, params, opt);
    return dilate(u, std::pow(w, 1.0 / (params.n() - params.gamma)));
}

double half_mass_radius(const RadialProfile& u, const ProblemParams& params) {
    if (u.is_zero()) return 0.0;
    const double c = params.n() - params.gamma;
    const double n = params.n();
    // Cumulative mass at each node; segments integrated by quadrature.
    std::vector<double> cumulative(u.size(), 0.0);
    cumulative[0] = std::exp(n * safe_log(u.values()[0]) + c * u.log_radii()[0] - std::log(c));
    for (std::size_t i = 0; i < u.segment_count(); ++i) {
        const LogIntegral seg = segment_log_power(segment(u, i), n, c, {});
        cumulative[i + 1] = cumulative[i] + std::exp(seg.log_value);
    }
    const double half = 0.5 * cumulative.back();
    const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), half);
    const std::size_t k = static_cast<std::size_t>(it - cumulative.begin());
    if (k == 0) return u.radii()[0];
    // Bisect in t on the partial integral over the bracketing segment.
    const Segment seg = segment(u, k - 1);
    const double target = half - cumulative[k - 1];
    double lo = seg.ta, hi = seg.tb;
    for (int it_count = 0; it_count < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it_count) {
        const double mid = 0.5 * (lo + hi);
        const Segment part{seg.ta, mid, seg.ua, seg.value(mid)};
        if (std::exp(segment_log_power(part, n, c, {}).log_value) < target)
            lo = mid;
        else
            hi = mid;
    }
    return std::exp(0.5 * (lo + hi));
}

std::vector<double> log_uniform_grid(std::size_t count, double r_min, double r_max) {
    if (count < 2) throw ValidationError("grid needs at least two nodes");
    if (!(r_min > 0.0) || !(r_max > r_min)) throw ValidationError("grid needs 0 < r_min < r_max");
    std::vector<double> r(count);
    const double a = std::log(r_min), b = std::log(r_max);
    for (std::size_t i = 0; i < count; ++i) r[i] = std::exp(a + (b - a) * static_cast<double>(i) / (count - 1));
    r.front() = r_min;
    r.back() = r_max;
    return r;
}

}  // namespace wtm
