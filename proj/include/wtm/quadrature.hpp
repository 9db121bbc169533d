#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace wtm::quad {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule computed by Newton iteration on P_n. Cached per n.
const GaussRule& gauss_legendre(int n);

struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    int max_panels = 4096;  // 2^12
};

template <std::size_t K>
struct Result {
    std::array<double, K> value{};
    std::array<double, K> error{};
    int panels = 0;
    bool capped = false;  // hit max_panels before meeting the tolerance
};

namespace detail {

inline constexpr int kOrder = 10;

template <std::size_t K, class F>
std::array<double, K> gauss_panel(const F& f, double a, double b) {
    static const GaussRule& rule = gauss_legendre(kOrder);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    std::array<double, K> acc{};
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const std::array<double, K> y = f(mid + half * rule.nodes[i]);
        for (std::size_t k = 0; k < K; ++k) acc[k] += rule.weights[i] * y[k];
    }
    for (auto& v : acc) v *= half;
    return acc;
}

template <std::size_t K>
struct Panel {
    double a, b;
    std::array<double, K> value;  // two-half estimate
    std::array<double, K> error;  // |halves - whole|
    std::array<double, K> left;
    std::array<double, K> right;
};

}  // namespace detail

/// Globally adaptive Gauss-Legendre quadrature of a vector-valued integrand on [a, b].
///
/// Each panel is estimated by a 10-point rule on the whole panel and on both halves; the
/// difference is the panel error. The panel with the largest relative error is bisected until
/// every component meets rel_tol (or abs_tol) or max_panels is reached.
template <std::size_t K, class F>
Result<K> integrate(const F& f, double a, double b, const Options& opt = {}) {
    using detail::Panel;
    Result<K> res;
    if (!(b > a)) return res;

    auto make_panel = [&](double lo, double hi, const std::array<double, K>* whole_known) {
        Panel<K> p{lo, hi, {}, {}, {}, {}};
        const double mid = 0.5 * (lo + hi);
        const auto whole = whole_known ? *whole_known : detail::gauss_panel<K>(f, lo, hi);
        p.left = detail::gauss_panel<K>(f, lo, mid);
        p.right = detail::gauss_panel<K>(f, mid, hi);
        for (std::size_t k = 0; k < K; ++k) {
            p.value[k] = p.left[k] + p.right[k];
            p.error[k] = std::abs(p.value[k] - whole[k]);
        }
        return p;
    };

    std::vector<Panel<K>> panels;
    panels.push_back(make_panel(a, b, nullptr));

    for (;;) {
        std::array<double, K> total{}, err{}, l1{};
        for (const auto& p : panels)
            for (std::size_t k = 0; k < K; ++k) {
                total[k] += p.value[k];
                err[k] += p.error[k];
                l1[k] += std::abs(p.value[k]);
            }
        bool done = true;
        for (std::size_t k = 0; k < K; ++k) {
            const double target = std::max({opt.rel_tol * std::abs(total[k]), opt.abs_tol, 1e-15 * l1[k]});
            if (err[k] > target) done = false;
        }
        res.value = total;
        res.error = err;
        res.panels = static_cast<int>(panels.size());
        if (done) break;
        if (static_cast<int>(panels.size()) >= opt.max_panels) {
            res.capped = true;
            break;
        }
        // Split the worst panel.
        std::size_t worst = 0;
        double worst_score = -1.0;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            double score = 0.0;
            for (std::size_t k = 0; k < K; ++k) {
                const double scale = std::max(std::abs(total[k]), 1e-300);
                score = std::max(score, panels[i].error[k] / scale);
            }
            if (score > worst_score) {
                worst_score = score;
                worst = i;
            }
        }
        const Panel<K> p = panels[worst];
        const double mid = 0.5 * (p.a + p.b);
        panels[worst] = make_panel(p.a, mid, &p.left);
        panels.push_back(make_panel(mid, p.b, &p.right));
    }
    return res;
}

/// Scalar convenience wrapper.
template <class F>
Result<1> integrate_scalar(const F& f, double a, double b, const Options& opt = {}) {
    return integrate<1>([&](double x) { return std::array<double, 1>{f(x)}; }, a, b, opt);
}

}  // namespace wtm::quad
