#include "wtm/special.hpp"

#include <cmath>
#include <limits>

#include "wtm/error.hpp"

namespace wtm::special {

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxIter = 100000;

double series_p(double a, double x) {
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int n = 0; n < kMaxIter; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double continued_fraction_q(double a, double x) {
    constexpr double tiny = std::numeric_limits<double>::min() / kEps;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_p(double a, double x) {
    if (!(a > 0.0)) throw DomainError("incomplete gamma needs shape a > 0");
    if (!(x >= 0.0)) throw DomainError("incomplete gamma needs x >= 0");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return series_p(a, x);
    return 1.0 - continued_fraction_q(a, x);
}

double lower_incomplete_gamma(double a, double x) {
    if (!(a > 0.0)) throw DomainError("incomplete gamma needs shape a > 0");
    if (!(x >= 0.0)) throw DomainError("incomplete gamma needs x >= 0");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) {
        // Avoid the round trip through Gamma(a) when P is tiny.
        double ap = a;
        double del = 1.0 / a;
        double sum = del;
        for (int n = 0; n < kMaxIter; ++n) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * kEps) break;
        }
        return sum * std::exp(-x + a * std::log(x));
    }
    return std::tgamma(a) * (1.0 - continued_fraction_q(a, x));
}

}  // namespace wtm::special
