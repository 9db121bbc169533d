#pragma once

namespace wtm::special {

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
/// Series below x = a + 1, Lentz continued fraction for Q above; tolerance 1e-15 per term.
double gamma_p(double a, double x);

/// Unregularized lower incomplete gamma  gamma(a, x) = int_0^x s^{a-1} e^{-s} ds.
double lower_incomplete_gamma(double a, double x);

}  // namespace wtm::special
