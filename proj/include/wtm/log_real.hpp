#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace wtm {

/// Non-negative real stored as its natural logarithm. Zero is -inf.
class LogReal {
public:
    /// Largest log that still converts to a finite double.
    static constexpr double kMaxLinearLog = 709.782712893384;

    constexpr LogReal() = default;
    explicit LogReal(double linear)
        : log_(linear > 0.0 ? std::log(linear) : -std::numeric_limits<double>::infinity()) {}

    static LogReal from_log(double log_value) {
        LogReal r;
        r.log_ = log_value;
        return r;
    }
    static LogReal zero() { return LogReal{}; }

    double log() const { return log_; }
    double value() const { return std::exp(log_); }
    bool is_zero() const { return std::isinf(log_) && log_ < 0.0; }
    /// True when value() would overflow.
    bool saturated() const { return log_ > kMaxLinearLog; }

    LogReal& operator+=(const LogReal& o) {
        if (o.is_zero()) return *this;
        if (is_zero()) {
            log_ = o.log_;
            return *this;
        }
        const double hi = std::max(log_, o.log_);
        const double lo = std::min(log_, o.log_);
        log_ = hi + std::log1p(std::exp(lo - hi));
        return *this;
    }
    LogReal& operator*=(const LogReal& o) {
        log_ += o.log_;
        return *this;
    }
    LogReal& operator/=(const LogReal& o) {
        log_ -= o.log_;
        return *this;
    }

    friend LogReal operator+(LogReal a, const LogReal& b) { return a += b; }
    friend LogReal operator*(LogReal a, const LogReal& b) { return a *= b; }
    friend LogReal operator/(LogReal a, const LogReal& b) { return a /= b; }
    friend bool operator<(const LogReal& a, const LogReal& b) { return a.log_ < b.log_; }
    friend bool operator>(const LogReal& a, const LogReal& b) { return b < a; }
    friend bool operator<=(const LogReal& a, const LogReal& b) { return !(b < a); }
    friend bool operator>=(const LogReal& a, const LogReal& b) { return !(a < b); }

private:
    double log_ = -std::numeric_limits<double>::infinity();
};

}  // namespace wtm
