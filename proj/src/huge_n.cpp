#include "pareto/huge_n.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pareto/errors.hpp"
#include "pareto/log_prob.hpp"

namespace pareto {

HugeN HugeN::exact(std::uint64_t n) {
    if (n < 1 || n > kMaxExact) {
        throw DomainError("exact n must lie in [1, 2^53], got " + std::to_string(n));
    }
    HugeN h;
    h.exact_ = n;
    h.log_ = std::log(static_cast<double>(n));
    return h;
}

HugeN HugeN::from_log10(double log10_n) {
    if (!(log10_n >= 0.0) || !std::isfinite(log10_n)) {
        throw DomainError("log10(n) must be finite and >= 0, got " + std::to_string(log10_n));
    }
    HugeN h;
    h.log_ = log10_n * std::numbers::ln10;
    return h;
}

HugeN HugeN::from_log(double log_n) {
    if (!(log_n >= 0.0) || !std::isfinite(log_n)) {
        throw DomainError("log(n) must be finite and >= 0, got " + std::to_string(log_n));
    }
    HugeN h;
    h.log_ = log_n;
    return h;
}

std::uint64_t HugeN::value() const {
    if (!is_exact()) throw DomainError("n is only known through log10(n)");
    return exact_;
}

double HugeN::log10() const noexcept { return log_ / std::numbers::ln10; }

double HugeN::log_minus(std::uint64_t m) const {
    if (is_exact()) {
        if (exact_ < m) throw DomainError("n - m is negative");
        return exact_ == m ? kNegInf : std::log(static_cast<double>(exact_ - m));
    }
    if (m == 0) return log_;
    // n - m = n (1 - m/n)
    const double log_ratio = std::log(static_cast<double>(m)) - log_;
    if (log_ > 0.0 && log_ratio < 0.0) return log_ + log1m_exp(log_ratio);
    if (log_ratio == 0.0) return kNegInf;
    throw DomainError("n - m is negative");
}

}  // namespace pareto
