#include "pareto/log_prob.hpp"

#include <algorithm>
#include <numbers>
#include <string>

#include "pareto/errors.hpp"

namespace pareto {

LogProb LogProb::from_log(double log_value) {
    if (std::isnan(log_value) || log_value > 1e-12) {
        throw DomainError("log-probability must be <= 0, got " + std::to_string(log_value));
    }
    LogProb r;
    r.log_ = std::min(log_value, 0.0);
    return r;
}

LogProb LogProb::from_prob(double p) {
    if (!(p >= 0.0 && p <= 1.0 + 1e-12)) {
        throw DomainError("probability must lie in [0,1], got " + std::to_string(p));
    }
    return from_log(p == 0.0 ? kNegInf : std::log(std::min(p, 1.0)));
}

double log_sum_exp(std::span<const double> terms) {
    std::vector<double> finite;
    finite.reserve(terms.size());
    for (double t : terms) {
        if (t != kNegInf) finite.push_back(t);
    }
    if (finite.empty()) return kNegInf;
    std::sort(finite.begin(), finite.end());
    const double top = finite.back();
    if (std::isinf(top)) return top;
    // Everything but the maximum contributes exp(t - top) < 1; log1p keeps the
    // result accurate when the maximum dominates.
    double rest = 0.0;
    for (std::size_t i = 0; i + 1 < finite.size(); ++i) rest += std::exp(finite[i] - top);
    return top + std::log1p(rest);
}

double log1m_exp(double x) noexcept {
    if (x == 0.0) return kNegInf;
    if (x > -std::numbers::ln2) return std::log(-std::expm1(x));
    return std::log1p(-std::exp(x));
}

double log_neg_log1m_exp(double log_x) noexcept {
    if (log_x == kNegInf) return kNegInf;
    if (log_x >= 0.0) return std::numeric_limits<double>::infinity();
    // -log(1-x) = x + x^2/2 + ...; two terms are exact in double below 1e-17.
    if (log_x < -39.1439465808987777) return log_x + 0.5 * std::exp(log_x);
    return std::log(-log1m_exp(log_x));
}

double log_pow1m(double log_count, double log_x) noexcept {
    if (log_count == kNegInf) return 0.0;
    const double l = log_neg_log1m_exp(log_x);
    if (l == kNegInf) return 0.0;
    return -std::exp(log_count + l);
}

double log_choose(double n, double r) noexcept {
    return std::lgamma(n + 1.0) - std::lgamma(r + 1.0) - std::lgamma(n - r + 1.0);
}

}  // namespace pareto
