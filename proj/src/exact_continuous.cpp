#include "pareto/exact_continuous.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "pareto/errors.hpp"

namespace pareto {
namespace {

void require_positive(std::uint64_t k, std::uint64_t n) {
    if (k < 1) throw DomainError("k must be >= 1");
    if (n < 1) throw DomainError("n must be >= 1");
}

ContinuousProbResult from_value(double value, ContinuousMethod method) {
    ContinuousProbResult r;
    r.value = value;
    r.method = method;
    r.log_p = value > 0.0 ? LogProb::from_log(std::log(value)) : LogProb::zero();
    return r;
}

}  // namespace

std::string_view to_string(ContinuousMethod m) noexcept {
    switch (m) {
        case ContinuousMethod::recurrence: return "recurrence";
        case ContinuousMethod::alternating_float: return "alternating_float";
        case ContinuousMethod::alternating_rational: return "alternating_rational";
        case ContinuousMethod::nested_oracle: return "nested_oracle";
        case ContinuousMethod::fixed_k_asymptotic: return "fixed_k_asymptotic";
        case ContinuousMethod::hwang: return "hwang";
    }
    return "unknown";
}

std::string_view to_string(HwangRegime r) noexcept {
    switch (r) {
        case HwangRegime::saddle: return "saddle";
        case HwangRegime::gaussian: return "gaussian";
        case HwangRegime::upper: return "upper";
    }
    return "unknown";
}

std::vector<ContinuousProbResult> p_recurrence_batch(std::span<const KNQuery> queries, std::uint64_t max_n) {
    std::uint64_t n_max = 1;
    std::uint64_t k_max = 1;
    for (const auto& q : queries) {
        require_positive(q.k, q.n);
        n_max = std::max(n_max, q.n);
        k_max = std::max(k_max, q.k);
    }
    if (n_max > max_n) {
        throw ResourceError(fmt::format("recurrence row of length {} exceeds cap {}", n_max, max_n));
    }

    std::vector<std::size_t> order(queries.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return queries[a].k < queries[b].k; });

    std::vector<ContinuousProbResult> out(queries.size());
    std::vector<double> row(n_max);
    for (std::uint64_t u = 1; u <= n_max; ++u) row[u - 1] = 1.0 / static_cast<double>(u);

    auto next = order.begin();
    for (std::uint64_t level = 1; level <= k_max && next != order.end(); ++level) {
        if (level > 1) {
            // row[u] <- (1/u) * sum_{v <= u} row[v], in place
            double prefix = 0.0;
            for (std::uint64_t u = 1; u <= n_max; ++u) {
                prefix += row[u - 1];
                row[u - 1] = prefix / static_cast<double>(u);
            }
        }
        for (; next != order.end() && queries[*next].k == level; ++next) {
            out[*next] = from_value(row[queries[*next].n - 1], ContinuousMethod::recurrence);
        }
    }
    return out;
}

ContinuousProbResult p_recurrence(std::uint64_t k, std::uint64_t n, std::uint64_t max_n) {
    const KNQuery q{k, n};
    return p_recurrence_batch(std::span<const KNQuery>(&q, 1), max_n).front();
}

mpq_class p_alternating_exact(std::uint64_t k, std::uint64_t n) {
    require_positive(k, n);
    if (n > kMaxRationalN) {
        throw ResourceError(fmt::format("exact alternating sum limited to n <= {}, got {}", kMaxRationalN, n));
    }
    mpq_class sum = 0;
    mpz_class binom = 1;  // C(n-1, u-1)
    for (std::uint64_t u = 1; u <= n; ++u) {
        mpz_class power;
        mpz_ui_pow_ui(power.get_mpz_t(), u, k);
        mpq_class term(binom, power);
        term.canonicalize();
        if (u % 2 == 1) {
            sum += term;
        } else {
            sum -= term;
        }
        binom = binom * (n - u) / u;
    }
    return sum;
}

double log_of(const mpq_class& q) {
    if (sgn(q) <= 0) return kNegInf;
    long num_exp = 0;
    long den_exp = 0;
    const double num = mpz_get_d_2exp(&num_exp, q.get_num_mpz_t());
    const double den = mpz_get_d_2exp(&den_exp, q.get_den_mpz_t());
    return std::log(num) - std::log(den) + static_cast<double>(num_exp - den_exp) * std::numbers::ln2;
}

ContinuousProbResult p_alternating(std::uint64_t k, std::uint64_t n, AlternatingMode mode) {
    require_positive(k, n);
    if (mode == AlternatingMode::exact_rational) {
        const mpq_class exact = p_alternating_exact(k, n);
        ContinuousProbResult r;
        r.method = ContinuousMethod::alternating_rational;
        r.log_p = LogProb::from_log(log_of(exact));
        r.value = exact.get_d();
        return r;
    }

    CompensatedSum sum;
    const double nm1 = static_cast<double>(n - 1);
    const double kk = static_cast<double>(k);
    for (std::uint64_t u = 1; u <= n; ++u) {
        const double ud = static_cast<double>(u);
        const double magnitude = std::exp(log_choose(nm1, ud - 1.0) - kk * std::log(ud));
        sum.add(u % 2 == 1 ? magnitude : -magnitude);
    }
    const double value = sum.value();
    ContinuousProbResult r;
    r.method = ContinuousMethod::alternating_float;
    r.value = value;
    r.cancellation_ulps = value > 0.0 ? sum.abs_sum() / value : std::numeric_limits<double>::infinity();
    r.unreliable = !(r.cancellation_ulps <= kUnreliableUlps) || value > 1.0;
    r.log_p = value > 0.0 ? LogProb::from_log(std::min(std::log(value), 0.0)) : LogProb::zero();
    return r;
}

ContinuousProbResult p_nested_oracle(std::uint64_t k, std::uint64_t n) {
    require_positive(k, n);
    const std::uint64_t depth = k - 1;
    // C(n + k - 2, k - 1), accumulated exactly until it passes the cap
    double tuples = 1.0;
    for (std::uint64_t i = 1; i <= depth && tuples <= kMaxOracleTuples; ++i) {
        tuples = tuples * static_cast<double>(n - 1 + i) / static_cast<double>(i);
    }
    if (tuples > kMaxOracleTuples) {
        throw ResourceError(fmt::format("nested enumeration over {:.3g} tuples exceeds cap", tuples));
    }

    CompensatedSum sum;
    std::function<void(std::uint64_t, std::uint64_t, double)> walk = [&](std::uint64_t level, std::uint64_t lo,
                                                                         double weight) {
        if (level == depth) {
            sum.add(weight);
            return;
        }
        for (std::uint64_t u = lo; u <= n; ++u) walk(level + 1, u, weight / static_cast<double>(u));
    };
    walk(0, 1, 1.0);
    return from_value(sum.value() / static_cast<double>(n), ContinuousMethod::nested_oracle);
}

ContinuousProbResult p_fixed_k_asymptotic(std::uint64_t k, const HugeN& n) {
    if (k < 1) throw DomainError("k must be >= 1");
    if (n.is_exact() ? n.value() < 2 : !(n.log() >= std::numbers::ln2)) {
        throw DomainError("fixed-k asymptotic needs n >= 2");
    }
    const double log_n = n.log();
    if (k == 1) {
        ContinuousProbResult r;
        r.method = ContinuousMethod::fixed_k_asymptotic;
        r.log_p = LogProb::from_log(-log_n);
        r.value = n.is_exact() ? 1.0 / static_cast<double>(n.value()) : std::exp(-log_n);
        return r;
    }
    const double kk = static_cast<double>(k);
    const double log_value = (kk - 1.0) * std::log(log_n) - log_n - std::lgamma(kk);
    ContinuousProbResult r;
    r.method = ContinuousMethod::fixed_k_asymptotic;
    r.log_p = LogProb::from_log(log_value);
    r.value = std::exp(log_value);
    return r;
}

ContinuousProbResult p_hwang(std::uint64_t k, const HugeN& n) {
    if (k < 1) throw DomainError("k must be >= 1");
    if (n.is_exact() ? n.value() < 3 : !(n.log() >= std::log(3.0))) {
        throw DomainError("three-regime approximation needs n >= 3");
    }
    const double log_n = n.log();
    const double kk = static_cast<double>(k);
    const double d = (kk - log_n) / std::sqrt(log_n);

    ContinuousProbResult r;
    r.method = ContinuousMethod::hwang;
    double log_value = 0.0;
    if (d <= -2.0) {
        // k <= log n - 2 sqrt(log n) keeps 1 - k/log n > 0, away from the pole.
        r.regime = HwangRegime::saddle;
        log_value = (kk - 1.0) * std::log(log_n) - log_n - std::lgamma(kk) + std::lgamma(1.0 - kk / log_n);
    } else if (d < 2.0) {
        r.regime = HwangRegime::gaussian;
        log_value = std::log(0.5 * std::erfc(-d / std::numbers::sqrt2));
    } else {
        r.regime = HwangRegime::upper;
    }
    // The approximation is not a probability bound; cap it at one.
    log_value = std::min(log_value, 0.0);
    r.log_p = LogProb::from_log(log_value);
    r.value = std::exp(log_value);
    return r;
}

}  // namespace pareto
