#include "pareto/exact_bernoulli.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include <fmt/format.h>

#include "pareto/errors.hpp"

namespace pareto {
namespace {

void check_args(std::uint64_t k, double p) {
    if (k < 1) throw DomainError("k must be >= 1");
    if (!(p > 0.0 && p < 1.0)) throw DomainError(fmt::format("bernoulli p must lie in (0,1), got {}", p));
}

struct TwoSided {
    double log_p;
    double log_complement;  // log(1 - p)
};

/// Mixture sum_i w_i (1 - x_i)^count with sum_i w_i = 1, evaluated both directly
/// and through its complement sum_i w_i (1 - (1 - x_i)^count). The complement
/// route is used when it is the smaller of the two, which keeps log p accurate
/// when p is within rounding distance of one.
TwoSided mixture(std::span<const double> log_w, std::span<const double> log_x, double log_count) {
    std::vector<double> direct(log_w.size());
    std::vector<double> complement(log_w.size());
    for (std::size_t i = 0; i < log_w.size(); ++i) {
        const double e = log_pow1m(log_count, log_x[i]);
        direct[i] = log_w[i] + e;
        complement[i] = log_w[i] + log1m_exp(e);
    }
    const double log_c = log_sum_exp(complement);
    if (log_c < -std::numbers::ln2) return {log1m_exp(log_c), log_c};
    const double log_d = std::min(log_sum_exp(direct), 0.0);
    return {log_d, log1m_exp(log_d)};
}

std::vector<double> binomial_log_weights(std::uint64_t k, double p) {
    std::vector<double> w(k + 1);
    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    const double kk = static_cast<double>(k);
    for (std::uint64_t i = 0; i <= k; ++i) {
        const double ii = static_cast<double>(i);
        w[i] = log_choose(kk, ii) + ii * lp + (kk - ii) * lq;
    }
    return w;
}

TwoSided strong_two_sided(std::uint64_t k, const HugeN& n, double p) {
    const auto log_w = binomial_log_weights(k, p);
    std::vector<double> log_x(k + 1);
    const double lp = std::log(p);
    for (std::uint64_t i = 0; i <= k; ++i) log_x[i] = static_cast<double>(i) * lp;
    return mixture(log_w, log_x, n.log_minus(1));
}

BernoulliProbResult probability(BernoulliKind kind, double log_p) {
    BernoulliProbResult r;
    r.kind = kind;
    r.log_p = LogProb::from_log(log_p);
    r.value = r.log_p.prob();
    return r;
}

double log_add(double a, double b) {
    const std::array<double, 2> t{a, b};
    return log_sum_exp(t);
}

}  // namespace

std::string_view to_string(BernoulliKind k) noexcept {
    switch (k) {
        case BernoulliKind::strong: return "strong";
        case BernoulliKind::weak: return "weak";
        case BernoulliKind::pair: return "pair";
        case BernoulliKind::variance_raw: return "var";
    }
    return "unknown";
}

BernoulliProbResult p_bernoulli(std::uint64_t k, const HugeN& n, double p) {
    check_args(k, p);
    return probability(BernoulliKind::strong, strong_two_sided(k, n, p).log_p);
}

BernoulliProbResult p_bernoulli_fixed_k_asymptotic(std::uint64_t k, const HugeN& n, double p) {
    check_args(k, p);
    const double log_pk = static_cast<double>(k) * std::log(p);
    return probability(BernoulliKind::strong, log_pk + log_pow1m(n.log_minus(1), log_pk));
}

BernoulliProbResult q_bernoulli(std::uint64_t k, const HugeN& n, double p) {
    check_args(k, p);
    const auto log_w = binomial_log_weights(k, p);
    std::vector<double> log_x(k + 1);
    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    for (std::uint64_t i = 0; i <= k; ++i) {
        // x = p^i (1 - (1-p)^{k-i}); zero at i == k
        log_x[i] = static_cast<double>(i) * lp + log1m_exp(static_cast<double>(k - i) * lq);
    }
    return probability(BernoulliKind::weak, mixture(log_w, log_x, n.log_minus(1)).log_p);
}

BernoulliProbResult pair_prob(std::uint64_t k, const HugeN& n, double p) {
    check_args(k, p);
    const bool single_vector = n.is_exact() ? n.value() < 2 : n.log() < std::numbers::ln2 * (1.0 - 1e-15);
    if (k < 2 || single_vector) {
        BernoulliProbResult r;
        r.kind = BernoulliKind::pair;
        return r;
    }
    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    const double log_count = n.log_minus(2);
    const double log_k_fact = std::lgamma(static_cast<double>(k) + 1.0);
    auto lfact = [](std::uint64_t m) { return std::lgamma(static_cast<double>(m) + 1.0); };

    std::vector<double> terms;
    terms.reserve(k * k * k / 6 + 1);
    for (std::uint64_t b = 1; b < k; ++b) {
        for (std::uint64_t c = 1; b + c <= k; ++c) {
            const double bb = static_cast<double>(b);
            const double cc = static_cast<double>(c);
            // log(p^b + p^c - p^{b+c}) = log(p^b + p^c (1 - p^b))
            const double log_union = log_add(bb * lp, cc * lp + log1m_exp(bb * lp));
            for (std::uint64_t a = 0; a + b + c <= k; ++a) {
                const std::uint64_t d = k - a - b - c;
                const double aa = static_cast<double>(a);
                const double dd = static_cast<double>(d);
                const double log_weight = log_k_fact - lfact(a) - lfact(b) - lfact(c) - lfact(d) +
                                          2.0 * aa * lq + (bb + cc) * (lp + lq) + 2.0 * dd * lp;
                terms.push_back(log_weight + log_pow1m(log_count, dd * lp + log_union));
            }
        }
    }
    return probability(BernoulliKind::pair, std::min(log_sum_exp(terms), 0.0));
}

BernoulliProbResult variance_front_size(std::uint64_t k, std::uint64_t n, double p) {
    check_args(k, p);
    if (n < 1 || n > kMaxVarianceN) {
        throw DomainError(fmt::format("variance needs an exact n in [1, {}], got {}", kMaxVarianceN, n));
    }
    const HugeN hn = HugeN::exact(n);
    const TwoSided single = strong_two_sided(k, hn, p);
    const double prob = std::exp(single.log_p);
    const double one_minus = std::exp(single.log_complement);
    const double pair = pair_prob(k, hn, p).value;

    // pair - prob^2 with the square's rounding error recovered by fma
    const double sq = prob * prob;
    const double sq_err = std::fma(prob, prob, -sq);
    const double diff = (pair - sq) - sq_err;

    const double nd = static_cast<double>(n);
    BernoulliProbResult r;
    r.kind = BernoulliKind::variance_raw;
    r.value = nd * prob * one_minus + nd * (nd - 1.0) * diff;
    r.cancellation = n >= 2 && pair > 0.0 && std::fabs(diff) < 1e-8 * std::max(pair, sq);
    return r;
}

BruteForceResult brute_force_discrete(std::uint64_t k, std::uint64_t n, const DistributionSpec& d) {
    if (k < 1 || n < 1) throw DomainError("k and n must be >= 1");
    if (d.is_continuous()) throw DomainError("enumeration needs a Bernoulli or finite discrete law");
    const auto& values = d.support();
    const auto& masses = d.masses();
    const std::size_t m = values.size();
    const std::size_t cells = static_cast<std::size_t>(k * n);
    const double total = std::pow(static_cast<double>(m), static_cast<double>(cells));
    if (total > kMaxEnumerations) {
        throw ResourceError(fmt::format("enumeration of {:.3g} configurations exceeds cap", total));
    }

    std::vector<std::size_t> digit(cells, 0);
    std::vector<long double> size_pmf(n + 1, 0.0L);
    long double strong1 = 0.0L;
    long double weak1 = 0.0L;
    long double pair12 = 0.0L;
    std::vector<char> strong(n);

    auto at = [&](std::size_t i, std::size_t j) { return values[digit[i * k + j]]; };
    // dominated(i, j, strict): x_i <= x_j componentwise (and x_i != x_j when strict)
    auto dominated = [&](std::size_t i, std::size_t j, bool strict) {
        bool some_less = false;
        for (std::size_t c = 0; c < k; ++c) {
            const double a = at(i, c);
            const double b = at(j, c);
            if (a > b) return false;
            if (a < b) some_less = true;
        }
        return !strict || some_less;
    };

    const auto configs = static_cast<std::uint64_t>(total);
    for (std::uint64_t cfg = 0; cfg < configs; ++cfg) {
        long double weight = 1.0L;
        for (std::size_t c = 0; c < cells; ++c) weight *= masses[digit[c]];

        std::size_t front = 0;
        for (std::size_t i = 0; i < n; ++i) {
            bool is_max = true;
            for (std::size_t j = 0; j < n && is_max; ++j) {
                if (j != i && dominated(i, j, false)) is_max = false;
            }
            strong[i] = is_max;
            front += is_max ? 1 : 0;
        }
        bool weak_first = true;
        for (std::size_t j = 1; j < n && weak_first; ++j) {
            if (dominated(0, j, true)) weak_first = false;
        }
        size_pmf[front] += weight;
        if (strong[0]) strong1 += weight;
        if (weak_first) weak1 += weight;
        if (n >= 2 && strong[0] && strong[1]) pair12 += weight;

        for (std::size_t c = 0; c < cells; ++c) {
            if (++digit[c] < m) break;
            digit[c] = 0;
        }
    }

    BruteForceResult r;
    r.p_strong = static_cast<double>(strong1);
    r.q_weak = static_cast<double>(weak1);
    r.pair_strong = static_cast<double>(pair12);
    long double mean = 0.0L;
    for (std::size_t s = 0; s <= n; ++s) mean += static_cast<long double>(s) * size_pmf[s];
    long double var = 0.0L;
    for (std::size_t s = 0; s <= n; ++s) {
        const long double dev = static_cast<long double>(s) - mean;
        var += dev * dev * size_pmf[s];
    }
    r.mean_front = static_cast<double>(mean);
    r.var_front = static_cast<double>(var);
    r.front_size_pmf.reserve(n + 1);
    for (auto v : size_pmf) r.front_size_pmf.push_back(static_cast<double>(v));
    return r;
}

}  // namespace pareto
