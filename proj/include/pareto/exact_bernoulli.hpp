#pragma once

// Exact maximum probabilities for Bernoulli(p) coordinates.
//
// All sums run over the number i of ones in the first vector (or over the
// four-way composition (a,b,c,d) of coordinate patterns for a pair of
// vectors) and are evaluated term by term in log space, so n may be as large
// as 10^300 when passed as log10(n).

#include <cstdint>
#include <string_view>

#include "pareto/distributions.hpp"
#include "pareto/huge_n.hpp"
#include "pareto/log_prob.hpp"

namespace pareto {

enum class BernoulliKind { strong, weak, pair, variance_raw };

std::string_view to_string(BernoulliKind k) noexcept;

struct BernoulliProbResult {
    BernoulliKind kind = BernoulliKind::strong;
    /// Probability kinds only.
    LogProb log_p;
    /// exp(log_p) for probability kinds; the variance itself for variance_raw.
    double value = 0.0;
    /// variance_raw: the pair term lost more than 8 significant digits.
    bool cancellation = false;
};

inline constexpr std::uint64_t kMaxVarianceN = 1'000'000'000;
inline constexpr std::uint64_t kPairCostWarningK = 400;
inline constexpr double kMaxEnumerations = 1e7;

/// P(vector 1 is a strong maximum) = sum_i C(k,i) p^i (1-p)^{k-i} (1 - p^i)^{n-1}.
BernoulliProbResult p_bernoulli(std::uint64_t k, const HugeN& n, double p);

/// p^k (1 - p^k)^{n-1}, the last term of the strong sum.
BernoulliProbResult p_bernoulli_fixed_k_asymptotic(std::uint64_t k, const HugeN& n, double p);

/// P(vector 1 is a weak maximum) = sum_i C(k,i) p^i (1-p)^{k-i} (1 - p^i (1 - (1-p)^{k-i}))^{n-1}.
BernoulliProbResult q_bernoulli(std::uint64_t k, const HugeN& n, double p);

/// P(vectors 1 and 2 are both strong maxima). Exact zero for k < 2 or n < 2.
BernoulliProbResult pair_prob(std::uint64_t k, const HugeN& n, double p);

/// Var(|front|) = n P (1 - P) + n (n-1) (P_pair - P^2), with P = p_bernoulli.
/// n must be exact and <= kMaxVarianceN.
BernoulliProbResult variance_front_size(std::uint64_t k, std::uint64_t n, double p);

struct BruteForceResult {
    double p_strong = 0.0;
    double q_weak = 0.0;
    double pair_strong = 0.0;  // P(vectors 1 and 2 both strong maxima)
    double mean_front = 0.0;
    double var_front = 0.0;
    std::vector<double> front_size_pmf;  // index = strong front size, 0..n
};

/// Exhaustive enumeration of all |support|^(k n) coordinate configurations.
/// The law must be Bernoulli or FiniteDiscrete; ResourceError beyond kMaxEnumerations.
BruteForceResult brute_force_discrete(std::uint64_t k, std::uint64_t n, const DistributionSpec& d);

}  // namespace pareto
