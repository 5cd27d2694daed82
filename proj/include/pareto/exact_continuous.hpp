#pragma once

// Probability that the first of n iid k-dimensional vectors with continuous
// iid coordinates is a maximum. The value does not depend on the continuous
// law, so everything here is a function of (k, n) alone.
//
// Four exact routes (recurrence, alternating sum in float and in exact
// rationals, direct enumeration of weakly increasing tuples) and two
// asymptotic ones (fixed-k and the three-regime phase-transition form).

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "pareto/huge_n.hpp"
#include "pareto/log_prob.hpp"

namespace pareto {

enum class ContinuousMethod {
    recurrence,
    alternating_float,
    alternating_rational,
    nested_oracle,
    fixed_k_asymptotic,
    hwang,
};

enum class HwangRegime { saddle, gaussian, upper };

std::string_view to_string(ContinuousMethod m) noexcept;
std::string_view to_string(HwangRegime r) noexcept;

struct ContinuousProbResult {
    LogProb log_p;
    /// Linear value as computed by the method (may underflow where log_p does not).
    double value = 0.0;
    ContinuousMethod method = ContinuousMethod::recurrence;
    std::optional<HwangRegime> regime;
    /// alternating_float only: sum|terms| / |sum|, the amplification of a
    /// one-ulp term error in the result.
    double cancellation_ulps = 0.0;
    bool unreliable = false;
};

inline constexpr std::uint64_t kDefaultRecurrenceCap = 100'000'000;
inline constexpr std::uint64_t kMaxRationalN = 2000;
inline constexpr double kUnreliableUlps = 1e6;
inline constexpr double kMaxOracleTuples = 1e7;

/// p_{1,n} = 1/n, p_{k,n} = (1/n) sum_{u<=n} p_{k-1,u}. O(k n) time, O(n) memory.
/// ResourceError when n > max_n.
ContinuousProbResult p_recurrence(std::uint64_t k, std::uint64_t n,
                                  std::uint64_t max_n = kDefaultRecurrenceCap);

struct KNQuery {
    std::uint64_t k = 1;
    std::uint64_t n = 1;
};

/// Answers many (k, n) queries with a single pass over one row of length max n.
/// Results are returned in query order.
std::vector<ContinuousProbResult> p_recurrence_batch(std::span<const KNQuery> queries,
                                                     std::uint64_t max_n = kDefaultRecurrenceCap);

enum class AlternatingMode { float_compensated, exact_rational };

/// sum_{u=1}^{n} C(n-1,u-1) (-1)^{u-1} / u^k.
/// exact_rational requires n <= kMaxRationalN (ResourceError otherwise).
/// float_compensated sets `unreliable` when cancellation exceeds kUnreliableUlps.
ContinuousProbResult p_alternating(std::uint64_t k, std::uint64_t n, AlternatingMode mode);

/// The alternating sum as an exact rational.
mpq_class p_alternating_exact(std::uint64_t k, std::uint64_t n);

/// (1/n) sum over 1 <= u_1 <= ... <= u_{k-1} <= n of 1/(u_1 ... u_{k-1}).
/// ResourceError when the tuple count C(n+k-2, k-1) exceeds kMaxOracleTuples.
ContinuousProbResult p_nested_oracle(std::uint64_t k, std::uint64_t n);

/// log^{k-1}(n) / (n (k-1)!), evaluated in log space. n >= 2.
ContinuousProbResult p_fixed_k_asymptotic(std::uint64_t k, const HugeN& n);

/// Three-regime first-order approximation. With d = (k - log n)/sqrt(log n):
/// d <= -2 saddle (fixed-k form times Gamma(1 - k/log n)), |d| < 2 Phi(d),
/// d >= 2 one. n >= 3.
ContinuousProbResult p_hwang(std::uint64_t k, const HugeN& n);

/// Log of an exact positive rational, valid far outside the double range.
double log_of(const mpq_class& q);

}  // namespace pareto
