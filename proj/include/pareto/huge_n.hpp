#pragma once

#include <cstdint>

namespace pareto {

/// A sample count that may be astronomically large.
///
/// Either an exact integer (n <= 2^53) or a real log10(n) >= 0. Formulas that
/// accept a HugeN use n only through log(n - m), so the log form never has to
/// be materialised as an integer.
class HugeN {
public:
    static constexpr std::uint64_t kMaxExact = std::uint64_t{1} << 53;

    static HugeN exact(std::uint64_t n);
    static HugeN from_log10(double log10_n);
    static HugeN from_log(double log_n);

    bool is_exact() const noexcept { return exact_ != 0; }
    /// Throws DomainError when the count is only known through its logarithm.
    std::uint64_t value() const;

    double log() const noexcept { return log_; }
    double log10() const noexcept;

    /// log(n - m); -inf when n == m, DomainError when n < m.
    double log_minus(std::uint64_t m) const;

private:
    HugeN() = default;
    std::uint64_t exact_ = 0;
    double log_ = 0.0;
};

}  // namespace pareto
