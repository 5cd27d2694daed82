#pragma once

// Log-space probability arithmetic.
//
// Probabilities in this library routinely fall below the smallest double
// (e.g. (1 - 2^-i)^(n-1) with n = 10^130), so they travel as natural logs.
// Helpers here are the only place where the log-space identities live.

#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace pareto {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// A probability stored as its natural logarithm. -inf encodes an exact zero.
class LogProb {
public:
    constexpr LogProb() noexcept = default;

    /// Accepts log values up to +1e-12 (summation round-off) and clamps them to 0.
    /// Throws DomainError for NaN or anything larger.
    static LogProb from_log(double log_value);
    static LogProb from_prob(double p);
    static constexpr LogProb zero() noexcept { return LogProb{}; }
    static constexpr LogProb one() noexcept {
        LogProb r;
        r.log_ = 0.0;
        return r;
    }

    constexpr double log() const noexcept { return log_; }
    double prob() const noexcept { return std::exp(log_); }
    constexpr bool is_zero() const noexcept { return log_ == kNegInf; }

    friend constexpr bool operator==(LogProb a, LogProb b) noexcept { return a.log_ == b.log_; }

private:
    double log_ = kNegInf;
};

/// log(sum exp(terms)). Terms are sorted ascending and accumulated after a
/// max shift. -inf terms are ignored; an empty or all -inf input gives -inf.
double log_sum_exp(std::span<const double> terms);

/// log(1 - exp(x)) for x <= 0, accurate on both ends.
double log1m_exp(double x) noexcept;

/// log(-log(1 - exp(log_x))) for log_x <= 0, i.e. the log of -log1p(-x).
/// Uses log x + x/2 when x < 1e-17 so that multiplying by a huge count keeps
/// full relative accuracy. Returns +inf at log_x == 0 and -inf at log_x == -inf.
double log_neg_log1m_exp(double log_x) noexcept;

/// (count) * log(1 - exp(log_x)) given log(count); 0 when count == 0.
/// This is the log of (1 - x)^count evaluated without forming count.
double log_pow1m(double log_count, double log_x) noexcept;

/// log binomial coefficient via lgamma.
double log_choose(double n, double r) noexcept;

/// Neumaier compensated accumulator with a running bound on |terms|.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
        abs_sum_ += std::fabs(x);
    }
    double value() const noexcept { return sum_ + comp_; }
    double abs_sum() const noexcept { return abs_sum_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
    double abs_sum_ = 0.0;
};

}  // namespace pareto
