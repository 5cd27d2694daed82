#pragma once

// Coordinate law F of the sample vectors.
//
// Supported families are the standard uniform, the exponential, Bernoulli(p)
// and finite discrete laws. S(x) here is P(X >= x) (weak inequality), which is
// left-continuous and differs from the usual survival function at atoms.

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pareto/rng.hpp"

namespace pareto {

struct ContinuousUniform01 {};

struct Exponential {
    double rate = 1.0;
};

struct Bernoulli {
    double p = 0.5;
};

struct FiniteDiscrete {
    std::vector<double> values;  // strictly increasing, at least two
    std::vector<double> probs;   // positive, sum to 1
};

class DistributionSpec {
public:
    using Variant = std::variant<ContinuousUniform01, Exponential, Bernoulli, FiniteDiscrete>;

    /// Throws ConfigError when the parameters violate the family's invariants.
    explicit DistributionSpec(Variant v);

    static DistributionSpec uniform() { return DistributionSpec(ContinuousUniform01{}); }
    static DistributionSpec exponential(double rate) { return DistributionSpec(Exponential{rate}); }
    static DistributionSpec bernoulli(double p) { return DistributionSpec(Bernoulli{p}); }
    static DistributionSpec discrete(std::vector<double> values, std::vector<double> probs) {
        return DistributionSpec(FiniteDiscrete{std::move(values), std::move(probs)});
    }

    const Variant& variant() const noexcept { return v_; }
    bool is_continuous() const noexcept;

    /// Atoms and their masses; empty for continuous laws. Bernoulli maps to {0,1}.
    const std::vector<double>& support() const noexcept { return support_; }
    const std::vector<double>& masses() const noexcept { return masses_; }

    /// CLI form: uniform, exp:<rate>, bern:<p>, disc:<v1:p1,v2:p2,...>
    std::string to_string() const;

private:
    Variant v_;
    std::vector<double> support_;
    std::vector<double> masses_;
    std::vector<double> cum_;   // cum_[j] = sum_{i <= j} masses_[i], cum_.back() == 1
    std::vector<double> tail_;  // tail_[j] = sum_{i >= j} masses_[i], tail_[0] == 1, tail_[m] == 0

    friend double survival_geq(const DistributionSpec&, double);
    friend double survival_gt(const DistributionSpec&, double);
    friend double survival_pseudo_inverse(const DistributionSpec&, double);
    friend double cdf(const DistributionSpec&, double);
    friend double quantile(const DistributionSpec&, double);
};

/// Parses the CLI distribution format. Throws ConfigError on malformed input.
DistributionSpec parse_distribution(std::string_view text);

/// F(x) = P(X <= x).
double cdf(const DistributionSpec& d, double x);

/// S(x) = P(X >= x).
double survival_geq(const DistributionSpec& d, double x);

/// P(X > x), the right limit of S at x.
double survival_gt(const DistributionSpec& d, double x);

/// inf{x : S(x) <= y} for y in (0,1); DomainError otherwise.
double survival_pseudo_inverse(const DistributionSpec& d, double y);

/// inf{x : F(x) >= u} for u in (0,1); DomainError otherwise.
double quantile(const DistributionSpec& d, double u);

/// One draw, computed as quantile(d, U) with U uniform on (0,1).
inline double sample(const DistributionSpec& d, Rng& rng) { return quantile(d, rng.uniform_open()); }

}  // namespace pareto
