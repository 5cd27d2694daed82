#pragma once

// Simulation engine: samples, Pareto fronts under the product order, front
// membership estimators, the prefix-domination statistic of the first vector,
// the quantile coupling across laws and the geometric-maximum limit.
//
// Indices are 0-based; row 0 plays the role of "the first vector".

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pareto/distributions.hpp"
#include "pareto/rng.hpp"

namespace pareto {

inline constexpr std::size_t kMaxSampleCells = std::size_t{1} << 28;

/// n x k row-major array of finite reals; row i is the vector X_i.
class SampleMatrix {
public:
    SampleMatrix(std::size_t n, std::size_t k);
    SampleMatrix(std::size_t n, std::size_t k, std::vector<double> entries);

    std::size_t rows() const noexcept { return n_; }
    std::size_t cols() const noexcept { return k_; }
    std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * k_, k_}; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * k_ + j]; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * k_ + j]; }
    const std::vector<double>& data() const noexcept { return data_; }

    /// The first `width` columns.
    SampleMatrix prefix(std::size_t width) const;

private:
    std::size_t n_;
    std::size_t k_;
    std::vector<double> data_;
};

using IndexSet = std::vector<std::size_t>;  // ascending

struct FrontResult {
    IndexSet strong;
    IndexSet weak;
};

struct EstimateWithError {
    double estimate = 0.0;
    double std_error = 0.0;
    std::size_t reps = 0;
};

enum class FrontKind { strong, weak };

/// a <= b componentwise.
bool weakly_dominated(std::span<const double> a, std::span<const double> b) noexcept;
/// a <= b componentwise with a != b.
bool strictly_dominated(std::span<const double> a, std::span<const double> b) noexcept;

/// iid draws row by row. ResourceError when n*k exceeds kMaxSampleCells,
/// DomainError when n or k is zero.
SampleMatrix generate_sample(const DistributionSpec& d, std::size_t k, std::size_t n, Rng& rng);

/// Rows i with no j != i such that x_i <= x_j. Equal rows knock each other out.
IndexSet strong_front(const SampleMatrix& m);
/// Rows i with no j such that x_i < x_j (weakly below, strictly somewhere).
IndexSet weak_front(const SampleMatrix& m);
FrontResult fronts(const SampleMatrix& m);

/// Same set as strong_front. Rows are scanned by decreasing coordinate sum
/// (ties broken lexicographically, so equal rows are adjacent) and compared
/// only against the weakly maximal rows already seen.
IndexSet strong_front_fast(const SampleMatrix& m);

bool is_strong_max(const SampleMatrix& m, std::size_t i);
bool is_weak_max(const SampleMatrix& m, std::size_t i);

/// Fraction of reps in which row 0 of an n x k sample lies on the requested
/// front. Replication r uses derive_seed(seed, r). reps >= 100.
EstimateWithError estimate_p(const DistributionSpec& d, std::size_t k, std::size_t n, std::size_t reps,
                             std::uint64_t seed, FrontKind kind);

struct PrefixDomination {
    /// max over rows i >= 1 of (T_i - 1), where T_i is the first coordinate at
    /// which row 0 strictly beats row i. When censored this is a lower bound
    /// equal to the width.
    std::size_t max_lag = 0;
    /// Some row i was not beaten by row 0 within the available width.
    bool censored = false;
};

/// Row 0 is on the strong front of the width-w prefix iff max_lag < w (for
/// every w up to the matrix width).
PrefixDomination prefix_domination_max(const SampleMatrix& m);

/// Per replication: max of n-1 iid geometric(alpha) variables (failures before
/// the first success) divided by log(n).
std::vector<double> ferguson_max_ratio(double alpha, std::size_t n, std::size_t reps, std::uint64_t seed);

struct CoupledFronts {
    IndexSet front_U;
    IndexSet front_F;
    IndexSet front_B;
};

/// One uniform matrix U pushed through quantile(d, .) to X and through the
/// indicator X > threshold_x to B; strong fronts of all three.
/// DomainError unless 1 - F(threshold_x) lies in (0,1).
CoupledFronts coupled_front_chain(std::size_t k, std::size_t n, Rng& rng, const DistributionSpec& d,
                                  double threshold_x);

struct MRatioSummary {
    EstimateWithError median;  // std_error from a bootstrap of the median
    std::vector<double> ratios;
    std::size_t width = 0;  // final column budget after widening
};

/// Distribution of max_lag / log(n) for row 0 of an n-row sample whose
/// columns are drawn lazily. The column budget starts at k_max and doubles
/// while some row survives past it, up to 1024 * k_max (ResourceError beyond).
MRatioSummary estimate_M_over_logn(const DistributionSpec& d, std::size_t k_max, std::size_t n, std::size_t reps,
                                   std::uint64_t seed);

/// Median with a bootstrap standard error (200 resamples).
EstimateWithError median_with_bootstrap(std::span<const double> values, std::uint64_t seed);

}  // namespace pareto
