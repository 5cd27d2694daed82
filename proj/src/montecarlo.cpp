#include "pareto/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "pareto/errors.hpp"

namespace pareto {
namespace {

constexpr std::size_t kBootstrapResamples = 200;
constexpr std::size_t kWidthGrowthCap = 1024;

double median_of(std::vector<double> v) {
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1) return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

bool equal_rows(std::span<const double> a, std::span<const double> b) noexcept {
    return std::equal(a.begin(), a.end(), b.begin());
}

}  // namespace

SampleMatrix::SampleMatrix(std::size_t n, std::size_t k) : SampleMatrix(n, k, std::vector<double>(n * k, 0.0)) {}

SampleMatrix::SampleMatrix(std::size_t n, std::size_t k, std::vector<double> entries)
    : n_(n), k_(k), data_(std::move(entries)) {
    if (n == 0 || k == 0) throw DomainError("sample dimensions must be positive");
    if (data_.size() != n * k) throw DomainError("sample entries do not match n * k");
    for (double x : data_) {
        if (!std::isfinite(x)) throw DomainError("sample entries must be finite");
    }
}

SampleMatrix SampleMatrix::prefix(std::size_t width) const {
    if (width == 0 || width > k_) throw DomainError("prefix width must lie in [1, k]");
    std::vector<double> out;
    out.reserve(n_ * width);
    for (std::size_t i = 0; i < n_; ++i) {
        const auto r = row(i);
        out.insert(out.end(), r.begin(), r.begin() + static_cast<std::ptrdiff_t>(width));
    }
    return SampleMatrix(n_, width, std::move(out));
}

bool weakly_dominated(std::span<const double> a, std::span<const double> b) noexcept {
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (a[j] > b[j]) return false;
    }
    return true;
}

bool strictly_dominated(std::span<const double> a, std::span<const double> b) noexcept {
    bool some_less = false;
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (a[j] > b[j]) return false;
        if (a[j] < b[j]) some_less = true;
    }
    return some_less;
}

SampleMatrix generate_sample(const DistributionSpec& d, std::size_t k, std::size_t n, Rng& rng) {
    if (n == 0 || k == 0) throw DomainError("sample dimensions must be positive");
    if (n > kMaxSampleCells / k) {
        throw ResourceError(fmt::format("{} x {} sample exceeds {} cells", n, k, kMaxSampleCells));
    }
    std::vector<double> entries(n * k);
    for (double& x : entries) x = sample(d, rng);
    return SampleMatrix(n, k, std::move(entries));
}

bool is_strong_max(const SampleMatrix& m, std::size_t i) {
    const auto xi = m.row(i);
    for (std::size_t j = 0; j < m.rows(); ++j) {
        if (j != i && weakly_dominated(xi, m.row(j))) return false;
    }
    return true;
}

bool is_weak_max(const SampleMatrix& m, std::size_t i) {
    const auto xi = m.row(i);
    for (std::size_t j = 0; j < m.rows(); ++j) {
        if (j != i && strictly_dominated(xi, m.row(j))) return false;
    }
    return true;
}

IndexSet strong_front(const SampleMatrix& m) {
    IndexSet out;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (is_strong_max(m, i)) out.push_back(i);
    }
    return out;
}

IndexSet weak_front(const SampleMatrix& m) {
    IndexSet out;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (is_weak_max(m, i)) out.push_back(i);
    }
    return out;
}

FrontResult fronts(const SampleMatrix& m) { return {strong_front(m), weak_front(m)}; }

IndexSet strong_front_fast(const SampleMatrix& m) {
    const std::size_t n = m.rows();
    std::vector<double> sums(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = m.row(i);
        double s = 0.0;
        for (double x : r) s += x;
        sums[i] = s;
    }
    // x_i <= x_j implies sum_i <= sum_j (rounding is monotone) and x_i <=lex x_j,
    // so every dominator of a row is visited before it.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (sums[a] != sums[b]) return sums[a] > sums[b];
        const auto ra = m.row(a);
        const auto rb = m.row(b);
        if (std::lexicographical_compare(rb.begin(), rb.end(), ra.begin(), ra.end())) return true;
        if (std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end())) return false;
        return a < b;
    });

    // Representatives of the distinct weakly maximal rows, and whether each
    // has been seen more than once.
    std::vector<std::size_t> window;
    std::vector<char> duplicated;
    for (std::size_t i : order) {
        const auto xi = m.row(i);
        bool covered = false;
        for (std::size_t w = 0; w < window.size(); ++w) {
            const auto xw = m.row(window[w]);
            if (weakly_dominated(xi, xw)) {
                if (equal_rows(xi, xw)) duplicated[w] = 1;
                covered = true;
                break;
            }
        }
        if (!covered) {
            window.push_back(i);
            duplicated.push_back(0);
        }
    }
    IndexSet out;
    for (std::size_t w = 0; w < window.size(); ++w) {
        if (!duplicated[w]) out.push_back(window[w]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

EstimateWithError estimate_p(const DistributionSpec& d, std::size_t k, std::size_t n, std::size_t reps,
                             std::uint64_t seed, FrontKind kind) {
    if (reps < 100) throw DomainError("estimate_p needs reps >= 100");
    std::vector<char> hit(reps, 0);
    parallel_for(reps, [&](std::size_t r) {
        Rng rng(derive_seed(seed, r));
        const SampleMatrix m = generate_sample(d, k, n, rng);
        hit[r] = kind == FrontKind::strong ? is_strong_max(m, 0) : is_weak_max(m, 0);
    });
    const auto hits = static_cast<double>(std::count(hit.begin(), hit.end(), 1));
    const double est = hits / static_cast<double>(reps);
    return {est, std::sqrt(est * (1.0 - est) / static_cast<double>(reps)), reps};
}

PrefixDomination prefix_domination_max(const SampleMatrix& m) {
    PrefixDomination out;
    const auto first = m.row(0);
    const std::size_t width = m.cols();
    for (std::size_t i = 1; i < m.rows(); ++i) {
        const auto xi = m.row(i);
        std::size_t lag = 0;
        while (lag < width && !(first[lag] > xi[lag])) ++lag;
        if (lag == width) out.censored = true;
        out.max_lag = std::max(out.max_lag, lag);
    }
    return out;
}

std::vector<double> ferguson_max_ratio(double alpha, std::size_t n, std::size_t reps, std::uint64_t seed) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("geometric success probability must lie in (0,1)");
    if (n < 2) throw DomainError("ferguson ratio needs n >= 2");
    const double log_fail = std::log1p(-alpha);
    const double log_n = std::log(static_cast<double>(n));
    std::vector<double> ratios(reps);
    parallel_for(reps, [&](std::size_t r) {
        Rng rng(derive_seed(seed, r));
        double best = 0.0;
        for (std::size_t i = 1; i < n; ++i) {
            best = std::max(best, std::floor(std::log(rng.uniform_open()) / log_fail));
        }
        ratios[r] = best / log_n;
    });
    return ratios;
}

CoupledFronts coupled_front_chain(std::size_t k, std::size_t n, Rng& rng, const DistributionSpec& d,
                                  double threshold_x) {
    const double p = 1.0 - cdf(d, threshold_x);
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError(fmt::format("threshold {} gives degenerate indicator probability {}", threshold_x, p));
    }
    if (n == 0 || k == 0) throw DomainError("sample dimensions must be positive");
    std::vector<double> u(n * k);
    for (double& x : u) x = rng.uniform_open();
    std::vector<double> x(n * k);
    std::vector<double> b(n * k);
    for (std::size_t c = 0; c < u.size(); ++c) {
        x[c] = quantile(d, u[c]);
        b[c] = x[c] > threshold_x ? 1.0 : 0.0;
    }
    return {strong_front(SampleMatrix(n, k, std::move(u))), strong_front(SampleMatrix(n, k, std::move(x))),
            strong_front(SampleMatrix(n, k, std::move(b)))};
}

EstimateWithError median_with_bootstrap(std::span<const double> values, std::uint64_t seed) {
    if (values.empty()) throw DomainError("median of an empty sample");
    std::vector<double> v(values.begin(), values.end());
    const double med = median_of(v);
    Rng rng(seed);
    std::vector<double> boot(kBootstrapResamples);
    std::vector<double> resample(v.size());
    for (double& b : boot) {
        for (double& x : resample) x = v[rng.next() % v.size()];
        b = median_of(resample);
    }
    const double mean = std::accumulate(boot.begin(), boot.end(), 0.0) / static_cast<double>(boot.size());
    double ss = 0.0;
    for (double b : boot) ss += (b - mean) * (b - mean);
    return {med, std::sqrt(ss / static_cast<double>(boot.size() - 1)), v.size()};
}

MRatioSummary estimate_M_over_logn(const DistributionSpec& d, std::size_t k_max, std::size_t n, std::size_t reps,
                                   std::uint64_t seed) {
    if (n < 2) throw DomainError("M / log n needs n >= 2");
    if (k_max == 0) throw DomainError("k_max must be >= 1");
    if (reps == 0) throw DomainError("reps must be >= 1");
    const std::size_t cap = k_max * kWidthGrowthCap;
    const double log_n = std::log(static_cast<double>(n));

    std::vector<double> ratios(reps);
    std::vector<std::size_t> widths(reps);
    parallel_for(reps, [&](std::size_t r) {
        const std::uint64_t rep_seed = derive_seed(seed, r);
        Rng first_rng(derive_seed(rep_seed, 0));
        Rng rest_rng(derive_seed(rep_seed, 1));
        std::vector<double> first;  // columns of row 0, drawn on demand
        std::size_t width = k_max;
        std::size_t max_lag = 0;
        for (std::size_t i = 1; i < n; ++i) {
            std::size_t lag = 0;
            for (;;) {
                if (lag == first.size()) first.push_back(sample(d, first_rng));
                if (first[lag] > sample(d, rest_rng)) break;
                if (++lag >= width) {
                    // censored at this width: widen
                    width *= 2;
                    if (width > cap) {
                        throw ResourceError(
                            fmt::format("prefix domination still censored at width {} (cap {})", width / 2, cap));
                    }
                }
            }
            max_lag = std::max(max_lag, lag);
        }
        ratios[r] = static_cast<double>(max_lag) / log_n;
        widths[r] = width;
    });

    MRatioSummary out;
    out.median = median_with_bootstrap(ratios, derive_seed(seed, reps));
    out.ratios = std::move(ratios);
    out.width = *std::max_element(widths.begin(), widths.end());
    return out;
}

}  // namespace pareto
