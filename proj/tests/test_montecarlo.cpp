#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "pareto/errors.hpp"
#include "pareto/exact_continuous.hpp"
#include "pareto/gamma_functional.hpp"
#include "pareto/montecarlo.hpp"

using namespace pareto;

namespace {

SampleMatrix rows(std::size_t k, std::vector<double> v) {
    const std::size_t n = v.size() / k;
    return SampleMatrix(n, k, std::move(v));
}

bool subset(const IndexSet& a, const IndexSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

double quantile_of(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    return v[static_cast<std::size_t>(q * (v.size() - 1))];
}

}  // namespace

TEST_CASE("sample matrix validation") {
    CHECK_THROWS_AS(SampleMatrix(0, 3), DomainError);
    CHECK_THROWS_AS(SampleMatrix(2, 2, {1, 2, 3}), DomainError);
    CHECK_THROWS_AS(SampleMatrix(1, 2, {1, std::nan("")}), DomainError);
    CHECK_THROWS_AS(SampleMatrix(1, 1, {INFINITY}), DomainError);
    const auto m = rows(3, {1, 2, 3, 4, 5, 6});
    const auto p = m.prefix(2);
    CHECK(p.cols() == 2);
    CHECK(p(1, 1) == 5);
    CHECK_THROWS_AS(m.prefix(4), DomainError);
}

TEST_CASE("generate_sample") {
    Rng a(1), b(1);
    const auto d = DistributionSpec::uniform();
    CHECK(generate_sample(d, 3, 50, a).data() == generate_sample(d, 3, 50, b).data());
    CHECK_THROWS_AS(generate_sample(d, 0, 5, a), DomainError);
    CHECK_THROWS_AS(generate_sample(d, 1 << 20, 1 << 20, a), ResourceError);

    Rng rng(2);
    const auto m = generate_sample(DistributionSpec::bernoulli(0.5), 4, 100'000, rng);
    for (std::size_t j = 0; j < 4; ++j) {
        double s = 0;
        for (std::size_t i = 0; i < m.rows(); ++i) s += m(i, j);
        CHECK(std::fabs(s / 1e5 - 0.5) < 0.005);
    }
}

TEST_CASE("front examples") {
    CHECK(strong_front(rows(2, {1, 0, 0, 1})) == IndexSet{0, 1});
    CHECK(strong_front(rows(1, {2, 2, 2})).empty());
    CHECK(strong_front(rows(3, {0.1, 0.2, 0.3})) == IndexSet{0});
    CHECK(weak_front(rows(1, {2, 2, 2})) == IndexSet{0, 1, 2});
    CHECK(weak_front(rows(2, {1, 0, 0, 1})) == IndexSet{0, 1});
    const auto f = fronts(rows(2, {1, 1, 1, 0}));
    CHECK(f.strong == IndexSet{0});
    CHECK(f.weak == IndexSet{0});
    // duplicates of a maximal row knock each other out of the strong front only
    const auto g = fronts(rows(2, {3, 3, 3, 3, 0, 5}));
    CHECK(g.strong == IndexSet{2});
    CHECK(g.weak == IndexSet{0, 1, 2});
}

TEST_CASE("fast strong front equals the reference") {
    std::mt19937_64 gen(5);
    for (int rep = 0; rep < 1000; ++rep) {
        const std::size_t k = 1 + rep % 6;
        const std::size_t n = 1 + gen() % 60;
        Rng rng(derive_seed(31, rep));
        const auto m = generate_sample(DistributionSpec::uniform(), k, n, rng);
        CHECK(strong_front_fast(m) == strong_front(m));
    }
    const std::vector<DistributionSpec> tied = {DistributionSpec::bernoulli(0.5), DistributionSpec::bernoulli(0.9),
                                                DistributionSpec::discrete({0, 1, 2}, {0.2, 0.3, 0.5})};
    for (int rep = 0; rep < 1000; ++rep) {
        const std::size_t k = 1 + rep % 5;
        const std::size_t n = 1 + gen() % 40;
        Rng rng(derive_seed(32, rep));
        const auto m = generate_sample(tied[rep % 3], k, n, rng);
        CHECK(strong_front_fast(m) == strong_front(m));
    }
}

TEST_CASE("front properties: inclusion, relabelling, monotone maps") {
    std::mt19937_64 gen(8);
    for (int rep = 0; rep < 400; ++rep) {
        const std::size_t k = 1 + rep % 4;
        const std::size_t n = 2 + gen() % 30;
        Rng rng(derive_seed(40, rep));
        const auto d = rep % 2 ? DistributionSpec::bernoulli(0.5) : DistributionSpec::uniform();
        const auto m = generate_sample(d, k, n, rng);
        const auto f = fronts(m);
        CHECK(subset(f.strong, f.weak));

        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::shuffle(perm.begin(), perm.end(), gen);
        std::vector<double> shuffled(n * k), mapped(n * k);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < k; ++j) {
                shuffled[perm[i] * k + j] = m(i, j);
                mapped[i * k + j] = std::exp(3 * m(i, j)) - 7;
            }
        const auto fs = fronts(SampleMatrix(n, k, shuffled));
        IndexSet expect_s, expect_w;
        for (auto i : f.strong) expect_s.push_back(perm[i]);
        for (auto i : f.weak) expect_w.push_back(perm[i]);
        std::sort(expect_s.begin(), expect_s.end());
        std::sort(expect_w.begin(), expect_w.end());
        CHECK(fs.strong == expect_s);
        CHECK(fs.weak == expect_w);

        const auto fm = fronts(SampleMatrix(n, k, mapped));
        CHECK(fm.strong == f.strong);
        CHECK(fm.weak == f.weak);
    }
}

TEST_CASE("estimate_p against exact values") {
    const auto c = estimate_p(DistributionSpec::uniform(), 3, 100, 20'000, 1, FrontKind::strong);
    const double exact = p_recurrence(3, 100).value;
    CHECK(std::fabs(c.estimate - exact) <= 3 * c.std_error);
    CHECK(c.std_error == doctest::Approx(std::sqrt(c.estimate * (1 - c.estimate) / 20'000)));
    const auto w = estimate_p(DistributionSpec::uniform(), 3, 100, 20'000, 1, FrontKind::weak);
    CHECK(w.estimate == c.estimate);  // no ties with continuous draws, same seeds

    const auto b = estimate_p(DistributionSpec::bernoulli(0.5), 2, 4, 20'000, 2, FrontKind::strong);
    const double bx = oracle::bernoulli_by_bits(2, 4, 0.5).strong;
    CHECK(std::fabs(b.estimate - bx) <= 3 * b.std_error);
    const auto bw = estimate_p(DistributionSpec::bernoulli(0.5), 2, 4, 20'000, 2, FrontKind::weak);
    CHECK(std::fabs(bw.estimate - oracle::bernoulli_by_bits(2, 4, 0.5).weak) <= 3 * bw.std_error);
    CHECK_THROWS_AS(estimate_p(DistributionSpec::uniform(), 3, 10, 99, 1, FrontKind::strong), DomainError);
}

TEST_CASE("prefix domination examples") {
    const auto m = rows(3, {3, 1, 2, 2, 5, 9});
    CHECK(prefix_domination_max(m).max_lag == 0);
    CHECK_FALSE(prefix_domination_max(m).censored);
    for (std::size_t w = 1; w <= 3; ++w) CHECK(is_strong_max(m.prefix(w), 0));

    const auto win = rows(1, {2, 1});
    CHECK(prefix_domination_max(win).max_lag == 0);
    CHECK(is_strong_max(win, 0));
    const auto lose = rows(1, {1, 2});
    CHECK(prefix_domination_max(lose).max_lag >= 1);
    CHECK_FALSE(is_strong_max(lose, 0));
    CHECK(prefix_domination_max(rows(2, {1, 1})).max_lag == 0);  // no competitors
}

TEST_CASE("membership equivalence on random prefixes") {
    for (int rep = 0; rep < 2000; ++rep) {
        const std::size_t k = 1 + rep % 6;
        const std::size_t n = 2 + rep % 37;
        Rng rng(derive_seed(50, rep));
        const auto d = rep % 3 == 0 ? DistributionSpec::bernoulli(0.5) : DistributionSpec::uniform();
        const auto m = generate_sample(d, k, n, rng);
        const auto full = prefix_domination_max(m);
        for (std::size_t w = 1; w <= k; ++w) {
            const auto pm = m.prefix(w);
            const auto pd = prefix_domination_max(pm);
            CHECK(is_strong_max(pm, 0) == (pd.max_lag < w));
            CHECK(pd.max_lag == std::min(full.max_lag, w));
        }
    }
}

TEST_CASE("Ferguson ratio") {
    const auto a = ferguson_max_ratio(0.5, 1000, 50, 3);
    CHECK(a == ferguson_max_ratio(0.5, 1000, 50, 3));
    const auto near_one = ferguson_max_ratio(0.999, 1000, 50, 3);
    CHECK(*std::max_element(near_one.begin(), near_one.end()) <= 2.0 / std::log(1000.0));
    const auto r = ferguson_max_ratio(0.5, 10'000, 200, 4);
    const double med = median_with_bootstrap(r, 1).estimate;
    CHECK(std::fabs(med - 1 / std::log(2.0)) <= 0.15 / std::log(2.0));
    CHECK_THROWS_AS(ferguson_max_ratio(1.0, 10, 5, 1), DomainError);
    CHECK_THROWS_AS(ferguson_max_ratio(0.5, 1, 5, 1), DomainError);
}

TEST_CASE("quantile coupling inclusions") {
    const std::vector<std::pair<DistributionSpec, double>> laws = {
        {DistributionSpec::uniform(), 0.6},
        {DistributionSpec::exponential(1.0), 0.7},
        {DistributionSpec::discrete({0, 1, 2, 3}, {0.1, 0.4, 0.3, 0.2}), 1.0},
        {DistributionSpec::discrete({0, 1}, {0.5, 0.5}), 0.0},
    };
    for (int rep = 0; rep < 2000; ++rep) {
        const auto& [d, x] = laws[rep % laws.size()];
        Rng rng(derive_seed(60, rep));
        const auto c = coupled_front_chain(1 + rep % 5, 2 + rep % 20, rng, d, x);
        CHECK(subset(c.front_F, c.front_U));
        CHECK(subset(c.front_B, c.front_F));
        if (d.is_continuous()) CHECK(c.front_F == c.front_U);
    }
    Rng rng(1);
    CHECK_THROWS_AS(coupled_front_chain(2, 3, rng, DistributionSpec::bernoulli(0.5), 1.0), DomainError);
    CHECK_THROWS_AS(coupled_front_chain(2, 3, rng, DistributionSpec::bernoulli(0.5), -1.0), DomainError);
}

TEST_CASE("M / log n") {
    const auto c = estimate_M_over_logn(DistributionSpec::uniform(), 8, 100'000, 100, 9);
    CHECK(std::fabs(c.median.estimate - 1.0) <= 0.15);
    CHECK(c.ratios.size() == 100);
    CHECK(c.median.std_error > 0.0);

    const auto b = estimate_M_over_logn(DistributionSpec::bernoulli(0.5), 8, 100'000, 100, 10);
    const double target = 1 / gamma_closed_form(DistributionSpec::bernoulli(0.5)).value;
    CHECK(std::fabs(b.median.estimate - target) <= 0.15 * target);

    // dispersion shrinks with n
    const auto small = estimate_M_over_logn(DistributionSpec::uniform(), 8, 1'000, 100, 11);
    auto iqr = [](const std::vector<double>& v) { return quantile_of(v, 0.75) - quantile_of(v, 0.25); };
    CHECK(iqr(c.ratios) < iqr(small.ratios));

    // replay
    CHECK(estimate_M_over_logn(DistributionSpec::uniform(), 4, 500, 10, 12).ratios ==
          estimate_M_over_logn(DistributionSpec::uniform(), 4, 500, 10, 12).ratios);
    // the column budget widens instead of censoring
    CHECK(estimate_M_over_logn(DistributionSpec::uniform(), 1, 100'000, 5, 13).width > 1);
    CHECK_THROWS_AS(estimate_M_over_logn(DistributionSpec::uniform(), 0, 100, 5, 1), DomainError);
}

TEST_CASE("median with bootstrap") {
    const std::vector<double> v = {5, 1, 3, 2, 4};
    CHECK(median_with_bootstrap(v, 1).estimate == 3);
    const std::vector<double> even = {4, 1, 3, 2};
    CHECK(median_with_bootstrap(even, 1).estimate == 2.5);
    CHECK(median_with_bootstrap(std::vector<double>(9, 1.0), 1).std_error == 0.0);
    CHECK_THROWS_AS(median_with_bootstrap(std::vector<double>{}, 1), DomainError);
}
