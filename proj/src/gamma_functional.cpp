#include "pareto/gamma_functional.hpp"

#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "pareto/errors.hpp"
#include "pareto/rng.hpp"

namespace pareto {
namespace {

constexpr std::uint64_t kShards = 64;

struct Moments {
    double count = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        count += 1.0;
        const double delta = x - mean;
        mean += delta / count;
        m2 += delta * (x - mean);
    }

    void merge(const Moments& o) {
        if (o.count == 0.0) return;
        const double total = count + o.count;
        const double delta = o.mean - mean;
        mean += delta * o.count / total;
        m2 += o.m2 + delta * delta * count * o.count / total;
        count = total;
    }
};

}  // namespace

std::string_view to_string(GammaMethod m) noexcept {
    switch (m) {
        case GammaMethod::closed_form: return "closed_form";
        case GammaMethod::quadrature: return "quadrature";
        case GammaMethod::monte_carlo: return "monte_carlo";
    }
    return "unknown";
}

GammaEstimate gamma_closed_form(const DistributionSpec& d) {
    GammaEstimate est{.value = 1.0, .method = GammaMethod::closed_form, .std_error = std::nullopt};
    if (d.is_continuous()) return est;
    if (const auto* b = std::get_if<Bernoulli>(&d.variant())) {
        est.value = -b->p * std::log(b->p);
        return est;
    }
    double acc = 0.0;
    const auto& atoms = d.support();
    const auto& masses = d.masses();
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        acc += masses[i] * -std::log(survival_geq(d, atoms[i]));
    }
    est.value = acc;
    return est;
}

GammaEstimate gamma_quadrature(const DistributionSpec& d, double tol) {
    if (!(tol > 0.0)) throw DomainError("quadrature tolerance must be > 0");
    GammaEstimate est{.value = 0.0, .method = GammaMethod::quadrature, .std_error = std::nullopt};

    if (!d.is_continuous()) {
        // S takes the values tail_0 = 1 > tail_1 > ... > tail_m = 0 at the atoms.
        // Between consecutive tail values the integrand P(X > S^{-1}(u)) / u has
        // a constant numerator, so each piece integrates to c * log(hi / lo).
        const auto& atoms = d.support();
        double hi = 1.0;
        double acc = 0.0;
        for (std::size_t j = 1; j <= atoms.size(); ++j) {
            const double lo = j < atoms.size() ? survival_geq(d, atoms[j]) : 0.0;
            if (lo <= 0.0) break;
            const double mid = std::sqrt(lo * hi);
            const double numer = survival_gt(d, survival_pseudo_inverse(d, mid));
            acc += numer * (std::log(hi) - std::log(lo));
            hi = lo;
        }
        est.value = acc;
        return est;
    }

    auto integrand = [&](double u) { return survival_gt(d, survival_pseudo_inverse(d, u)) / u; };
    double error = 0.0;
    const double value =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, 1.0, 15, tol, &error);
    if (!(error <= tol)) {
        throw ConvergenceError(fmt::format("gamma quadrature error {} exceeds tol {}", error, tol), value, error);
    }
    est.value = value;
    return est;
}

GammaEstimate gamma_monte_carlo(const DistributionSpec& d, std::uint64_t reps, std::uint64_t seed) {
    if (reps < 2) throw DomainError("gamma Monte Carlo needs reps >= 2");
    const std::uint64_t shards = std::min(reps, kShards);
    std::vector<Moments> parts(shards);
    parallel_for(shards, [&](std::size_t s) {
        Rng rng(derive_seed(seed, s));
        const std::uint64_t begin = reps * s / shards;
        const std::uint64_t end = reps * (s + 1) / shards;
        Moments m;
        for (std::uint64_t r = begin; r < end; ++r) m.add(-std::log(survival_geq(d, sample(d, rng))));
        parts[s] = m;
    });
    Moments total;
    for (const auto& p : parts) total.merge(p);
    const double var = total.m2 / (total.count - 1.0);
    return GammaEstimate{.value = total.mean,
                         .method = GammaMethod::monte_carlo,
                         .std_error = std::sqrt(var / total.count)};
}

}  // namespace pareto
