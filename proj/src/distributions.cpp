#include "pareto/distributions.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "pareto/errors.hpp"

namespace pareto {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double parse_real(std::string_view s, std::string_view what) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end || s.empty()) {
        throw ConfigError(fmt::format("cannot parse {} '{}'", what, s));
    }
    return v;
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

}  // namespace

DistributionSpec::DistributionSpec(Variant v) : v_(std::move(v)) {
    std::visit(Overloaded{
                   [](const ContinuousUniform01&) {},
                   [](const Exponential& e) {
                       require(std::isfinite(e.rate) && e.rate > 0.0, "exponential rate must be > 0");
                   },
                   [this](const Bernoulli& b) {
                       require(b.p > 0.0 && b.p < 1.0, "bernoulli p must lie strictly inside (0,1)");
                       support_ = {0.0, 1.0};
                       masses_ = {1.0 - b.p, b.p};
                   },
                   [this](const FiniteDiscrete& f) {
                       require(f.values.size() >= 2, "discrete law needs at least two atoms");
                       require(f.values.size() == f.probs.size(), "discrete values/probs length mismatch");
                       double total = 0.0;
                       for (std::size_t i = 0; i < f.values.size(); ++i) {
                           require(std::isfinite(f.values[i]), "discrete values must be finite");
                           require(i == 0 || f.values[i] > f.values[i - 1],
                                   "discrete values must be strictly increasing");
                           require(f.probs[i] > 0.0, "discrete probs must be > 0");
                           total += f.probs[i];
                       }
                       require(std::fabs(total - 1.0) <= 1e-12, "discrete probs must sum to 1");
                       support_ = f.values;
                       masses_ = f.probs;
                   },
               },
               v_);

    if (!support_.empty()) {
        const std::size_t m = masses_.size();
        cum_.resize(m);
        std::partial_sum(masses_.begin(), masses_.end(), cum_.begin());
        cum_.back() = 1.0;
        tail_.assign(m + 1, 0.0);
        for (std::size_t j = m; j-- > 0;) tail_[j] = tail_[j + 1] + masses_[j];
        tail_[0] = 1.0;
    }
}

bool DistributionSpec::is_continuous() const noexcept { return support_.empty(); }

std::string DistributionSpec::to_string() const {
    return std::visit(Overloaded{
                          [](const ContinuousUniform01&) { return std::string("uniform"); },
                          [](const Exponential& e) { return fmt::format("exp:{}", e.rate); },
                          [](const Bernoulli& b) { return fmt::format("bern:{}", b.p); },
                          [](const FiniteDiscrete& f) {
                              std::string out = "disc:";
                              for (std::size_t i = 0; i < f.values.size(); ++i) {
                                  if (i) out += ',';
                                  out += fmt::format("{}:{}", f.values[i], f.probs[i]);
                              }
                              return out;
                          },
                      },
                      v_);
}

DistributionSpec parse_distribution(std::string_view text) {
    if (text == "uniform") return DistributionSpec::uniform();
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw ConfigError(fmt::format("unknown distribution '{}'", text));
    }
    const auto family = text.substr(0, colon);
    const auto rest = text.substr(colon + 1);
    if (family == "exp") return DistributionSpec::exponential(parse_real(rest, "exponential rate"));
    if (family == "bern") return DistributionSpec::bernoulli(parse_real(rest, "bernoulli p"));
    if (family == "disc") {
        std::vector<double> values;
        std::vector<double> probs;
        std::size_t pos = 0;
        while (pos <= rest.size()) {
            auto comma = rest.find(',', pos);
            if (comma == std::string_view::npos) comma = rest.size();
            const auto item = rest.substr(pos, comma - pos);
            const auto sep = item.find(':');
            if (sep == std::string_view::npos) {
                throw ConfigError(fmt::format("discrete atom '{}' must be value:prob", item));
            }
            values.push_back(parse_real(item.substr(0, sep), "discrete value"));
            probs.push_back(parse_real(item.substr(sep + 1), "discrete probability"));
            pos = comma + 1;
        }
        return DistributionSpec::discrete(std::move(values), std::move(probs));
    }
    throw ConfigError(fmt::format("unknown distribution family '{}'", family));
}

double cdf(const DistributionSpec& d, double x) {
    return std::visit(Overloaded{
                          [&](const ContinuousUniform01&) { return std::clamp(x, 0.0, 1.0); },
                          [&](const Exponential& e) { return x <= 0.0 ? 0.0 : -std::expm1(-e.rate * x); },
                          [&](const auto&) {
                              const auto& v = d.support_;
                              // number of atoms <= x
                              const auto count = static_cast<std::size_t>(
                                  std::upper_bound(v.begin(), v.end(), x) - v.begin());
                              return count == 0 ? 0.0 : d.cum_[count - 1];
                          },
                      },
                      d.v_);
}

double survival_geq(const DistributionSpec& d, double x) {
    return std::visit(Overloaded{
                          [&](const ContinuousUniform01&) { return 1.0 - std::clamp(x, 0.0, 1.0); },
                          [&](const Exponential& e) { return x <= 0.0 ? 1.0 : std::exp(-e.rate * x); },
                          [&](const auto&) {
                              const auto& v = d.support_;
                              // first atom >= x
                              const auto j = static_cast<std::size_t>(
                                  std::lower_bound(v.begin(), v.end(), x) - v.begin());
                              return d.tail_[j];
                          },
                      },
                      d.v_);
}

double survival_gt(const DistributionSpec& d, double x) {
    if (d.is_continuous()) return survival_geq(d, x);
    const auto& v = d.support_;
    const auto j = static_cast<std::size_t>(std::upper_bound(v.begin(), v.end(), x) - v.begin());
    return d.tail_[j];
}

double survival_pseudo_inverse(const DistributionSpec& d, double y) {
    if (!(y > 0.0 && y < 1.0)) {
        throw DomainError(fmt::format("survival pseudo-inverse needs y in (0,1), got {}", y));
    }
    return std::visit(Overloaded{
                          [&](const ContinuousUniform01&) { return 1.0 - y; },
                          [&](const Exponential& e) { return -std::log(y) / e.rate; },
                          [&](const auto&) {
                              // S equals tail_[j] on (v[j-1], v[j]]; the set {S <= y} is
                              // (v[j-1], inf) for the first j >= 1 with tail_[j] <= y.
                              std::size_t j = 1;
                              while (d.tail_[j] > y) ++j;
                              return d.support_[j - 1];
                          },
                      },
                      d.v_);
}

double quantile(const DistributionSpec& d, double u) {
    if (!(u > 0.0 && u < 1.0)) {
        throw DomainError(fmt::format("quantile needs u in (0,1), got {}", u));
    }
    return std::visit(Overloaded{
                          [&](const ContinuousUniform01&) { return u; },
                          [&](const Exponential& e) { return -std::log1p(-u) / e.rate; },
                          [&](const auto&) {
                              const auto& c = d.cum_;
                              const auto i = static_cast<std::size_t>(
                                  std::lower_bound(c.begin(), c.end(), u) - c.begin());
                              return d.support_[std::min(i, c.size() - 1)];
                          },
                      },
                      d.v_);
}

}  // namespace pareto
