#pragma once

// gamma = -E log S(X), the constant that places the phase transition of the
// maximum probability at k ~ log(n) / gamma. Three independent routes.

#include <cstdint>
#include <optional>
#include <string_view>

#include "pareto/distributions.hpp"

namespace pareto {

enum class GammaMethod { closed_form, quadrature, monte_carlo };

std::string_view to_string(GammaMethod m) noexcept;

struct GammaEstimate {
    double value = 0.0;
    GammaMethod method = GammaMethod::closed_form;
    std::optional<double> std_error;  // present iff method == monte_carlo
};

/// 1 for continuous laws, -p log p for Bernoulli(p), sum_i p_i (-log S(v_i))
/// for a finite discrete law.
GammaEstimate gamma_closed_form(const DistributionSpec& d);

/// Integrates P(X > S^{-1}(u)) / u over u in (0,1) (the t-integral after
/// u = e^{-t}). Discrete laws are integrated exactly piece by piece; continuous
/// laws go through adaptive Gauss-Kronrod. Throws ConvergenceError when the
/// error estimate exceeds tol.
GammaEstimate gamma_quadrature(const DistributionSpec& d, double tol = 1e-10);

/// Sample mean of -log S(X_i) over reps draws with its standard error.
/// Draws are split into a fixed number of shards with derived seeds, so the
/// result depends on (reps, seed) only.
GammaEstimate gamma_monte_carlo(const DistributionSpec& d, std::uint64_t reps, std::uint64_t seed);

}  // namespace pareto
