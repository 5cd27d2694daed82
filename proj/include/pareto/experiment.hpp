#pragma once

// Phase-transition sweeps and the three figure panels, emitted as
// self-describing CSV (a `#` comment block, a header row, data rows).

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pareto/distributions.hpp"
#include "pareto/huge_n.hpp"

namespace pareto {

/// k from (c, log n): ceil(c log n), floor(c log n), or ceil(c log n / gamma).
/// Always clamped to k >= 1.
enum class KRule { ceil_c_logn, floor_c_logn, c_over_gamma };

std::string_view to_string(KRule r) noexcept;
KRule parse_k_rule(std::string_view text);

std::uint64_t k_from_rule(KRule rule, double c, double log_n, double gamma = 1.0);

struct SweepConfig {
    DistributionSpec dist = DistributionSpec::uniform();
    std::vector<double> c_values;
    std::vector<HugeN> n_grid;
    KRule k_rule = KRule::ceil_c_logn;
    std::vector<std::string> methods;
    std::uint64_t seed = 0;
    std::string output_path;  // "-" or empty writes to stdout
    std::size_t mc_reps = 10'000;
};

/// Method names accepted for a given law.
std::vector<std::string> sweep_methods_for(const DistributionSpec& d);

/// Throws ConfigError on empty grids, non-positive c, unknown methods, methods
/// that do not apply to the law, or n given as log10 where an exact count is needed.
void validate(const SweepConfig& cfg);

struct SweepRow {
    double c = 0.0;
    std::uint64_t k = 0;
    double log10_n = 0.0;
    std::string method;
    double log_p = 0.0;
    std::string flag;  // ok | unreliable
};

/// Rows in config order: c outermost, then n, then method.
std::vector<SweepRow> compute_sweep(const SweepConfig& cfg);
void write_sweep_csv(const SweepConfig& cfg, const std::vector<SweepRow>& rows, std::ostream& out);
/// validate + compute + write to cfg.output_path.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg);

enum class FigurePanel { a, b, c };
enum class Rounding { ceil, floor };

FigurePanel parse_panel(std::string_view text);
Rounding parse_rounding(std::string_view text);

struct PanelARow {
    std::uint64_t k = 0;
    std::uint64_t n = 0;
    double p_cont = 0.0;
    double q_bern = 0.0;
    double p_bern = 0.0;
};

struct PanelBRow {
    double c = 0.0;
    std::uint64_t n = 0;
    std::uint64_t k = 0;
    double log_p = 0.0;
};

struct PanelCRow {
    double c = 0.0;
    double log10_n = 0.0;
    std::uint64_t k = 0;
    double log_p_strong = 0.0;
    double log_q_weak = 0.0;
};

inline constexpr double kPanelBMaxN = 1e7;

/// Continuous p, Bernoulli(0.5) weak and strong probabilities for k = 1..5 on
/// a log grid of n up to 10^5.
std::vector<PanelARow> figure_panel_a();
/// log p_{k_n, n} with k_n = round(c log n) for c in {0.6, 0.8, 1.0, 1.2, 1.4},
/// one point per k level at the first n reaching it, n <= 10^7.
std::vector<PanelBRow> figure_panel_b(Rounding rounding);
/// Bernoulli(0.5) log p and log q with k_n = round(c log n / gamma) for
/// c in {0.5, 0.75, 1.0, 1.25, 1.5} and log10 n in {10, 20, ..., 130}.
std::vector<PanelCRow> figure_panel_c(Rounding rounding);

void write_figure(FigurePanel panel, std::uint64_t seed, Rounding rounding, std::ostream& out);
/// write_figure to output_path ("-" or empty for stdout).
void run_figure(FigurePanel panel, std::uint64_t seed, const std::string& output_path,
                Rounding rounding = Rounding::ceil);

/// Shortest round-trip representation used in every CSV cell.
std::string format_number(double x);

/// Writes the standard `#` preamble: a timestamp line followed by key: value lines.
void write_preamble(std::ostream& out, std::string_view command,
                    const std::vector<std::pair<std::string, std::string>>& config);

}  // namespace pareto
