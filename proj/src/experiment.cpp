#include "pareto/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <variant>

#include <fmt/chrono.h>
#include <fmt/format.h>

#include "pareto/errors.hpp"
#include "pareto/exact_bernoulli.hpp"
#include "pareto/exact_continuous.hpp"
#include "pareto/gamma_functional.hpp"
#include "pareto/montecarlo.hpp"
#include "pareto/rng.hpp"

namespace pareto {
namespace {

const std::vector<std::string> kContinuousMethods = {"rec",  "alt",   "alt-exact", "oracle",
                                                     "asym", "hwang", "mc-strong", "mc-weak"};
const std::vector<std::string> kBernoulliMethods = {"strong", "weak", "asym", "mc-strong", "mc-weak"};
const std::vector<std::string> kDiscreteMethods = {"mc-strong", "mc-weak"};

bool needs_exact_n(std::string_view method) {
    return method == "rec" || method == "alt" || method == "alt-exact" || method == "oracle" ||
           method.starts_with("mc-");
}

std::string join_numbers(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ' ';
        out += format_number(v[i]);
    }
    return out;
}

/// Opens output_path for writing ("-" or empty means stdout) and hands the stream to body.
template <typename Body>
void with_output(const std::string& path, Body&& body) {
    if (path.empty() || path == "-") {
        body(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream file(path);
    if (!file) throw Error(fmt::format("cannot open '{}' for writing", path));
    body(file);
    file.flush();
    if (!file) throw Error(fmt::format("write to '{}' failed", path));
}

std::uint64_t rounded_k(Rounding r, double x) {
    const double v = r == Rounding::ceil ? std::ceil(x) : std::floor(x);
    return static_cast<std::uint64_t>(std::max(1.0, v));
}

/// Smallest n >= 1 whose rounded c log n reaches `level`.
std::uint64_t first_n_at_level(Rounding r, double c, std::uint64_t level, std::uint64_t n_cap) {
    auto k_of = [&](std::uint64_t n) { return rounded_k(r, c * std::log(static_cast<double>(n))); };
    const double lvl = static_cast<double>(level);
    const double guess = r == Rounding::floor ? std::ceil(std::exp(lvl / c)) : std::floor(std::exp((lvl - 1.0) / c)) + 1;
    std::uint64_t n = static_cast<std::uint64_t>(std::clamp(guess, 1.0, static_cast<double>(n_cap) + 1.0));
    while (n > 1 && k_of(n - 1) >= level) --n;
    while (n <= n_cap && k_of(n) < level) ++n;
    return n;
}

}  // namespace

std::string format_number(double x) { return fmt::format("{}", x); }

void write_preamble(std::ostream& out, std::string_view command,
                    const std::vector<std::pair<std::string, std::string>>& config) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    out << fmt::format("# generated: {:%Y-%m-%dT%H:%M:%SZ}\n", fmt::gmtime(now));
    out << "# command: " << command << '\n';
    for (const auto& [key, value] : config) out << "# " << key << ": " << value << '\n';
}

std::string_view to_string(KRule r) noexcept {
    switch (r) {
        case KRule::ceil_c_logn: return "ceil_c_logn";
        case KRule::floor_c_logn: return "floor_c_logn";
        case KRule::c_over_gamma: return "c_over_gamma";
    }
    return "unknown";
}

KRule parse_k_rule(std::string_view text) {
    if (text == "ceil" || text == "ceil_c_logn") return KRule::ceil_c_logn;
    if (text == "floor" || text == "floor_c_logn") return KRule::floor_c_logn;
    if (text == "gamma" || text == "c_over_gamma") return KRule::c_over_gamma;
    throw ConfigError(fmt::format("unknown k rule '{}' (ceil|floor|gamma)", text));
}

std::uint64_t k_from_rule(KRule rule, double c, double log_n, double gamma) {
    switch (rule) {
        case KRule::ceil_c_logn: return rounded_k(Rounding::ceil, c * log_n);
        case KRule::floor_c_logn: return rounded_k(Rounding::floor, c * log_n);
        case KRule::c_over_gamma: return rounded_k(Rounding::ceil, c * log_n / gamma);
    }
    throw ConfigError("unknown k rule");
}

std::vector<std::string> sweep_methods_for(const DistributionSpec& d) {
    if (d.is_continuous()) return kContinuousMethods;
    if (std::holds_alternative<Bernoulli>(d.variant())) return kBernoulliMethods;
    return kDiscreteMethods;
}

void validate(const SweepConfig& cfg) {
    if (cfg.c_values.empty()) throw ConfigError("sweep needs at least one c value");
    if (cfg.n_grid.empty()) throw ConfigError("sweep needs a non-empty n grid");
    if (cfg.methods.empty()) throw ConfigError("sweep needs at least one method");
    for (double c : cfg.c_values) {
        if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError(fmt::format("c values must be positive, got {}", c));
    }
    const auto allowed = sweep_methods_for(cfg.dist);
    for (const auto& m : cfg.methods) {
        if (std::find(allowed.begin(), allowed.end(), m) == allowed.end()) {
            throw ConfigError(fmt::format("method '{}' does not apply to {}", m, cfg.dist.to_string()));
        }
        if (needs_exact_n(m)) {
            for (const auto& n : cfg.n_grid) {
                if (!n.is_exact()) throw ConfigError(fmt::format("method '{}' needs exact n, not log10(n)", m));
            }
        }
        if (m.starts_with("mc-") && cfg.mc_reps < 100) throw ConfigError("Monte Carlo methods need reps >= 100");
    }
}

std::vector<SweepRow> compute_sweep(const SweepConfig& cfg) {
    validate(cfg);
    const double gamma = gamma_closed_form(cfg.dist).value;
    const bool bernoulli = std::holds_alternative<Bernoulli>(cfg.dist.variant());
    const double p = bernoulli ? std::get<Bernoulli>(cfg.dist.variant()).p : 0.0;

    std::vector<SweepRow> rows;
    for (double c : cfg.c_values) {
        for (const auto& n : cfg.n_grid) {
            const std::uint64_t k = k_from_rule(cfg.k_rule, c, n.log(), gamma);
            for (const auto& m : cfg.methods) rows.push_back({c, k, n.log10(), m, 0.0, "ok"});
        }
    }

    const std::size_t per_c = cfg.n_grid.size() * cfg.methods.size();
    parallel_for(rows.size(), [&](std::size_t i) {
        SweepRow& row = rows[i];
        const HugeN& n = cfg.n_grid[(i % per_c) / cfg.methods.size()];
        const std::string& m = row.method;
        double log_p = 0.0;
        if (m == "rec") {
            log_p = p_recurrence(row.k, n.value()).log_p.log();
        } else if (m == "alt" || m == "alt-exact") {
            const auto r = p_alternating(row.k, n.value(),
                                         m == "alt" ? AlternatingMode::float_compensated
                                                    : AlternatingMode::exact_rational);
            log_p = r.log_p.log();
            if (r.unreliable) row.flag = "unreliable";
        } else if (m == "oracle") {
            log_p = p_nested_oracle(row.k, n.value()).log_p.log();
        } else if (m == "asym") {
            log_p = bernoulli ? p_bernoulli_fixed_k_asymptotic(row.k, n, p).log_p.log()
                              : p_fixed_k_asymptotic(row.k, n).log_p.log();
        } else if (m == "hwang") {
            log_p = p_hwang(row.k, n).log_p.log();
        } else if (m == "strong") {
            log_p = p_bernoulli(row.k, n, p).log_p.log();
        } else if (m == "weak") {
            log_p = q_bernoulli(row.k, n, p).log_p.log();
        } else {
            const auto kind = m == "mc-strong" ? FrontKind::strong : FrontKind::weak;
            const auto est = estimate_p(cfg.dist, row.k, n.value(), cfg.mc_reps, derive_seed(cfg.seed, i), kind);
            log_p = est.estimate > 0.0 ? std::log(est.estimate) : kNegInf;
        }
        row.log_p = log_p;
    });
    return rows;
}

void write_sweep_csv(const SweepConfig& cfg, const std::vector<SweepRow>& rows, std::ostream& out) {
    std::vector<double> grid;
    for (const auto& n : cfg.n_grid) grid.push_back(n.log10());
    std::string methods;
    for (const auto& m : cfg.methods) methods += (methods.empty() ? "" : " ") + m;
    const double gamma = gamma_closed_form(cfg.dist).value;
    write_preamble(out, "sweep",
                   {{"dist", cfg.dist.to_string()},
                    {"k_rule", std::string(to_string(cfg.k_rule))},
                    {"gamma", format_number(gamma)},
                    {"c_values", join_numbers(cfg.c_values)},
                    {"log10_n_grid", join_numbers(grid)},
                    {"methods", methods},
                    {"mc_reps", std::to_string(cfg.mc_reps)},
                    {"seed", std::to_string(cfg.seed)}});
    out << "c,k,log10_n,method,log_p,flag\n";
    for (const auto& r : rows) {
        out << format_number(r.c) << ',' << r.k << ',' << format_number(r.log10_n) << ',' << r.method << ','
            << format_number(r.log_p) << ',' << r.flag << '\n';
    }
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
    auto rows = compute_sweep(cfg);
    with_output(cfg.output_path, [&](std::ostream& out) { write_sweep_csv(cfg, rows, out); });
    return rows;
}

FigurePanel parse_panel(std::string_view text) {
    if (text == "a") return FigurePanel::a;
    if (text == "b") return FigurePanel::b;
    if (text == "c") return FigurePanel::c;
    throw ConfigError(fmt::format("unknown figure panel '{}' (a|b|c)", text));
}

Rounding parse_rounding(std::string_view text) {
    if (text == "ceil") return Rounding::ceil;
    if (text == "floor") return Rounding::floor;
    throw ConfigError(fmt::format("unknown rounding '{}' (ceil|floor)", text));
}

std::vector<PanelARow> figure_panel_a() {
    std::vector<std::uint64_t> grid;
    for (int j = 0; j <= 20; ++j) {
        const auto n = static_cast<std::uint64_t>(std::llround(std::pow(10.0, j / 4.0)));
        if (grid.empty() || grid.back() != n) grid.push_back(n);
    }
    std::vector<KNQuery> queries;
    for (std::uint64_t k = 1; k <= 5; ++k) {
        for (auto n : grid) queries.push_back({k, n});
    }
    const auto cont = p_recurrence_batch(queries);
    std::vector<PanelARow> rows;
    for (std::size_t i = 0; i < queries.size(); ++i) {
        const auto [k, n] = queries[i];
        const HugeN hn = HugeN::exact(n);
        rows.push_back({k, n, cont[i].value, q_bernoulli(k, hn, 0.5).value, p_bernoulli(k, hn, 0.5).value});
    }
    return rows;
}

std::vector<PanelBRow> figure_panel_b(Rounding rounding) {
    const std::vector<double> cs = {0.6, 0.8, 1.0, 1.2, 1.4};
    const auto n_cap = static_cast<std::uint64_t>(kPanelBMaxN);
    std::vector<PanelBRow> rows;
    std::vector<KNQuery> queries;
    for (double c : cs) {
        std::uint64_t last = 0;
        for (std::uint64_t level = 1;; ++level) {
            const std::uint64_t n = first_n_at_level(rounding, c, level, n_cap);
            if (n > n_cap) break;
            if (n == last) continue;
            last = n;
            const std::uint64_t k = rounded_k(rounding, c * std::log(static_cast<double>(n)));
            rows.push_back({c, n, k, 0.0});
            queries.push_back({k, n});
        }
    }
    const auto values = p_recurrence_batch(queries);
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i].log_p = values[i].log_p.log();
    return rows;
}

std::vector<PanelCRow> figure_panel_c(Rounding rounding) {
    const std::vector<double> cs = {0.5, 0.75, 1.0, 1.25, 1.5};
    const double gamma = gamma_closed_form(DistributionSpec::bernoulli(0.5)).value;
    std::vector<PanelCRow> rows;
    for (double c : cs) {
        for (int l10 = 10; l10 <= 130; l10 += 10) {
            const HugeN n = HugeN::from_log10(l10);
            const std::uint64_t k = rounded_k(rounding, c * n.log() / gamma);
            rows.push_back({c, static_cast<double>(l10), k, 0.0, 0.0});
        }
    }
    parallel_for(rows.size(), [&](std::size_t i) {
        const HugeN n = HugeN::from_log10(rows[i].log10_n);
        rows[i].log_p_strong = p_bernoulli(rows[i].k, n, 0.5).log_p.log();
        rows[i].log_q_weak = q_bernoulli(rows[i].k, n, 0.5).log_p.log();
    });
    return rows;
}

void write_figure(FigurePanel panel, std::uint64_t seed, Rounding rounding, std::ostream& out) {
    const std::string round_name = rounding == Rounding::ceil ? "ceil" : "floor";
    switch (panel) {
        case FigurePanel::a: {
            const auto rows = figure_panel_a();
            write_preamble(out, "figure",
                           {{"panel", "a"},
                            {"series", "continuous p, Bernoulli(0.5) weak q and strong p; k = 1..5"},
                            {"n_grid", "round(10^(j/4)), j = 0..20"},
                            {"seed", std::to_string(seed)}});
            out << "k,n,p_cont,q_bern_0.5,p_bern_0.5\n";
            for (const auto& r : rows) {
                out << r.k << ',' << r.n << ',' << format_number(r.p_cont) << ',' << format_number(r.q_bern)
                    << ',' << format_number(r.p_bern) << '\n';
            }
            break;
        }
        case FigurePanel::b: {
            const auto rows = figure_panel_b(rounding);
            write_preamble(out, "figure",
                           {{"panel", "b"},
                            {"method", "recurrence"},
                            {"k_rule", fmt::format("k = max(1, {}(c * log(n)))", round_name)},
                            {"n_grid", "first n reaching each k level, n <= 1e7"},
                            {"seed", std::to_string(seed)}});
            out << "c,n,k,log_p\n";
            for (const auto& r : rows) {
                out << format_number(r.c) << ',' << r.n << ',' << r.k << ',' << format_number(r.log_p) << '\n';
            }
            break;
        }
        case FigurePanel::c: {
            const auto rows = figure_panel_c(rounding);
            const double gamma = gamma_closed_form(DistributionSpec::bernoulli(0.5)).value;
            write_preamble(out, "figure",
                           {{"panel", "c"},
                            {"dist", "bern:0.5"},
                            {"k_rule", fmt::format("k = max(1, {}(c * log(n) / gamma)), gamma = {}", round_name,
                                                   format_number(gamma))},
                            {"transition", "c = 1 (k / log n = 1 / gamma)"},
                            {"seed", std::to_string(seed)}});
            out << "c,log10_n,k,log_p_strong,log_q_weak\n";
            for (const auto& r : rows) {
                out << format_number(r.c) << ',' << format_number(r.log10_n) << ',' << r.k << ','
                    << format_number(r.log_p_strong) << ',' << format_number(r.log_q_weak) << '\n';
            }
            break;
        }
    }
}

void run_figure(FigurePanel panel, std::uint64_t seed, const std::string& output_path, Rounding rounding) {
    with_output(output_path, [&](std::ostream& out) { write_figure(panel, seed, rounding, out); });
}

}  // namespace pareto
