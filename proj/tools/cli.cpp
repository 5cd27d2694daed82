#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "pareto/errors.hpp"
#include "pareto/exact_bernoulli.hpp"
#include "pareto/exact_continuous.hpp"
#include "pareto/experiment.hpp"
#include "pareto/gamma_functional.hpp"
#include "pareto/montecarlo.hpp"
#include "pareto/rng.hpp"

#ifndef PARETO_VERSION
#define PARETO_VERSION "0.0.0"
#endif

namespace pareto::cli {
namespace {

const CLI::Range kCount(std::uint64_t{1}, std::numeric_limits<std::uint64_t>::max(), "COUNT >= 1");

std::string version_text() {
    return fmt::format("pareto {} (C++{}, {} {}.{}, {})", PARETO_VERSION, __cplusplus / 100 % 100,
#if defined(__clang__)
                       "clang", __clang_major__, __clang_minor__,
#else
                       "gcc", __GNUC__, __GNUC_MINOR__,
#endif
#ifdef NDEBUG
                       "release"
#else
                       "debug"
#endif
    );
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    const char* env = std::getenv("PARETO_SEED");
    if (env == nullptr || *env == '\0') return kDefaultSeed;
    std::uint64_t v = 0;
    const char* end = env + std::char_traits<char>::length(env);
    const auto [ptr, ec] = std::from_chars(env, end, v);
    if (ec != std::errc{} || ptr != end) throw ConfigError(fmt::format("PARETO_SEED must be an unsigned integer, got '{}'", env));
    return v;
}

std::string seed_source(const std::optional<std::uint64_t>& flag) {
    if (flag) return "--seed";
    const char* env = std::getenv("PARETO_SEED");
    return env != nullptr && *env != '\0' ? "PARETO_SEED" : "default";
}

void emit(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& body) {
    if (path.empty() || path == "-") {
        body(fallback);
        return;
    }
    std::ofstream file(path);
    if (!file) throw Error(fmt::format("cannot open '{}' for writing", path));
    body(file);
    file.flush();
    if (!file) throw Error(fmt::format("write to '{}' failed", path));
}

HugeN resolve_n(const std::optional<std::uint64_t>& n, const std::optional<double>& log10n) {
    if (n && log10n) throw ConfigError("give either --n or --log10n, not both");
    if (n) {
        if (*n < 1 || *n > HugeN::kMaxExact) throw ConfigError(fmt::format("--n must lie in [1, 2^53], got {}", *n));
        return HugeN::exact(*n);
    }
    if (log10n) return HugeN::from_log10(*log10n);
    throw ConfigError("one of --n or --log10n is required");
}

std::string n_cell(const HugeN& n) {
    if (n.is_exact()) return std::to_string(n.value());
    const double v = std::pow(10.0, n.log10());
    return std::isfinite(v) ? format_number(v) : fmt::format("10^{}", format_number(n.log10()));
}

template <typename T>
std::string opt_string(const std::optional<T>& v) {
    if (!v) return "";
    if constexpr (std::is_floating_point_v<T>) return format_number(*v);
    else return std::to_string(*v);
}

struct Globals {
    bool strict = false;
};

// gamma ---------------------------------------------------------------------

struct GammaArgs {
    std::string dist;
    std::string method = "closed";
    std::uint64_t reps = 100'000;
    double tol = 1e-10;
    std::optional<std::uint64_t> seed;
};

int run_gamma(const GammaArgs& a, std::ostream& out) {
    const DistributionSpec d = parse_distribution(a.dist);
    const std::uint64_t seed = resolve_seed(a.seed);
    GammaEstimate g;
    if (a.method == "closed") g = gamma_closed_form(d);
    else if (a.method == "quad") g = gamma_quadrature(d, a.tol);
    else g = gamma_monte_carlo(d, a.reps, seed);

    std::vector<std::pair<std::string, std::string>> cfg = {{"dist", d.to_string()}, {"method", a.method}};
    if (a.method == "quad") cfg.emplace_back("tol", format_number(a.tol));
    if (a.method == "mc") {
        cfg.emplace_back("reps", std::to_string(a.reps));
        cfg.emplace_back("seed", std::to_string(seed));
        cfg.emplace_back("seed_source", seed_source(a.seed));
    }
    write_preamble(out, "gamma", cfg);
    out << "method,value,std_error\n";
    out << a.method << ',' << format_number(g.value) << ',' << opt_string(g.std_error) << '\n';
    return kExitOk;
}

// exact ---------------------------------------------------------------------

struct ExactArgs {
    std::uint64_t k = 1;
    std::optional<std::uint64_t> n;
    std::optional<double> log10n;
    std::string method = "rec";
};

int run_exact(const ExactArgs& a, const Globals& g, std::ostream& out) {
    const HugeN n = resolve_n(a.n, a.log10n);
    const bool log_ok = a.method == "asym" || a.method == "hwang";
    if (!n.is_exact() && !log_ok) throw ConfigError(fmt::format("method '{}' needs an exact --n", a.method));

    ContinuousProbResult r;
    if (a.method == "rec") r = p_recurrence(a.k, n.value());
    else if (a.method == "alt") r = p_alternating(a.k, n.value(), AlternatingMode::float_compensated);
    else if (a.method == "alt-exact") r = p_alternating(a.k, n.value(), AlternatingMode::exact_rational);
    else if (a.method == "oracle") r = p_nested_oracle(a.k, n.value());
    else if (a.method == "asym") r = p_fixed_k_asymptotic(a.k, n);
    else r = p_hwang(a.k, n);

    std::vector<std::pair<std::string, std::string>> cfg = {
        {"k", std::to_string(a.k)}, {"n", n_cell(n)}, {"method", a.method}};
    if (a.method == "alt") cfg.emplace_back("cancellation_ulps", format_number(r.cancellation_ulps));
    write_preamble(out, "exact", cfg);
    out << "k,n,method,regime,log_p,flag\n";
    out << a.k << ',' << n_cell(n) << ',' << a.method << ',' << (r.regime ? to_string(*r.regime) : "") << ','
        << format_number(r.log_p.log()) << ',' << (r.unreliable ? "unreliable" : "ok") << '\n';
    return g.strict && r.unreliable ? kExitNumeric : kExitOk;
}

// bernoulli -----------------------------------------------------------------

struct BernoulliArgs {
    std::uint64_t k = 1;
    std::optional<std::uint64_t> n;
    std::optional<double> log10n;
    double p = 0.5;
    std::string kind = "strong";
};

int run_bernoulli(const BernoulliArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
    const HugeN n = resolve_n(a.n, a.log10n);
    if ((a.kind == "pair" || a.kind == "var") && a.k > kPairCostWarningK) {
        err << fmt::format("warning: {} costs O(k^3) terms; k = {} may be slow\n", a.kind, a.k);
    }
    BernoulliProbResult r;
    double cell = 0.0;
    if (a.kind == "var") {
        if (!n.is_exact()) throw ConfigError("kind 'var' needs an exact --n");
        r = variance_front_size(a.k, n.value(), a.p);
        cell = r.value;
    } else {
        if (a.kind == "strong") r = p_bernoulli(a.k, n, a.p);
        else if (a.kind == "weak") r = q_bernoulli(a.k, n, a.p);
        else if (a.kind == "pair") r = pair_prob(a.k, n, a.p);
        else r = p_bernoulli_fixed_k_asymptotic(a.k, n, a.p);
        cell = r.log_p.log();
    }
    write_preamble(out, "bernoulli",
                   {{"k", std::to_string(a.k)}, {"n", n_cell(n)}, {"p", format_number(a.p)}, {"kind", a.kind},
                    {"value_column", a.kind == "var" ? "variance of the strong front size" : "natural log of the probability"}});
    out << "k,log10_n,p,kind,log_p_or_value,flag\n";
    out << a.k << ',' << format_number(n.log10()) << ',' << format_number(a.p) << ',' << a.kind << ','
        << format_number(cell) << ',' << (r.cancellation ? "cancellation" : "ok") << '\n';
    return g.strict && r.cancellation ? kExitNumeric : kExitOk;
}

// simulate ------------------------------------------------------------------

struct SimulateArgs {
    std::string dist = "uniform";
    std::uint64_t k = 1;
    std::uint64_t n = 2;
    std::uint64_t reps = 1000;
    std::optional<std::uint64_t> seed;
    std::string kind = "strong";
    std::string stat = "p";
    double alpha = 0.5;
    std::optional<std::uint64_t> k_max;
};

int run_simulate(const SimulateArgs& a, std::ostream& out) {
    const DistributionSpec d = parse_distribution(a.dist);
    const std::uint64_t seed = resolve_seed(a.seed);
    if (a.reps < 1) throw ConfigError("--reps must be >= 1");

    EstimateWithError e;
    std::string stat = a.stat;
    std::vector<std::pair<std::string, std::string>> cfg = {{"stat", a.stat}};
    std::uint64_t k_col = a.k;
    if (a.stat == "p") {
        if (a.reps < 100) throw ConfigError("--stat p needs --reps >= 100");
        const auto kind = a.kind == "strong" ? FrontKind::strong : FrontKind::weak;
        e = estimate_p(d, a.k, a.n, a.reps, seed, kind);
        stat = "p_" + a.kind;
        cfg.insert(cfg.end(), {{"dist", d.to_string()}, {"kind", a.kind}});
    } else if (a.stat == "M-ratio") {
        const std::uint64_t k_max = a.k_max.value_or(a.k);
        const auto summary = estimate_M_over_logn(d, k_max, a.n, a.reps, seed);
        k_col = summary.width;
        e = summary.median;
        cfg.insert(cfg.end(), {{"dist", d.to_string()},
                               {"estimate", "median of max prefix-domination lag / log n"},
                               {"std_error", "bootstrap (200 resamples)"},
                               {"k_max", std::to_string(k_max)},
                               {"final_width", std::to_string(summary.width)}});
    } else {
        const auto ratios = ferguson_max_ratio(a.alpha, a.n, a.reps, seed);
        e = median_with_bootstrap(ratios, derive_seed(seed, a.reps));
        cfg.insert(cfg.end(), {{"alpha", format_number(a.alpha)},
                               {"estimate", "median of max of n-1 geometric(alpha) / log n"},
                               {"limit", format_number(-1.0 / std::log1p(-a.alpha))}});
    }
    cfg.emplace_back("seed_source", seed_source(a.seed));
    write_preamble(out, "simulate", cfg);
    out << "stat,k,n,estimate,std_error,reps,seed\n";
    out << stat << ',' << k_col << ',' << a.n << ',' << format_number(e.estimate) << ',' << format_number(e.std_error)
        << ',' << a.reps << ',' << seed << '\n';
    return kExitOk;
}

// sweep ---------------------------------------------------------------------

struct SweepArgs {
    std::string dist = "uniform";
    std::vector<double> c;
    std::vector<std::uint64_t> n_grid;
    std::vector<double> log10n_grid;
    std::string k_rule = "ceil";
    std::vector<std::string> methods;
    std::size_t reps = 10'000;
    std::string output = "-";
    std::optional<std::uint64_t> seed;
};

int run_sweep_cmd(const SweepArgs& a, const Globals& g, std::ostream& out) {
    SweepConfig cfg;
    cfg.dist = parse_distribution(a.dist);
    cfg.c_values = a.c;
    if (!a.n_grid.empty() && !a.log10n_grid.empty()) throw ConfigError("give either --n-grid or --log10n-grid");
    for (auto n : a.n_grid) cfg.n_grid.push_back(resolve_n(n, std::nullopt));
    for (double l : a.log10n_grid) cfg.n_grid.push_back(HugeN::from_log10(l));
    cfg.k_rule = parse_k_rule(a.k_rule);
    cfg.methods = a.methods;
    cfg.seed = resolve_seed(a.seed);
    cfg.output_path = a.output;
    cfg.mc_reps = a.reps;

    const auto rows = compute_sweep(cfg);
    emit(a.output, out, [&](std::ostream& o) { write_sweep_csv(cfg, rows, o); });
    const bool flagged = std::any_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.flag != "ok"; });
    return g.strict && flagged ? kExitNumeric : kExitOk;
}

// figure --------------------------------------------------------------------

struct FigureArgs {
    std::string panel;
    std::string output = "-";
    std::string rounding = "ceil";
    std::optional<std::uint64_t> seed;
};

int run_figure_cmd(const FigureArgs& a, std::ostream& out) {
    const FigurePanel panel = parse_panel(a.panel);
    const Rounding rounding = parse_rounding(a.rounding);
    const std::uint64_t seed = resolve_seed(a.seed);
    emit(a.output, out, [&](std::ostream& o) { write_figure(panel, seed, rounding, o); });
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Pareto-front maximum probabilities: exact values, asymptotics and simulation", "pareto"};
    app.set_version_flag("--version", version_text());
    app.require_subcommand(1);
    app.fallthrough();
    app.failure_message(CLI::FailureMessage::help);

    Globals globals;
    app.add_flag("--strict", globals.strict, "Exit with code 3 when a result is flagged unreliable");

    GammaArgs ga;
    auto* gamma = app.add_subcommand("gamma", "gamma = -E log P(X >= X') for a coordinate law");
    gamma->add_option("--dist", ga.dist, "uniform | exp:<rate> | bern:<p> | disc:<v1:p1,v2:p2,...>")->required();
    gamma->add_option("--method", ga.method)->check(CLI::IsMember({"closed", "quad", "mc"}))->capture_default_str();
    gamma->add_option("--reps", ga.reps, "Monte Carlo draws")->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 40))->capture_default_str();
    gamma->add_option("--tol", ga.tol, "Quadrature tolerance")->check(CLI::PositiveNumber)->capture_default_str();
    gamma->add_option("--seed", ga.seed);

    ExactArgs ea;
    auto* exact = app.add_subcommand("exact", "Maximum probability for continuous coordinates");
    exact->add_option("--k", ea.k)->required()->check(kCount);
    exact->add_option("--n", ea.n);
    exact->add_option("--log10n", ea.log10n, "log10(n), asym and hwang only")->check(CLI::NonNegativeNumber);
    exact->add_option("--method", ea.method)
        ->check(CLI::IsMember({"rec", "alt", "alt-exact", "oracle", "asym", "hwang"}))
        ->capture_default_str();

    BernoulliArgs ba;
    auto* bern = app.add_subcommand("bernoulli", "Exact maximum probabilities for Bernoulli(p) coordinates");
    bern->add_option("--k", ba.k)->required()->check(kCount);
    bern->add_option("--n", ba.n);
    bern->add_option("--log10n", ba.log10n)->check(CLI::NonNegativeNumber);
    bern->add_option("--p", ba.p)->required()->check(CLI::Range(0.0, 1.0));
    bern->add_option("--kind", ba.kind)
        ->check(CLI::IsMember({"strong", "weak", "pair", "var", "asym"}))
        ->capture_default_str();

    SimulateArgs sa;
    auto* sim = app.add_subcommand("simulate", "Monte Carlo estimates");
    sim->add_option("--dist", sa.dist)->capture_default_str();
    sim->add_option("--k", sa.k)->check(kCount)->capture_default_str();
    sim->add_option("--n", sa.n)->check(kCount)->capture_default_str();
    sim->add_option("--reps", sa.reps)->check(kCount)->capture_default_str();
    sim->add_option("--seed", sa.seed);
    sim->add_option("--kind", sa.kind)->check(CLI::IsMember({"strong", "weak"}))->capture_default_str();
    sim->add_option("--stat", sa.stat)->check(CLI::IsMember({"p", "M-ratio", "ferguson"}))->capture_default_str();
    sim->add_option("--alpha", sa.alpha, "Geometric success probability (ferguson)")->capture_default_str();
    sim->add_option("--k-max", sa.k_max, "Initial column budget (M-ratio); defaults to --k");

    SweepArgs wa;
    auto* sweep = app.add_subcommand("sweep", "Maximum probability along k = rule(c, n) over a grid");
    sweep->add_option("--dist", wa.dist)->capture_default_str();
    sweep->add_option("--c", wa.c, "c values")->required()->delimiter(',');
    sweep->add_option("--n-grid", wa.n_grid)->delimiter(',');
    sweep->add_option("--log10n-grid", wa.log10n_grid)->delimiter(',');
    sweep->add_option("--k-rule", wa.k_rule, "ceil | floor | gamma")->capture_default_str();
    sweep->add_option("--methods", wa.methods)->required()->delimiter(',');
    sweep->add_option("--reps", wa.reps, "Replications for mc-* methods")->capture_default_str();
    sweep->add_option("--output", wa.output)->capture_default_str();
    sweep->add_option("--seed", wa.seed);

    FigureArgs fa;
    auto* fig = app.add_subcommand("figure", "Data for the three figure panels");
    fig->add_option("--panel", fa.panel)->required()->check(CLI::IsMember({"a", "b", "c"}));
    fig->add_option("--output", fa.output)->capture_default_str();
    fig->add_option("--rounding", fa.rounding)->check(CLI::IsMember({"ceil", "floor"}))->capture_default_str();
    fig->add_option("--seed", fa.seed);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*gamma) return run_gamma(ga, out);
        if (*exact) return run_exact(ea, globals, out);
        if (*bern) return run_bernoulli(ba, globals, out, err);
        if (*sim) return run_simulate(sa, out);
        if (*sweep) return run_sweep_cmd(wa, globals, out);
        return run_figure_cmd(fa, out);
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << fmt::format(" (best estimate {}, error estimate {})\n",
                                                     format_number(e.best_estimate()),
                                                     format_number(e.error_estimate()));
        return kExitNumeric;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ResourceError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    }
}

}  // namespace pareto::cli
