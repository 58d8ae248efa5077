#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "CLI11.hpp"

namespace rfpe::cli {
namespace {

template <class E>
using NameTable = std::vector<std::pair<std::string, E>>;

const NameTable<UpdateVariant> kUpdateNames{{"incremental", UpdateVariant::incremental},
                                            {"circular", UpdateVariant::circular}};
const NameTable<ThetaConvention> kThetaNames{{"prior", ThetaConvention::prior},
                                             {"pseudocode", ThetaConvention::pseudocode}};
const NameTable<CapMode> kCapNames{{"deterministic", CapMode::deterministic}, {"stochastic", CapMode::stochastic}};
const NameTable<SlopeTrigger> kTriggerNames{{"stalled", SlopeTrigger::stalled}, {"rising", SlopeTrigger::rising}};
const NameTable<CountMode> kCountNames{{"every-step", CountMode::every_step},
                                       {"passes", CountMode::passes},
                                       {"consecutive-passes", CountMode::consecutive_passes}};
const NameTable<ModelSelection> kSelectionNames{{"latest", ModelSelection::latest},
                                                {"smallest-sigma", ModelSelection::smallest_sigma},
                                                {"smallest-sigma-segment", ModelSelection::smallest_sigma_segment}};

template <class E>
std::vector<std::string> names(const NameTable<E>& table) {
    std::vector<std::string> out;
    for (const auto& [name, value] : table) out.push_back(name);
    return out;
}

template <class E>
E value_of(const NameTable<E>& table, const std::string& name) {
    for (const auto& [n, value] : table)
        if (n == name) return value;
    throw std::invalid_argument("unknown value: " + name);
}

template <class E>
const std::string& name_of(const NameTable<E>& table, E value) {
    for (const auto& [n, v] : table)
        if (v == value) return n;
    throw std::logic_error("enum value without a name");
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string on_off(bool b) { return b ? "on" : "off"; }

struct Overrides {
    std::string preset = "fig1";
    std::optional<std::size_t> m, trials, experiments, eigenvalues, window;
    std::optional<double> t2, gamma, tau, gamma_threshold, delta, kappa, cap_scale;
    std::optional<std::string> update, theta, cap, restart, tracking, trigger, count_mode, selection;
    std::optional<std::uint64_t> seed;
    std::string out = "rfpe-out";
    std::string manifest;
    bool check = false;
    bool no_traces = false;
    unsigned threads = 0;
};

void add_options(CLI::App& run, Overrides& o) {
    run.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    run.add_option("--preset", o.preset, "scenario")
        ->check(CLI::IsMember({"fig1", "t2", "tracking", "gamma", "restart"}));
    run.add_option("--m", o.m, "rejection-sampling attempts per update")->check(CLI::PositiveNumber);
    run.add_option("--trials", o.trials, "independent runs")->check(CLI::PositiveNumber);
    run.add_option("--n-experiments", o.experiments, "experiments per run");
    run.add_option("--t2", o.t2, "decoherence time (inf for none)");
    run.add_option("--gamma", o.gamma, "unmodeled depolarizing probability");
    run.add_option("--tau", o.tau, "consistency-test strength");
    run.add_option("--gamma-threshold", o.gamma_threshold, "log-sigma slope threshold");
    run.add_option("--delta", o.delta, "promised spectral gap");
    run.add_option("--kappa", o.kappa, "rejection envelope constant");
    run.add_option("--update", o.update, "filter update")->check(CLI::IsMember(names(kUpdateNames)));
    run.add_option("--theta-convention", o.theta, "PGH theta draw")->check(CLI::IsMember(names(kThetaNames)));
    run.add_option("--cap", o.cap, "repetition cap under decoherence")->check(CLI::IsMember(names(kCapNames)));
    run.add_option("--cap-scale", o.cap_scale, "cap as a multiple of T2");
    run.add_option("--restart", o.restart, "consistency tests and restarts")->check(CLI::IsMember({"on", "off"}));
    run.add_option("--tracking", o.tracking, "eigenstate jumps between experiments")
        ->check(CLI::IsMember({"on", "off"}));
    run.add_option("--eigenvalues", o.eigenvalues, "eigenphases of the simulated unitary")
        ->check(CLI::PositiveNumber);
    run.add_option("--window", o.window, "records in the log-sigma slope fit");
    run.add_option("--trigger", o.trigger, "slope rule for suspect models")
        ->check(CLI::IsMember(names(kTriggerNames)));
    run.add_option("--count-mode", o.count_mode, "restart counter semantics")
        ->check(CLI::IsMember(names(kCountNames)));
    run.add_option("--selection", o.selection, "reported model under restarts")
        ->check(CLI::IsMember(names(kSelectionNames)));
    run.add_option("--seed", o.seed, "master seed");
    run.add_option("--out", o.out, "output directory");
    run.add_option("--manifest", o.manifest, "re-run from a manifest; later flags override it");
    run.add_flag("--check", o.check, "evaluate the preset's thresholds; exit 2 on failure");
    run.add_flag("--no-traces", o.no_traces, "skip traces.csv");
    run.add_option("--threads", o.threads, "worker threads, 0 = all cores; output does not depend on it");
}

Scenario resolve(const Overrides& o) {
    Scenario s = preset_scenario(o.preset);
    RunConfig& r = s.run;
    if (o.m) r.filter.samples = *o.m;
    if (o.trials) s.trials = *o.trials;
    if (o.experiments) r.experiments = *o.experiments;
    if (o.t2) r.noise.t2 = *o.t2;
    if (o.gamma) r.noise.gamma = *o.gamma;
    if (o.tau) r.reset.tau = *o.tau;
    if (o.gamma_threshold) r.reset.gamma_threshold = *o.gamma_threshold;
    if (o.delta) r.delta = *o.delta;
    if (o.kappa) r.filter.kappa0 = r.filter.kappa1 = *o.kappa;
    if (o.cap_scale) r.design.cap_scale = *o.cap_scale;
    if (o.update) r.variant = value_of(kUpdateNames, *o.update);
    if (o.theta) r.design.theta = value_of(kThetaNames, *o.theta);
    if (o.cap) r.design.cap = value_of(kCapNames, *o.cap);
    if (o.restart) r.restarts = *o.restart == "on";
    if (o.tracking) r.tracking = *o.tracking == "on";
    if (o.eigenvalues) r.eigenphases = *o.eigenvalues;
    if (o.window) r.reset.window = *o.window;
    if (o.trigger) r.reset.trigger = value_of(kTriggerNames, *o.trigger);
    if (o.count_mode) r.reset.count_mode = value_of(kCountNames, *o.count_mode);
    if (o.selection) r.selection = value_of(kSelectionNames, *o.selection);
    if (o.seed) s.seed = *o.seed;
    validate(r);
    return s;
}

std::vector<std::string> manifest_tokens(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read manifest " + path);
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("malformed manifest line: " + line);
        tokens.push_back("--" + line.substr(0, eq));
        tokens.push_back(line.substr(eq + 1));
    }
    return tokens;
}

/// Drops the program name, the subcommand and any --manifest option.
std::vector<std::string> without_manifest(const std::vector<std::string>& args) {
    std::vector<std::string> out;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "run") continue;
        if (args[i] == "--manifest") {
            ++i;
            continue;
        }
        if (args[i].rfind("--manifest=", 0) == 0) continue;
        out.push_back(args[i]);
    }
    return out;
}

void parse(CLI::App& app, const std::vector<std::string>& args) {
    std::vector<char*> argv;
    argv.reserve(args.size());
    for (const std::string& a : args) argv.push_back(const_cast<char*>(a.c_str()));
    app.parse(static_cast<int>(argv.size()), argv.data());
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    return f;
}

void write_aggregate(const std::filesystem::path& path, const Metrics& m) {
    auto f = open_output(path);
    f << "n,median_error,mean_error,median_reported_error,mean_reported_error,median_sigma,"
         "median_cumulative_repetitions\n";
    for (std::size_t i = 0; i < m.median_error.size(); ++i) {
        f << i + 1 << ',' << num(m.median_error[i]) << ',' << num(m.mean_error[i]) << ','
          << num(m.median_reported_error[i]) << ',' << num(m.mean_reported_error[i]) << ','
          << num(m.median_sigma[i]) << ',' << num(m.median_cumulative_repetitions[i]) << '\n';
    }
}

void write_trials(const std::filesystem::path& path, std::span<const Trace> traces, const Metrics& m) {
    auto f = open_output(path);
    f << "trial,final_error,final_reported_error,restarts,tests,skipped\n";
    for (std::size_t t = 0; t < traces.size(); ++t) {
        const double err = traces[t].empty() ? 0.0 : traces[t].back().error;
        const double rep = traces[t].empty() ? 0.0 : traces[t].back().reported_error;
        f << t << ',' << num(err) << ',' << num(rep) << ',' << m.restarts_per_trial[t] << ','
          << m.tests_per_trial[t] << ',' << m.skipped_per_trial[t] << '\n';
    }
}

void write_cdf(const std::filesystem::path& path, const Metrics& m) {
    auto f = open_output(path);
    f << "n,threshold,fraction_below\n";
    for (const ErrorCdf& cdf : m.cdfs)
        for (std::size_t i = 0; i < cdf.thresholds.size(); ++i)
            f << cdf.checkpoint << ',' << num(cdf.thresholds[i]) << ',' << num(cdf.fraction_below[i]) << '\n';
}

void write_traces(const std::filesystem::path& path, std::span<const Trace> traces) {
    auto f = open_output(path);
    f << "trial,n,repetitions,theta,outcome,mu,sigma,error,reported_error,cumulative_repetitions,"
         "true_index,restarted,tested,skipped,jumped\n";
    for (std::size_t t = 0; t < traces.size(); ++t) {
        for (const TraceRecord& r : traces[t]) {
            f << t << ',' << r.index << ',' << num(r.spec.repetitions) << ',' << num(r.spec.theta) << ','
              << (r.outcome == Outcome::one ? 1 : 0) << ',' << num(r.mu) << ',' << num(r.sigma) << ','
              << num(r.error) << ',' << num(r.reported_error) << ',' << num(r.cumulative_repetitions) << ','
              << r.true_index << ',' << r.restarted << ',' << r.tested << ',' << r.skipped << ',' << r.jumped
              << '\n';
        }
    }
}

double final_mean_reported_error(std::span<const Trace> traces) {
    double sum = 0.0;
    for (const Trace& t : traces) sum += t.empty() ? 0.0 : t.back().reported_error;
    return traces.empty() ? 0.0 : sum / static_cast<double>(traces.size());
}

std::optional<double> decay_lambda(const Metrics& m) {
    try {
        return fit_decay_exponent(m.median_error).lambda;
    } catch (const std::domain_error&) {
        return std::nullopt;
    }
}

CheckResult in_range(std::string name, std::optional<double> v, double lo, double hi) {
    const double x = v.value_or(std::numeric_limits<double>::quiet_NaN());
    return {std::move(name), x, v && x >= lo && x <= hi};
}

}  // namespace

Scenario preset_scenario(const std::string& name) {
    Scenario s;
    s.preset = name;
    s.seed = 7;
    s.trials = 200;
    RunConfig& r = s.run;
    if (name == "fig1") {
        r.filter.samples = 200;
        r.experiments = 150;
    } else if (name == "t2") {
        r.filter.samples = 2000;
        r.experiments = 1000;
        r.noise.t2 = 1000.0;
        r.design.cap = CapMode::deterministic;
    } else if (name == "gamma") {
        r.filter.samples = 2000;
        r.experiments = 150;
        r.noise.gamma = 0.1;
    } else if (name == "restart") {
        r.filter.samples = 2000;
        r.experiments = 200;
        r.restarts = true;
    } else if (name == "tracking") {
        s.trials = 20;
        r.filter.samples = 2000;
        r.experiments = 1000;
        r.noise.t2 = 1e4;
        r.restarts = true;
        r.tracking = true;
        r.eigenphases = 16;
    } else {
        throw std::invalid_argument("unknown preset: " + name);
    }
    return s;
}

std::string manifest_text(const Scenario& s) {
    const RunConfig& r = s.run;
    std::ostringstream o;
    o << "preset=" << s.preset << '\n'
      << "m=" << r.filter.samples << '\n'
      << "trials=" << s.trials << '\n'
      << "n-experiments=" << r.experiments << '\n'
      << "t2=" << num(r.noise.t2) << '\n'
      << "gamma=" << num(r.noise.gamma) << '\n'
      << "tau=" << num(r.reset.tau) << '\n'
      << "gamma-threshold=" << num(r.reset.gamma_threshold) << '\n'
      << "delta=" << num(r.delta) << '\n'
      << "kappa=" << num(r.filter.kappa0) << '\n'
      << "update=" << name_of(kUpdateNames, r.variant) << '\n'
      << "theta-convention=" << name_of(kThetaNames, r.design.theta) << '\n'
      << "cap=" << name_of(kCapNames, r.design.cap) << '\n'
      << "cap-scale=" << num(r.design.cap_scale) << '\n'
      << "restart=" << on_off(r.restarts) << '\n'
      << "tracking=" << on_off(r.tracking) << '\n'
      << "eigenvalues=" << r.eigenphases << '\n'
      << "window=" << r.reset.window << '\n'
      << "trigger=" << name_of(kTriggerNames, r.reset.trigger) << '\n'
      << "count-mode=" << name_of(kCountNames, r.reset.count_mode) << '\n'
      << "selection=" << name_of(kSelectionNames, r.selection) << '\n'
      << "seed=" << s.seed << '\n';
    return o.str();
}

std::vector<CheckResult> run_checks(const Scenario& s, std::span<const Trace> traces, unsigned threads) {
    const Metrics m = aggregate(traces);
    const std::size_t n = m.median_error.size();
    std::vector<CheckResult> out;
    if (s.preset == "fig1") {
        out.push_back(in_range("decay_exponent", decay_lambda(m), 0.12, 0.22));
        if (n >= 150) out.push_back(in_range("median_error_at_150", m.median_error[149], 0.0, 1e-8));
        if (n >= 20) {
            double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
            for (std::size_t i = 19; i < std::min<std::size_t>(n, 150); ++i) {
                const double t = m.median_cumulative_repetitions[i] * m.median_error[i];
                lo = std::min(lo, t);
                hi = std::max(hi, t);
            }
            out.push_back({"time_error_product_spread", hi / lo, hi / lo < 10.0});
        }
    } else if (s.preset == "t2") {
        const double edge = s.run.design.scale / (s.run.design.cap_scale * s.run.noise.t2);
        const auto it = std::find_if(m.median_sigma.begin(), m.median_sigma.end(),
                                     [edge](double sigma) { return sigma <= edge; });
        const auto first = static_cast<std::size_t>(it - m.median_sigma.begin());
        std::optional<double> slope;
        if (n >= first + 10) slope = fit_power_law(m.median_error, first, n).exponent;
        out.push_back(in_range("post_transition_slope", slope, -0.9, -0.3));
    } else if (s.preset == "gamma") {
        RunConfig ref = s.run;
        ref.noise.gamma = 0.0;
        const auto ref_traces = run_ensemble(ref, s.trials, s.seed, threads);
        const auto lam = decay_lambda(m);
        const auto lam0 = decay_lambda(aggregate(ref_traces));
        std::optional<double> ratio;
        if (lam && lam0) ratio = *lam / *lam0;
        out.push_back(in_range("decay_exponent_ratio", ratio, 0.2, s.run.noise.gamma > 0.0 ? 0.8 : 1.0));
    } else if (s.preset == "restart") {
        RunConfig ref = s.run;
        ref.restarts = !s.run.restarts;
        const auto ref_traces = run_ensemble(ref, s.trials, s.seed, threads);
        const double with = final_mean_reported_error(s.run.restarts ? traces : std::span<const Trace>(ref_traces));
        const double without = final_mean_reported_error(s.run.restarts ? std::span<const Trace>(ref_traces) : traces);
        out.push_back({"mean_error_ratio", with / without, with <= 1e-3 * without});
    } else if (s.preset == "tracking") {
        auto times = recovery_times(traces, 1e-2, 100);
        std::optional<double> med;
        if (!times.empty()) med = median(times);
        out.push_back(in_range("median_recovery_experiments", med, 0.0, 100.0));
    }
    return out;
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Overrides o;
    CLI::App app{"Rejection-filter phase estimation experiments"};
    app.require_subcommand(1);
    CLI::App* run = app.add_subcommand("run", "run a scenario and write CSV files and a manifest");
    add_options(*run, o);
    try {
        parse(app, args);
        if (!o.manifest.empty()) {
            std::vector<std::string> replay{args.empty() ? std::string("rfpe") : args.front(), "run"};
            const auto tokens = manifest_tokens(o.manifest);
            replay.insert(replay.end(), tokens.begin(), tokens.end());
            const auto rest = without_manifest(args);
            replay.insert(replay.end(), rest.begin(), rest.end());
            return run_command(replay, out, err);
        }
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kSuccess : kConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }

    Scenario s;
    try {
        s = resolve(o);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }

    const std::vector<Trace> traces = run_ensemble(s.run, s.trials, s.seed, o.threads);
    AggregateOptions agg;
    agg.cdf_checkpoints = {s.run.experiments};
    for (int k = -16; k <= 0; ++k) agg.cdf_thresholds.push_back(std::pow(10.0, k));
    const Metrics metrics = aggregate(traces, agg);

    try {
        const std::filesystem::path dir(o.out);
        std::filesystem::create_directories(dir);
        write_aggregate(dir / "aggregate.csv", metrics);
        write_trials(dir / "trials.csv", traces, metrics);
        if (s.run.experiments > 0) write_cdf(dir / "cdf.csv", metrics);
        if (!o.no_traces) write_traces(dir / "traces.csv", traces);
        open_output(dir / "manifest.txt") << manifest_text(s);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }

    out << s.preset << ": " << s.trials << " trials x " << s.run.experiments << " experiments";
    if (!metrics.median_error.empty())
        out << ", final median error " << num(metrics.median_error.back()) << ", final mean reported error "
            << num(metrics.mean_reported_error.back());
    out << '\n';

    if (!o.check) return kSuccess;
    bool ok = true;
    const auto checks = run_checks(s, traces, o.threads);
    if (checks.empty()) {
        err << "error: no checks for " << s.run.experiments << " experiments\n";
        return kCheckFailed;
    }
    for (const CheckResult& c : checks) {
        out << (c.passed ? "PASS " : "FAIL ") << c.name << " = " << num(c.value) << '\n';
        ok = ok && c.passed;
    }
    return ok ? kSuccess : kCheckFailed;
}

}  // namespace rfpe::cli
