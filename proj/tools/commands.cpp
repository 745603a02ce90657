#include "commands.hpp"

#include "batch_io.hpp"
#include "wedge/engine.hpp"
#include "wedge/oracle.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <random>

namespace wedge::cli {
namespace {

using nlohmann::json;

struct ProblemFlags {
    double a1 = 0.0, b1 = 0.0, a2 = 0.0, b2 = 0.0;
    std::string T;

    void add_to(CLI::App& cmd) {
        cmd.add_option("--a1", a1, "slope of the lower line")->required();
        cmd.add_option("--b1", b1, "intercept of the lower line, > 0")->required();
        cmd.add_option("--a2", a2, "slope of the upper line")->required();
        cmd.add_option("--b2", b2, "intercept of the upper line, > 0")->required();
        cmd.add_option("--T", T, "horizon, a positive number or inf")->required();
    }
};

MethodRule parse_rule(const std::string& name) {
    return name == "best" ? MethodRule::best_bound() : MethodRule::paper_simple();
}

// Counts given as 1e6 are accepted as long as they are whole.
std::int64_t parse_count(const std::string& text, const char* flag) {
    const auto x = parse_number(text);
    if (!x || *x < 0 || *x > 9e15 || std::floor(*x) != *x) {
        throw UsageError(std::string(flag) + " needs a non-negative whole number, got '" + text +
                         "'");
    }
    return static_cast<std::int64_t>(*x);
}

GridAxis parse_axis(const std::string& text, const char* flag) {
    const auto bad = [&] {
        return UsageError(std::string(flag) + " needs lo:hi:steps, got '" + text + "'");
    };
    std::vector<std::string> parts(1);
    for (char c : text) {
        if (c == ':') parts.emplace_back();
        else parts.back() += c;
    }
    if (parts.size() != 3) throw bad();
    const auto lo = parse_number(parts[0]);
    const auto hi = parse_number(parts[1]);
    const auto steps = parse_number(parts[2]);
    if (!lo || !hi || !steps || !std::isfinite(*lo) || !std::isfinite(*hi) ||
        std::floor(*steps) != *steps || *steps < 1 || *steps > 1e6) {
        throw bad();
    }
    return {*lo, *hi, static_cast<int>(*steps)};
}

json result_json(const EvalResult& r) {
    return {{"value", r.value},
            {"method", std::string(to_string(r.method))},
            {"terms", r.terms},
            {"bound", r.remainder_bound}};
}

std::string result_text(const EvalResult& r) {
    return "value=" + format_double(r.value) + " method=" + std::string(to_string(r.method)) +
           " terms=" + std::to_string(r.terms) + " bound=" + format_double(r.remainder_bound);
}

struct EvalCmd {
    ProblemFlags problem;
    double tol = kMinTolerance;
    std::string method = "auto";
    std::string rule = "paper";
    bool as_json = false;

    int operator()(std::ostream& out) const {
        const WedgeProblem p(problem.a1, problem.b1, problem.a2, problem.b2);
        const Horizon h = parse_horizon(problem.T);
        if (method == "both") {
            const auto x = evaluate(p, h, tol, MethodRule::force(Method::Anderson));
            const auto y = evaluate(p, h, tol, MethodRule::force(Method::Alternative));
            const double diff = std::abs(x.value - y.value);
            if (as_json) {
                out << result_json(x).dump() << '\n'
                    << result_json(y).dump() << '\n'
                    << json{{"abs_diff", diff}}.dump() << '\n';
            } else {
                out << result_text(x) << '\n'
                    << result_text(y) << '\n'
                    << "abs_diff=" << format_double(diff) << '\n';
            }
            return 0;
        }
        MethodRule r = parse_rule(rule);
        if (method != "auto") r = MethodRule::force(*parse_method(method));
        const auto result = evaluate(p, h, tol, r);
        out << (as_json ? result_json(result).dump() : result_text(result)) << '\n';
        return 0;
    }
};

struct BatchCmd {
    std::string input;
    std::string output;
    double tol = kMinTolerance;
    unsigned parallel = 1;
    std::string rule = "paper";

    int operator()(std::ostream& out, std::ostream& err) const {
        std::ifstream in(input);
        if (!in) {
            err << "error: cannot read " << input << '\n';
            return 1;
        }
        BatchInput data;
        try {
            data = read_batch(in);
        } catch (const UsageError& e) {
            err << "error: " << input << ": " << e.what() << '\n';
            return 1;
        }
        std::vector<BatchRow> rows;
        std::vector<std::size_t> index;
        for (std::size_t i = 0; i < data.rows.size(); ++i) {
            if (data.rows[i].row) {
                rows.push_back(*data.rows[i].row);
                index.push_back(i);
            }
        }
        auto computed = evaluate_batch(rows, tol, parse_rule(rule), parallel);
        std::vector<std::optional<BatchOutcome>> outcomes(data.rows.size());
        std::size_t failed = data.rows.size() - rows.size();
        for (std::size_t k = 0; k < rows.size(); ++k) {
            if (!computed[k].result) ++failed;
            outcomes[index[k]] = std::move(computed[k]);
        }
        std::ofstream file;
        if (!output.empty() && output != "-") {
            file.open(output);
            if (!file) {
                err << "error: cannot write " << output << '\n';
                return 1;
            }
        }
        std::ostream& sink = file.is_open() ? file : out;
        write_batch(sink, data, outcomes);
        sink.flush();
        if (!sink) {
            err << "error: write failed\n";
            return 1;
        }
        if (failed) err << failed << " of " << data.rows.size() << " rows failed\n";
        return 0;
    }
};

struct GridCmd {
    std::string log_alpha = "-3:3:121";
    std::string log_beta = "-3:3:121";
    double tol = kMinTolerance;
    std::string output;
    bool summary = false;

    int operator()(std::ostream& out, std::ostream& err) const {
        GridSpec spec{parse_axis(log_alpha, "--log-alpha"), parse_axis(log_beta, "--log-beta"), tol};
        try {
            validate_grid(spec);
        } catch (const DomainError& e) {
            throw UsageError(e.what());
        }
        const auto records = min_terms_grid(spec);
        std::ofstream file;
        if (!output.empty() && output != "-") {
            file.open(output);
            if (!file) {
                err << "error: cannot write " << output << '\n';
                return 1;
            }
        }
        std::ostream& sink = file.is_open() ? file : out;
        sink << "log_alpha,log_beta,n_anderson,n_alternative,n_best,n_simple,best,simple\n";
        int max_best = -1, max_simple = -1, max_anderson_region = -1;
        for (const auto& r : records) {
            sink << format_double(r.log_alpha) << ',' << format_double(r.log_beta) << ','
                 << r.n_anderson << ',' << r.n_alternative << ',' << r.n_best << ','
                 << r.n_simple << ',' << to_string(r.best) << ',' << to_string(r.simple) << '\n';
            max_best = std::max(max_best, r.n_best);
            max_simple = std::max(max_simple, r.n_simple);
            if (r.simple == Method::Anderson) {
                max_anderson_region = std::max(max_anderson_region, r.n_simple);
            }
        }
        if (summary) {
            err << "nodes=" << records.size() << " max_best=" << max_best
                << " max_simple=" << max_simple << " max_anderson_region=" << max_anderson_region
                << '\n';
        }
        return 0;
    }
};

struct BenchCmd {
    std::string count = "1e6";
    std::uint64_t seed = 1;
    double tol = kMinTolerance;
    unsigned parallel = 1;
    std::string rule = "paper";
    bool as_json = false;

    int operator()(std::ostream& out) const {
        const auto n = parse_count(count, "--count");
        // a1, b1, a2, b2 uniform on [0, 10], T uniform on [0, 100].
        PhiloxEngine rng(seed, 0);
        const auto uniform = [&] { return std::generate_canonical<double, 53>(rng); };
        std::vector<BatchRow> rows;
        rows.reserve(static_cast<std::size_t>(n));
        double input_sum = 0.0;
        std::int64_t rejected = 0;
        for (std::int64_t i = 0; i < n; ++i) {
            const double a1 = 10 * uniform(), b1 = 10 * uniform();
            const double a2 = 10 * uniform(), b2 = 10 * uniform();
            const double T = 100 * uniform();
            input_sum += a1 + b1 + a2 + b2 + T;
            try {
                rows.push_back({WedgeProblem(a1, b1, a2, b2), Horizon::finite(T)});
            } catch (const DomainError&) {
                ++rejected;
            }
        }
        const auto start = std::chrono::steady_clock::now();
        const auto outcomes = evaluate_batch(rows, tol, parse_rule(rule), parallel);
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        double checksum = 0.0;
        std::int64_t errors = rejected;
        std::map<std::string, std::int64_t> methods;
        for (const auto& o : outcomes) {
            if (o.result) {
                checksum += o.result->value;
                ++methods[std::string(to_string(o.result->method))];
            } else {
                ++errors;
            }
        }
        const double rate = seconds > 0 ? static_cast<double>(rows.size()) / seconds : 0.0;
        if (as_json) {
            out << json{{"count", n},          {"errors", errors},
                        {"seconds", seconds},  {"evals_per_sec", rate},
                        {"checksum", checksum}, {"input_checksum", input_sum},
                        {"methods", methods}}
                       .dump()
                << '\n';
        } else {
            out << "count=" << n << " errors=" << errors << " seconds=" << format_double(seconds)
                << " evals_per_sec=" << format_double(rate) << '\n'
                << "checksum=" << format_double(checksum)
                << " input_checksum=" << format_double(input_sum) << '\n';
            for (const auto& [name, k] : methods) out << "method." << name << '=' << k << '\n';
        }
        return 0;
    }
};

struct McCmd {
    ProblemFlags problem;
    std::string paths = "1e6";
    double dt = 0.0;  // 0: min(1e-3, T / 1000)
    std::uint64_t seed = 1;
    unsigned threads = 1;
    bool as_json = false;

    int operator()(std::ostream& out) const {
        const WedgeProblem p(problem.a1, problem.b1, problem.a2, problem.b2);
        const Horizon h = parse_horizon(problem.T);
        if (h.is_infinite()) throw DomainError("invalid: Monte Carlo needs a finite horizon");
        const double T = h.time();
        McConfig cfg = McConfig::defaults(T);
        cfg.paths = parse_count(paths, "--paths");
        if (dt > 0) cfg.dt = dt;
        cfg.seed = seed;
        cfg.threads = threads;
        const auto analytic = evaluate(p, h);
        const auto mc = mc_wedge_survival(p, T, cfg);
        const double delta = std::abs(mc.p_hat - analytic.value);
        const double z = mc.std_error > 0 ? delta / mc.std_error
                                          : (delta == 0 ? 0.0 : INFINITY);
        if (as_json) {
            out << json{{"p_hat", mc.p_hat},       {"std_error", mc.std_error},
                        {"analytic", analytic.value}, {"method", std::string(to_string(analytic.method))},
                        {"abs_delta_over_se", z},  {"paths", mc.paths_used},
                        {"dt", cfg.dt}}
                       .dump()
                << '\n';
        } else {
            out << "p_hat=" << format_double(mc.p_hat) << " se=" << format_double(mc.std_error)
                << " analytic=" << format_double(analytic.value)
                << " abs_delta_over_se=" << format_double(z) << " paths=" << mc.paths_used
                << " dt=" << format_double(cfg.dt) << '\n';
        }
        return 0;
    }
};

}  // namespace

int selftest(const SelftestOptions& options, std::ostream& out) {
    const auto report = run_selftest(options);
    int passed = 0;
    for (const auto& c : report.checks) {
        out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
        passed += c.passed;
    }
    out << "selftest: " << passed << '/' << report.checks.size() << " passed\n";
    return report.ok() ? 0 : 1;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Wedge probabilities for Brownian motion between two lines", "wedge"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "wedge 1.0");

    const auto rules = CLI::IsMember({"paper", "best"});

    EvalCmd eval;
    auto* eval_cmd = app.add_subcommand("eval", "one probability");
    eval.problem.add_to(*eval_cmd);
    eval_cmd->add_option("--tol", eval.tol, "truncation tolerance in [1e-16, 1e-2]");
    eval_cmd->add_option("--method", eval.method, "auto, anderson, alternative or both")
        ->check(CLI::IsMember({"auto", "anderson", "alternative", "both"}));
    eval_cmd->add_option("--rule", eval.rule, "selection rule for auto: paper or best")
        ->check(rules);
    eval_cmd->add_flag("--json", eval.as_json, "JSON output");

    BatchCmd batch;
    auto* batch_cmd = app.add_subcommand("batch", "probabilities for each CSV row");
    batch_cmd->add_option("--input", batch.input, "CSV with header a1,b1,a2,b2,T")->required();
    batch_cmd->add_option("--output", batch.output, "output CSV, stdout when omitted or -");
    batch_cmd->add_option("--tol", batch.tol, "truncation tolerance");
    batch_cmd->add_option("--parallel", batch.parallel, "worker threads, 0 = all cores");
    batch_cmd->add_option("--rule", batch.rule, "paper or best")->check(rules);

    GridCmd grid;
    auto* grid_cmd = app.add_subcommand("grid", "minimal term counts over ln alpha x ln beta");
    grid_cmd->add_option("--log-alpha", grid.log_alpha, "lo:hi:steps, natural log");
    grid_cmd->add_option("--log-beta", grid.log_beta, "lo:hi:steps, natural log");
    grid_cmd->add_option("--tol", grid.tol, "truncation tolerance");
    grid_cmd->add_option("--output", grid.output, "output CSV, stdout when omitted or -");
    grid_cmd->add_flag("--summary", grid.summary, "maxima on stderr");

    BenchCmd bench;
    auto* bench_cmd = app.add_subcommand("bench", "random problems timed through the batch engine");
    bench_cmd->add_option("--count", bench.count, "number of problems");
    bench_cmd->add_option("--seed", bench.seed, "sampling seed");
    bench_cmd->add_option("--tol", bench.tol, "truncation tolerance");
    bench_cmd->add_option("--parallel", bench.parallel, "worker threads, 0 = all cores");
    bench_cmd->add_option("--rule", bench.rule, "paper or best")->check(rules);
    bench_cmd->add_flag("--json", bench.as_json, "JSON output");

    McCmd mc;
    auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo estimate against the series");
    mc.problem.add_to(*mc_cmd);
    mc_cmd->add_option("--paths", mc.paths, "simulated paths, >= 1000");
    mc_cmd->add_option("--dt", mc.dt, "time step, default min(1e-3, T/1000)");
    mc_cmd->add_option("--seed", mc.seed, "random seed");
    mc_cmd->add_option("--threads", mc.threads, "worker threads, 0 = all cores");
    mc_cmd->add_flag("--json", mc.as_json, "JSON output");

    auto* selftest_cmd = app.add_subcommand("selftest", "internal consistency checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    try {
        if (eval_cmd->parsed()) return eval(out);
        if (batch_cmd->parsed()) return batch(out, err);
        if (grid_cmd->parsed()) return grid(out, err);
        if (bench_cmd->parsed()) return bench(out);
        if (mc_cmd->parsed()) return mc(out);
        if (selftest_cmd->parsed()) return selftest({}, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"wedge"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace wedge::cli
