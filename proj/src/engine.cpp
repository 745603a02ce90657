#include "wedge/engine.hpp"

#include "wedge/alternative.hpp"
#include "wedge/anderson.hpp"
#include "wedge/limits.hpp"
#include "wedge/strip.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace wedge {

namespace {

constexpr double kMaxTolerance = 1e-2;

bool is_strip(const DerivedParams& q) { return q.a_plus == 0.0; }

std::optional<TruncationPlan> try_plan(Method m, double alpha, double beta, double tol) {
    try {
        return m == Method::Anderson ? anderson_min_terms(alpha, beta, tol)
                                     : alt_min_terms(alpha, beta, tol);
    } catch (const PlanningError&) {
        return std::nullopt;
    }
}

Method best_of(double alpha, double beta, double tol) {
    const auto a = try_plan(Method::Anderson, alpha, beta, tol);
    const auto b = try_plan(Method::Alternative, alpha, beta, tol);
    if (!a && !b) {
        throw PlanningError("no series meets the tolerance (alpha=" + std::to_string(alpha) +
                            ", beta=" + std::to_string(beta) + ")");
    }
    if (a && (!b || a->terms <= b->terms)) {
        return Method::Anderson;
    }
    return Method::Alternative;
}

Method simple_rule(double alpha, double beta) {
    return (alpha < 1.0 && beta < 1.0) ? Method::Alternative : Method::Anderson;
}

void check_tolerance(double tol) {
    if (!(tol >= kMinTolerance && tol <= kMaxTolerance)) {
        throw DomainError("tolerance must lie in [1e-16, 1e-2]");
    }
}

EvalResult from_plan(double raw, const TruncationPlan& plan) {
    const ClampedProbability p = clamp_probability(raw);
    return {p.value, plan.method, plan.terms, plan.bound, p.excursion};
}

std::vector<double> axis_nodes(const GridAxis& axis) {
    std::vector<double> out;
    out.reserve(axis.steps);
    for (int i = 0; i < axis.steps; ++i) {
        out.push_back(axis.steps == 1 ? axis.lo
                                      : axis.lo + (axis.hi - axis.lo) * i / (axis.steps - 1));
    }
    return out;
}

void validate_axis(const GridAxis& axis, const char* name) {
    const std::string n(name);
    if (!std::isfinite(axis.lo) || !std::isfinite(axis.hi) || axis.lo > axis.hi) {
        throw DomainError("grid: " + n + " needs finite lo <= hi");
    }
    if (axis.steps < 1 || (axis.steps == 1) != (axis.lo == axis.hi)) {
        throw DomainError("grid: " + n + " needs steps >= 2, or steps == 1 with lo == hi");
    }
}

}  // namespace

MethodChoice classify(const DerivedParams& params, const Horizon& horizon, const MethodRule& rule,
                      double tol) {
    const bool strip = is_strip(params);
    const bool infinite = horizon.is_infinite();
    if (rule.kind == SelectionRule::Forced) {
        if (rule.forced == Method::Strip && !strip) {
            throw DomainError("strip method needs a1 = a2 = 0");
        }
        if (rule.forced == Method::Doob && !infinite) {
            throw DomainError("doob method needs the infinite horizon");
        }
    }
    if (infinite) {
        return {Method::Doob, rule.kind};
    }
    if (strip) {
        return {Method::Strip, rule.kind};
    }
    const double beta = params.beta_or_zero();
    switch (rule.kind) {
        case SelectionRule::PaperSimple:
            return {simple_rule(params.alpha, beta), rule.kind};
        case SelectionRule::BestBound:
            return {best_of(params.alpha, beta, tol), rule.kind};
        case SelectionRule::Forced:
            break;
    }
    return {rule.forced, rule.kind};
}

EvalResult evaluate(const WedgeProblem& problem, const Horizon& horizon, double tol,
                    const MethodRule& rule) {
    check_tolerance(tol);
    const DerivedParams q = derive_params(problem, horizon);
    const MethodChoice choice = classify(q, horizon, rule, tol);
    switch (choice.method) {
        case Method::Doob: {
            const InfiniteHorizonValue v = infinite_horizon_prob(problem, tol);
            return {v.value, Method::Doob, v.plan.terms, v.plan.bound, 0.0};
        }
        case Method::Strip: {
            if (horizon.is_infinite()) {
                return {0.0, Method::Strip, 0, 0.0, 0.0};
            }
            const StripProblem sp(0.0, problem.b1(), problem.b2());
            const StripSurvival s = strip_survival_detailed(sp, horizon.time(), tol);
            const ClampedProbability p = clamp_probability(s.value);
            return {p.value, Method::Strip, s.terms, s.bound, p.excursion};
        }
        case Method::Anderson: {
            const TruncationPlan plan = anderson_min_terms(q, tol);
            return from_plan(anderson_partial_sum(problem, horizon.time(), plan.terms), plan);
        }
        case Method::Alternative: {
            const TruncationPlan plan = alt_min_terms(q, tol);
            return from_plan(alt_partial_sum(problem, horizon.time(), plan.terms), plan);
        }
    }
    throw InternalError("evaluate: unknown method");
}

std::vector<BatchOutcome> evaluate_batch(std::span<const BatchRow> rows, double tol,
                                         const MethodRule& rule, unsigned threads) {
    std::vector<BatchOutcome> out(rows.size());
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            try {
                out[i].result = evaluate(rows[i].problem, rows[i].horizon, tol, rule);
            } catch (const std::exception& e) {
                out[i].error = e.what();
            }
        }
    };
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    const std::size_t workers = std::min<std::size_t>(threads, rows.size());
    if (workers <= 1) {
        work(0, rows.size());
        return out;
    }
    const std::size_t block = (rows.size() + workers - 1) / workers;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = w * block;
            const std::size_t end = std::min(rows.size(), begin + block);
            if (begin < end) {
                pool.emplace_back(work, begin, end);
            }
        }
    }  // joined
    return out;
}

void validate_grid(const GridSpec& spec) {
    validate_axis(spec.log_alpha, "log-alpha");
    validate_axis(spec.log_beta, "log-beta");
    check_tolerance(spec.tol);
}

std::vector<GridRecord> min_terms_grid(const GridSpec& spec) {
    validate_grid(spec);
    std::vector<GridRecord> out;
    for (double la : axis_nodes(spec.log_alpha)) {
        for (double lb : axis_nodes(spec.log_beta)) {
            const double alpha = std::exp(la);
            const double beta = std::exp(lb);
            GridRecord r;
            r.log_alpha = la;
            r.log_beta = lb;
            const auto a = try_plan(Method::Anderson, alpha, beta, spec.tol);
            const auto b = try_plan(Method::Alternative, alpha, beta, spec.tol);
            r.n_anderson = a ? a->terms : -1;
            r.n_alternative = b ? b->terms : -1;
            if (a || b) {
                r.best = (a && (!b || a->terms <= b->terms)) ? Method::Anderson : Method::Alternative;
                r.n_best = r.best == Method::Anderson ? r.n_anderson : r.n_alternative;
            }
            r.simple = simple_rule(alpha, beta);
            r.n_simple = r.simple == Method::Anderson ? r.n_anderson : r.n_alternative;
            out.push_back(r);
        }
    }
    return out;
}

}  // namespace wedge
