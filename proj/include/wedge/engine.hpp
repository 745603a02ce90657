#pragma once

#include "wedge/core.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wedge {

enum class SelectionRule { PaperSimple, BestBound, Forced };

struct MethodRule {
    SelectionRule kind = SelectionRule::PaperSimple;
    Method forced = Method::Anderson;  ///< read only when kind == Forced

    [[nodiscard]] static MethodRule paper_simple() noexcept { return {}; }
    [[nodiscard]] static MethodRule best_bound() noexcept { return {SelectionRule::BestBound}; }
    [[nodiscard]] static MethodRule force(Method m) noexcept { return {SelectionRule::Forced, m}; }
};

struct MethodChoice {
    Method method = Method::Anderson;
    SelectionRule rule = SelectionRule::PaperSimple;
};

/// PaperSimple: Alternative iff alpha < 1 and beta < 1. BestBound: the series
/// whose plan for tol is shorter, Anderson on ties. Both zero slopes always
/// give Strip and the infinite horizon always gives Doob, whatever the rule.
/// A forced Strip or Doob that does not fit the problem is a DomainError.
[[nodiscard]] MethodChoice classify(const DerivedParams& params, const Horizon& horizon,
                                    const MethodRule& rule, double tol = kMinTolerance);

/// tol in [1e-16, 1e-2] bounds the truncation error only; rounding adds a
/// few 1e-16 on top.
[[nodiscard]] EvalResult evaluate(const WedgeProblem& problem, const Horizon& horizon,
                                  double tol = kMinTolerance, const MethodRule& rule = {});

struct BatchRow {
    WedgeProblem problem;
    Horizon horizon;
};

struct BatchOutcome {
    std::optional<EvalResult> result;
    std::string error;  ///< what() of the exception when result is empty
};

/// Row-wise evaluate; rows are split into contiguous blocks over `threads`
/// workers (0 = hardware concurrency). Output is identical for any count.
[[nodiscard]] std::vector<BatchOutcome> evaluate_batch(std::span<const BatchRow> rows, double tol,
                                                       const MethodRule& rule,
                                                       unsigned threads = 1);

struct GridAxis {
    double lo = -3.0;  ///< natural log
    double hi = 3.0;
    int steps = 121;  ///< 1 allowed when lo == hi
};

struct GridSpec {
    GridAxis log_alpha;
    GridAxis log_beta;
    double tol = kMinTolerance;
};

struct GridRecord {
    double log_alpha = 0.0;
    double log_beta = 0.0;
    int n_anderson = -1;  ///< -1 when no plan exists
    int n_alternative = -1;
    int n_best = -1;
    int n_simple = -1;
    Method best = Method::Anderson;
    Method simple = Method::Anderson;
};

/// Throws DomainError for lo > hi, steps < 1, steps == 1 with lo != hi, or
/// steps > 1 with lo == hi.
void validate_grid(const GridSpec& spec);

/// Alpha-major records of every node.
[[nodiscard]] std::vector<GridRecord> min_terms_grid(const GridSpec& spec);

}  // namespace wedge
