#pragma once

#include "wedge/core.hpp"

namespace wedge {

/// Infinite-horizon survival through the image series
///   1 - sum_{n<=N} (e^{-2A_n} + e^{-2B_n} - e^{-2C_n} - e^{-2D_n}),
/// clamped to [0, 1]. Zero when either slope is zero: a horizontal
/// boundary is crossed almost surely.
[[nodiscard]] double doob_prob(const WedgeProblem& problem, int N);

/// Infinite-horizon survival through the theta-type series
///   sqrt(pi / 2alpha) sum_{n<=N} (cos(pi n d / 2alpha) + (-1)^{n+1} cos(pi n c / 2alpha))
///                    * exp(d^2 / 2alpha - pi^2 n^2 / 8alpha),
/// clamped to [0, 1]. Zero when either slope is zero.
[[nodiscard]] double ycart_prob(const WedgeProblem& problem, int N);

/// Term counts meeting tol by the horizon-free remainder bounds: the
/// exp(-8 alpha (N-1)^2) bound for the image series, the
/// exp(2 alpha - pi^2 N^2 / 8 alpha) bound for the theta series. Throw
/// PlanningError past kMaxTerms.
[[nodiscard]] TruncationPlan doob_min_terms(double alpha, double tol);
[[nodiscard]] TruncationPlan ycart_min_terms(double alpha, double tol);

/// The same series at the planned N for tol = 1e-16. The image series needs
/// few terms for large alpha, the theta series for small alpha; a fixed N
/// serves neither end.
[[nodiscard]] double doob_prob(const WedgeProblem& problem);
[[nodiscard]] double ycart_prob(const WedgeProblem& problem);

/// exp(d^2 / 2alpha), the size of the leading theta-series terms relative to
/// a sum that never exceeds one. Rounding in that series grows with it; for
/// lopsided wedges at large alpha it reaches exp(2 alpha).
[[nodiscard]] double ycart_condition(const WedgeProblem& problem);

struct InfiniteHorizonValue {
    double value = 0.0;
    TruncationPlan plan;  ///< method is always Doob
    bool theta_series = false;
};

/// The image series unless the theta series is well conditioned
/// (ycart_condition <= 4) and needs fewer terms, or the image series cannot
/// be planned. PlanningError when neither can.
[[nodiscard]] InfiniteHorizonValue infinite_horizon_prob(const WedgeProblem& problem, double tol);

/// Unclamped partial sums, for convergence checks.
[[nodiscard]] double doob_partial_sum(const WedgeProblem& problem, int N);
[[nodiscard]] double ycart_partial_sum(const WedgeProblem& problem, int N);

}  // namespace wedge
