#pragma once

#include "wedge/core.hpp"

namespace wedge {

/// Exponential rates of the n-th term of each of the four Anderson sums.
struct AbcdCoefficients {
    int n = 0;
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
    double D = 0.0;
};

/// Quadratic forms in (a1, b1, a2, b2). Throws DomainError for n < 1.
[[nodiscard]] AbcdCoefficients abcd(int n, const WedgeProblem& problem);

/// The same coefficients written through a+ b+ and d:
///   A = 4n^2 a+b+ - n(a1 b2 + a2 b1) - (2n - 1) a1 b1
///   B = 4(n-1)^2 a+b+ + (n - 1)(a1 b2 + a2 b1) + (2n - 1) a1 b1
///   C = 4n^2 a+b+ + 2nd,  D = 4n^2 a+b+ - 2nd
[[nodiscard]] AbcdCoefficients abcd_reduced(int n, const WedgeProblem& problem);

/// Exponent carried by the second (B) sum. The printed single-factor form
/// disagrees with the alternative series and the Monte-Carlo oracle; it is
/// kept only so that this can be checked.
enum class SecondSumExponent { Doubled, AsPrinted };

struct AndersonOptions {
    using CoefficientFn = AbcdCoefficients (*)(int, const WedgeProblem&);

    SecondSumExponent second_sum = SecondSumExponent::Doubled;
    /// Source of A_n..D_n; abcd_reduced gives the same series. Anything
    /// else is for checking that the self-test notices.
    CoefficientFn coefficients = &abcd;
};

/// Leading normal mass plus the first N terms of each of the four image sums.
[[nodiscard]] double anderson_partial_sum(const WedgeProblem& problem, double T, int N,
                                          AndersonOptions options = {});

/// Terms N+1 .. M of the series, i.e. K(M) - K(N) without cancellation
/// against the leading part.
[[nodiscard]] double anderson_tail(const WedgeProblem& problem, double T, int N, int M,
                                   AndersonOptions options = {});

/// Guaranteed |K(inf) - K(N)| for N >= 2. beta == 0 selects the
/// horizon-free branch only.
[[nodiscard]] double anderson_remainder_bound(double alpha, double beta, int N);

/// Smallest N >= 2 whose remainder bound is below tol.
[[nodiscard]] TruncationPlan anderson_min_terms(double alpha, double beta, double tol);
[[nodiscard]] TruncationPlan anderson_min_terms(const DerivedParams& params, double tol);

}  // namespace wedge
