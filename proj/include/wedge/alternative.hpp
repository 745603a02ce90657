#pragma once

#include "wedge/core.hpp"
#include "wedge/quadrature.hpp"

#include <complex>

namespace wedge {

struct QuadratureSpec {
    double abs_tol = 1e-18;  ///< absolute tolerance on each term integral
    int max_depth = 30;      ///< adaptive subdivision limit, at most 40
    double split_point = 0.0;  ///< Gaussian peak, a1
};

/// abs_tol = 1e-18 * max(1, sqrt(T + b+/a+)), split at a1.
[[nodiscard]] QuadratureSpec default_quadrature_spec(const WedgeProblem& problem, double T);

/// w(z) = exp(-z^2) erfc(-iz) for |Re z|, |Im z| <= 1e4; DomainError outside,
/// and in the lower half plane wherever exp(-z^2) overflows.
///
/// Upper half plane: trapezoid rule on exp(-t^2)/(z - t) with step 1/2 and
/// the pole correction, using whichever of the integer or half-integer node
/// grids lies farther from Re z. Lower half plane by reflection.
[[nodiscard]] std::complex<double> faddeeva(std::complex<double> z);

/// Integral over [0, 2a+] of sin(pi n phi / 2a+) exp(-(phi - a1)^2 sigma / 2),
/// sigma = T + b+/a+, by adaptive Simpson. Only values outside the
/// rounding floor of the panel sums are refined; see adaptive_simpson.
[[nodiscard]] double alt_term_integral(int n, const WedgeProblem& problem, double T,
                                       const QuadratureSpec& spec);

/// The same integral through faddeeva.
[[nodiscard]] double alt_term_integral_closed_form(int n, const WedgeProblem& problem, double T);

/// N-term sum of the real (quadrature) form of the alternative series.
[[nodiscard]] double alt_partial_sum(const WedgeProblem& problem, double T, int N,
                                     const QuadratureSpec& spec);
[[nodiscard]] double alt_partial_sum(const WedgeProblem& problem, double T, int N);

/// Terms N+1 .. M of the real form.
[[nodiscard]] double alt_tail(const WedgeProblem& problem, double T, int N, int M,
                              const QuadratureSpec& spec);

struct ComplexSeriesValue {
    double value = 0.0;
    double imag_residue = 0.0;  ///< should vanish; kept as a diagnostic
};

/// Bilateral n = -N .. N complex error function form.
[[nodiscard]] ComplexSeriesValue alt_partial_sum_erf(const WedgeProblem& problem, double T,
                                                     int N);

/// Terms paired (2m-1, 2m) under one integral, K pairs. Equals
/// alt_partial_sum with 2K terms.
///
/// sin(pi n u) sin(pi n v) = (cos(pi n (u - v)) - cos(pi n (u + v))) / 2,
/// u = b1 / 2b+, v = phi / 2a+.
[[nodiscard]] double alt_partial_sum_rearranged(const WedgeProblem& problem, double T, int K,
                                                const QuadratureSpec& spec);

/// Guaranteed remainder after N terms, N >= 1; beta == 0 is the infinite horizon.
[[nodiscard]] double alt_remainder_bound(double alpha, double beta, int N);

/// Smallest N >= 2 with alt_remainder_bound below tol.
[[nodiscard]] TruncationPlan alt_min_terms(double alpha, double beta, double tol);
[[nodiscard]] TruncationPlan alt_min_terms(const DerivedParams& params, double tol);

}  // namespace wedge
