#include "wedge/anderson.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace wedge {

namespace {

void check_index(int n) {
    if (n < 1) {
        throw DomainError("abcd: term index must be >= 1");
    }
}

void check_horizon(double T) {
    if (!(T > 0.0) || !std::isfinite(T)) {
        throw DomainError("anderson: T must be positive and finite");
    }
}

// Sum of terms first..last, all four sums advanced together per n.
double anderson_terms(const WedgeProblem& p, double T, int first, int last,
                      AndersonOptions options) {
    const double sqrt_t = std::sqrt(T);
    const double b_plus = 0.5 * (p.b1() + p.b2());
    const double lower = -p.a1() * T - p.b1();
    const double upper = p.a2() * T + p.b2();
    const double b_rate = options.second_sum == SecondSumExponent::Doubled ? 2.0 : 1.0;

    double sum = 0.0;
    for (int n = first; n <= last; ++n) {
        const AbcdCoefficients k = options.coefficients(n, p);
        const double shift_a = 2.0 * p.b1() - 4.0 * n * b_plus;
        const double shift_b = 2.0 * p.b1() + 4.0 * (n - 1) * b_plus;
        const double shift_c = 4.0 * n * b_plus;

        sum -= scaled_psi_term(-2.0 * k.A, (lower + shift_a) / sqrt_t, (upper + shift_a) / sqrt_t);
        sum -= scaled_psi_term(-b_rate * k.B, (lower + shift_b) / sqrt_t, (upper + shift_b) / sqrt_t);
        sum += scaled_psi_term(-2.0 * k.C, (lower + shift_c) / sqrt_t, (upper + shift_c) / sqrt_t);
        sum += scaled_psi_term(-2.0 * k.D, (lower - shift_c) / sqrt_t, (upper - shift_c) / sqrt_t);
    }
    return sum;
}

TruncationPlan plan_from(double alpha, double beta, double tol) {
    if (!(tol >= kMinTolerance)) {
        throw DomainError("anderson_min_terms: tolerance must be >= 1e-16");
    }
    if (!(alpha >= 0.0) || !(beta >= 0.0)) {
        throw DomainError("anderson_min_terms: alpha and beta must be nonnegative");
    }
    for (int n = 2; n <= kMaxTerms; ++n) {
        const double bound = anderson_remainder_bound(alpha, beta, n);
        if (bound < tol) {
            return {Method::Anderson, n, bound, tol};
        }
    }
    throw PlanningError("anderson: no N <= " + std::to_string(kMaxTerms) +
                        " meets the tolerance (alpha=" + std::to_string(alpha) +
                        ", beta=" + std::to_string(beta) + ")");
}

}  // namespace

AbcdCoefficients abcd(int n, const WedgeProblem& p) {
    check_index(n);
    const double nn = n;
    const double m = n - 1;
    const double a1b1 = p.a1() * p.b1();
    const double a2b2 = p.a2() * p.b2();
    const double cross = p.a2() * p.b1() + p.a1() * p.b2();
    AbcdCoefficients k;
    k.n = n;
    k.A = nn * nn * a2b2 + m * m * a1b1 + nn * m * cross;
    k.B = m * m * a2b2 + nn * nn * a1b1 + nn * m * cross;
    k.C = nn * nn * (a1b1 + a2b2) + nn * m * p.a2() * p.b1() + nn * (nn + 1) * p.a1() * p.b2();
    k.D = nn * nn * (a1b1 + a2b2) + nn * (nn + 1) * p.a2() * p.b1() + nn * m * p.a1() * p.b2();
    return k;
}

AbcdCoefficients abcd_reduced(int n, const WedgeProblem& p) {
    check_index(n);
    const DerivedParams q = derive_params(p, Horizon::infinite());
    const double nn = n;
    const double m = n - 1;
    const double a1b1 = p.a1() * p.b1();
    const double cross = p.a1() * p.b2() + p.b1() * p.a2();
    AbcdCoefficients k;
    k.n = n;
    k.A = 4.0 * nn * nn * q.alpha - nn * cross - (2.0 * nn - 1.0) * a1b1;
    k.B = 4.0 * m * m * q.alpha + m * cross + (2.0 * nn - 1.0) * a1b1;
    k.C = 4.0 * nn * nn * q.alpha + 2.0 * nn * q.d;
    k.D = 4.0 * nn * nn * q.alpha - 2.0 * nn * q.d;
    return k;
}

double anderson_partial_sum(const WedgeProblem& problem, double T, int N, AndersonOptions options) {
    check_horizon(T);
    if (N < 0) {
        throw DomainError("anderson_partial_sum: N must be nonnegative");
    }
    const double sqrt_t = std::sqrt(T);
    const double lead = psi((-problem.a1() * T - problem.b1()) / sqrt_t,
                            (problem.a2() * T + problem.b2()) / sqrt_t);
    return lead + anderson_terms(problem, T, 1, N, options);
}

double anderson_tail(const WedgeProblem& problem, double T, int N, int M, AndersonOptions options) {
    check_horizon(T);
    if (N < 0 || M < N) {
        throw DomainError("anderson_tail: need 0 <= N <= M");
    }
    return anderson_terms(problem, T, N + 1, M, options);
}

double anderson_remainder_bound(double alpha, double beta, int N) {
    if (N < 2) {
        throw DomainError("anderson_remainder_bound: N must be >= 2");
    }
    const double m = N - 1;
    double best = std::numeric_limits<double>::infinity();
    if (alpha > 0.0) {
        best = std::exp(-8.0 * alpha * m * m) / (4.0 * alpha * m);
    }
    // Horizon-dependent branch, valid once N >= alpha / beta.
    if (beta > 0.0 && N >= alpha / beta) {
        const double bound = std::sqrt(2.0 / (std::numbers::pi * beta)) * (alpha + beta) /
                             (4.0 * alpha + beta) *
                             std::exp(-m * m * (8.0 * alpha + 2.0 * beta)) / m;
        best = std::min(best, bound);
    }
    return best;
}

TruncationPlan anderson_min_terms(double alpha, double beta, double tol) {
    return plan_from(alpha, beta, tol);
}

TruncationPlan anderson_min_terms(const DerivedParams& params, double tol) {
    return plan_from(params.alpha, params.beta_or_zero(), tol);
}

}  // namespace wedge
