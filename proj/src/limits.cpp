#include "wedge/limits.hpp"

#include "wedge/alternative.hpp"
#include "wedge/anderson.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

namespace wedge {

namespace {

constexpr double kPi = std::numbers::pi;

bool has_flat_side(const WedgeProblem& p) { return p.a1() == 0.0 || p.a2() == 0.0; }

void check_terms(int N) {
    if (N < 1) {
        throw DomainError("limit series: N must be >= 1");
    }
}

}  // namespace

double doob_partial_sum(const WedgeProblem& problem, int N) {
    check_terms(N);
    double sum = 0.0;
    for (int n = 1; n <= N; ++n) {
        const AbcdCoefficients k = abcd(n, problem);
        sum += std::exp(-2.0 * k.A) + std::exp(-2.0 * k.B) - std::exp(-2.0 * k.C) -
               std::exp(-2.0 * k.D);
    }
    return 1.0 - sum;
}

double ycart_partial_sum(const WedgeProblem& problem, int N) {
    check_terms(N);
    const DerivedParams q = derive_params(problem, Horizon::infinite());
    if (!(q.alpha > 0.0)) {
        throw DomainError("ycart: a1 + a2 must be positive");
    }
    const double two_alpha = 2.0 * q.alpha;
    const double lead = q.d * q.d / two_alpha;
    double sum = 0.0;
    for (int n = 1; n <= N; ++n) {
        const double exponent = lead - kPi * kPi * n * n / (4.0 * two_alpha);
        const double sign = (n % 2 == 1) ? 1.0 : -1.0;
        const double shape = cos_pi(n * q.d / two_alpha) + sign * cos_pi(n * q.c / two_alpha);
        if (shape != 0.0) {
            sum += shape * std::exp(exponent);
        }
    }
    return std::sqrt(kPi / two_alpha) * sum;
}

double doob_prob(const WedgeProblem& problem, int N) {
    check_terms(N);
    if (has_flat_side(problem)) {
        return 0.0;
    }
    return clamp_probability(doob_partial_sum(problem, N)).value;
}

double ycart_prob(const WedgeProblem& problem, int N) {
    check_terms(N);
    if (has_flat_side(problem)) {
        return 0.0;
    }
    return clamp_probability(ycart_partial_sum(problem, N)).value;
}

TruncationPlan doob_min_terms(double alpha, double tol) {
    TruncationPlan plan = anderson_min_terms(alpha, 0.0, tol);
    plan.method = Method::Doob;
    return plan;
}

TruncationPlan ycart_min_terms(double alpha, double tol) {
    TruncationPlan plan = alt_min_terms(alpha, 0.0, tol);
    plan.method = Method::Doob;
    return plan;
}

double doob_prob(const WedgeProblem& problem) {
    if (has_flat_side(problem)) {
        return 0.0;
    }
    const double alpha = derive_params(problem, Horizon::infinite()).alpha;
    return doob_prob(problem, doob_min_terms(alpha, kMinTolerance).terms);
}

double ycart_prob(const WedgeProblem& problem) {
    if (has_flat_side(problem)) {
        return 0.0;
    }
    const double alpha = derive_params(problem, Horizon::infinite()).alpha;
    return ycart_prob(problem, ycart_min_terms(alpha, kMinTolerance).terms);
}

double ycart_condition(const WedgeProblem& problem) {
    const DerivedParams q = derive_params(problem, Horizon::infinite());
    if (!(q.alpha > 0.0)) {
        throw DomainError("ycart: a1 + a2 must be positive");
    }
    return std::exp(q.d * q.d / (2.0 * q.alpha));
}

InfiniteHorizonValue infinite_horizon_prob(const WedgeProblem& problem, double tol) {
    if (!(tol >= kMinTolerance)) {
        throw DomainError("infinite horizon: tolerance must be >= 1e-16");
    }
    InfiniteHorizonValue out;
    out.plan = {Method::Doob, 0, 0.0, tol};
    if (has_flat_side(problem)) {
        return out;
    }
    const double alpha = derive_params(problem, Horizon::infinite()).alpha;
    std::optional<TruncationPlan> image;
    std::optional<TruncationPlan> theta;
    try {
        image = doob_min_terms(alpha, tol);
    } catch (const PlanningError&) {
    }
    if (ycart_condition(problem) <= 4.0) {
        try {
            theta = ycart_min_terms(alpha, tol);
        } catch (const PlanningError&) {
        }
    }
    if (theta && (!image || theta->terms < image->terms)) {
        out.plan = *theta;
        out.theta_series = true;
        out.value = ycart_prob(problem, theta->terms);
    } else if (image) {
        out.plan = *image;
        out.value = doob_prob(problem, image->terms);
    } else {
        throw PlanningError("infinite horizon: no series meets the tolerance (alpha=" +
                            std::to_string(alpha) + ")");
    }
    return out;
}

}  // namespace wedge
