#pragma once

#include "wedge/core.hpp"

namespace wedge {

/// Brownian motion started at x0 and killed on leaving [-a1, a2].
class StripProblem {
public:
    /// Throws DomainError unless a1, a2 >= 0, a1 + a2 > 0 and -a1 < x0 < a2.
    StripProblem(double x0, double a1, double a2);

    [[nodiscard]] double x0() const noexcept { return x0_; }
    [[nodiscard]] double a1() const noexcept { return a1_; }
    [[nodiscard]] double a2() const noexcept { return a2_; }
    [[nodiscard]] double span() const noexcept { return a1_ + a2_; }

private:
    double x0_;
    double a1_;
    double a2_;
};

enum class StripRepresentation { Fourier, Images };

/// Sine-series density, n = 1..N.
[[nodiscard]] double strip_density_fourier(const StripProblem& sp, double x, double t, int N);
/// Image-sum density, n = -N..N.
[[nodiscard]] double strip_density_images(const StripProblem& sp, double x, double t, int N);

/// Tail bounds of the two density sums after N terms.
[[nodiscard]] double strip_density_fourier_bound(const StripProblem& sp, double t, int N);
[[nodiscard]] double strip_density_images_bound(const StripProblem& sp, double t, int N);

/// Density with the representation and N chosen for tol (Fourier when
/// t / span^2 >= 1/4).
[[nodiscard]] double strip_density(const StripProblem& sp, double x, double t, double tol);

/// Survival to T from the integrated sine series: odd n <= N only.
[[nodiscard]] double strip_survival_fourier(const StripProblem& sp, double T, int N);
/// Survival to T from the integrated image sum, n = -N..N.
[[nodiscard]] double strip_survival_images(const StripProblem& sp, double T, int N);

[[nodiscard]] double strip_survival_fourier_bound(const StripProblem& sp, double T, int N);
[[nodiscard]] double strip_survival_images_bound(const StripProblem& sp, double T, int N);

struct StripSurvival {
    double value = 0.0;
    StripRepresentation representation = StripRepresentation::Fourier;
    int terms = 0;
    double bound = 0.0;
    /// |primary - secondary|, or -1 when the secondary would need too many terms.
    double cross_check = -1.0;
};

/// Above this the slower representation is not evaluated for the cross-check.
inline constexpr int kStripCrossCheckTerms = 100000;

/// Both representations planned for tol; the faster one is returned and the
/// other must agree within 10 max(tol, 8 eps) or InternalError is thrown.
[[nodiscard]] StripSurvival strip_survival_detailed(const StripProblem& sp, double T, double tol);
[[nodiscard]] double strip_survival(const StripProblem& sp, double T, double tol);

/// Transition density of the wedge-killed motion from x0 at time 0 to x at
/// time t, obtained from the strip density by the space-time change of
/// variables xi = (a+ x - d)/(a+ t + b+), start (a+ x0 - d)/b+, strip time
/// a+^2 t / (b+ (a+ t + b+)) and walls (a1, a2).
[[nodiscard]] double wedge_density(const WedgeProblem& problem, double x0, double x, double t,
                                   double tol);

}  // namespace wedge
