#include "wedge/strip.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace wedge {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kSwitch = 0.25;

void check_time(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw DomainError("strip: time must be positive and finite");
    }
}

void check_terms(int N, int min) {
    if (N < min) {
        throw DomainError("strip: too few terms requested");
    }
}

void check_position(const StripProblem& sp, double x) {
    if (!(x >= -sp.a1() && x <= sp.a2())) {
        throw DomainError("strip: x must lie in [-a1, a2]");
    }
}

void check_tolerance(double tol) {
    if (!(tol >= kMinTolerance)) {
        throw DomainError("strip: tolerance must be >= 1e-16");
    }
}

// Sum over m >= M of exp(-c m^2) / m^p, p in {0, 1}, bounded by its first
// term plus the integral tail.
double gaussian_tail(double c, double M, bool over_m) {
    const double first = std::exp(-c * M * M);
    const double factor = 1.0 + 1.0 / (2.0 * c * M);
    return over_m ? first / M * factor : first * factor;
}

double fourier_rate(const StripProblem& sp, double t) {
    const double l = sp.span();
    return kPi * kPi * t / (2.0 * l * l);
}

template <class Bound>
int plan_terms(Bound bound, int first, double tol) {
    // Doubling then bisection; bounds are decreasing in N.
    int hi = first;
    while (bound(hi) >= tol) {
        if (hi > std::numeric_limits<int>::max() / 4) {
            throw PlanningError("strip: no term count meets the tolerance");
        }
        hi *= 2;
    }
    int lo = hi / 2;
    if (lo < first || bound(lo) < tol) {
        lo = first - 1;
    }
    while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        (bound(mid) < tol ? hi : lo) = mid;
    }
    return hi;
}

bool prefer_fourier(const StripProblem& sp, double t) {
    const double l = sp.span();
    return t / (l * l) >= kSwitch;
}

}  // namespace

StripProblem::StripProblem(double x0, double a1, double a2) : x0_(x0), a1_(a1), a2_(a2) {
    if (!std::isfinite(x0) || !std::isfinite(a1) || !std::isfinite(a2)) {
        throw DomainError("invalid: strip parameters must be finite");
    }
    if (!(a1 >= 0.0) || !(a2 >= 0.0) || !(a1 + a2 > 0.0)) {
        throw DomainError("invalid: strip walls must be nonnegative with positive span");
    }
    if (!(x0 > -a1 && x0 < a2)) {
        throw DomainError("invalid: x0 must lie strictly inside (-a1, a2)");
    }
}

double strip_density_fourier(const StripProblem& sp, double x, double t, int N) {
    check_time(t);
    check_position(sp, x);
    check_terms(N, 0);
    const double l = sp.span();
    const double u = (x + sp.a1()) / l;
    const double u0 = (sp.x0() + sp.a1()) / l;
    const double c = fourier_rate(sp, t);
    double sum = 0.0;
    for (int n = 1; n <= N; ++n) {
        const double decay = std::exp(-c * n * n);
        if (decay == 0.0) {
            break;
        }
        sum += sin_pi(n * u) * sin_pi(n * u0) * decay;
    }
    return 2.0 / l * sum;
}

double strip_density_images(const StripProblem& sp, double x, double t, int N) {
    check_time(t);
    check_position(sp, x);
    check_terms(N, 0);
    const double l = sp.span();
    // Images reflected about the nearer wall w: with u = x - w, v = x0 - w
    // the families sit at u - v and u + v, and at x = w pairs (n, -n) give
    // bitwise-equal sums.
    const double w = x - (-sp.a1()) <= sp.a2() - x ? -sp.a1() : sp.a2();
    const double u = x - w;
    const double v = sp.x0() - w;
    const double direct = u - v;
    const double mirror = u + v;
    auto kernel = [t](double y) { return std::exp(-y * y / (2.0 * t)); };
    double direct_sum = kernel(direct);
    double mirror_sum = kernel(mirror);
    for (int n = 1; n <= N; ++n) {
        const double shift = 2.0 * n * l;
        direct_sum += kernel(direct + shift) + kernel(direct - shift);
        mirror_sum += kernel(mirror + shift) + kernel(mirror - shift);
    }
    return kInvSqrt2Pi / std::sqrt(t) * (direct_sum - mirror_sum);
}

double strip_density_fourier_bound(const StripProblem& sp, double t, int N) {
    check_time(t);
    check_terms(N, 0);
    return 2.0 / sp.span() * gaussian_tail(fourier_rate(sp, t), N + 1.0, false);
}

double strip_density_images_bound(const StripProblem& sp, double t, int N) {
    check_time(t);
    check_terms(N, 1);
    // Every dropped kernel is centred at least 2 N l from the strip.
    const double l = sp.span();
    return 4.0 * kInvSqrt2Pi / std::sqrt(t) * gaussian_tail(2.0 * l * l / t, N, false);
}

double strip_density(const StripProblem& sp, double x, double t, double tol) {
    check_time(t);
    check_tolerance(tol);
    if (prefer_fourier(sp, t)) {
        const int N = plan_terms([&](int n) { return strip_density_fourier_bound(sp, t, n); }, 1, tol);
        return strip_density_fourier(sp, x, t, N);
    }
    const int N = plan_terms([&](int n) { return strip_density_images_bound(sp, t, n); }, 1, tol);
    return strip_density_images(sp, x, t, N);
}

double strip_survival_fourier(const StripProblem& sp, double T, int N) {
    check_time(T);
    check_terms(N, 0);
    const double u0 = (sp.x0() + sp.a1()) / sp.span();
    const double c = fourier_rate(sp, T);
    double sum = 0.0;
    for (int n = 1; n <= N; n += 2) {
        const double decay = std::exp(-c * n * n);
        if (decay == 0.0) {
            break;
        }
        sum += 4.0 / (kPi * n) * sin_pi(n * u0) * decay;
    }
    return sum;
}

double strip_survival_images(const StripProblem& sp, double T, int N) {
    check_time(T);
    check_terms(N, 0);
    const double l = sp.span();
    const double root = std::sqrt(T);
    const double x0 = sp.x0();
    const double a1 = sp.a1();
    const double a2 = sp.a2();
    auto term = [&](int n) {
        const double shift = 2.0 * n * l;
        return psi((-a1 - x0 + shift) / root, (a2 - x0 + shift) / root) -
               psi((a1 + x0 + shift) / root, (a2 + 2.0 * a1 + x0 + shift) / root);
    };
    double sum = term(0);
    for (int n = 1; n <= N; ++n) {
        sum += term(n) + term(-n);
    }
    return sum;
}

double strip_survival_fourier_bound(const StripProblem& sp, double T, int N) {
    check_time(T);
    check_terms(N, 0);
    return 4.0 / kPi * gaussian_tail(fourier_rate(sp, T), N + 1.0, true);
}

double strip_survival_images_bound(const StripProblem& sp, double T, int N) {
    check_time(T);
    check_terms(N, 1);
    const double l = sp.span();
    return 2.0 * gaussian_tail(2.0 * l * l / T, N, false);
}

StripSurvival strip_survival_detailed(const StripProblem& sp, double T, double tol) {
    check_time(T);
    check_tolerance(tol);
    auto fourier_bound = [&](int n) { return strip_survival_fourier_bound(sp, T, n); };
    auto images_bound = [&](int n) { return strip_survival_images_bound(sp, T, n); };
    const int n_fourier = plan_terms(fourier_bound, 1, tol);
    const int n_images = plan_terms(images_bound, 1, tol);

    StripSurvival out;
    double secondary = kInf;
    if (prefer_fourier(sp, T)) {
        out.representation = StripRepresentation::Fourier;
        out.terms = n_fourier;
        out.bound = fourier_bound(n_fourier);
        out.value = strip_survival_fourier(sp, T, n_fourier);
        if (n_images <= kStripCrossCheckTerms) {
            secondary = strip_survival_images(sp, T, n_images);
        }
    } else {
        out.representation = StripRepresentation::Images;
        out.terms = n_images;
        out.bound = images_bound(n_images);
        out.value = strip_survival_images(sp, T, n_images);
        if (n_fourier <= kStripCrossCheckTerms) {
            secondary = strip_survival_fourier(sp, T, n_fourier);
        }
    }
    if (std::isfinite(secondary)) {
        out.cross_check = std::abs(out.value - secondary);
        if (out.cross_check > 10.0 * std::max(tol, 8.0 * kEps)) {
            throw InternalError("strip: representations disagree by " +
                                std::to_string(out.cross_check));
        }
    }
    return out;
}

double strip_survival(const StripProblem& sp, double T, double tol) {
    return strip_survival_detailed(sp, T, tol).value;
}

double wedge_density(const WedgeProblem& problem, double x0, double x, double t, double tol) {
    check_time(t);
    const DerivedParams q = derive_params(problem, Horizon::finite(t));
    if (!(q.a_plus > 0.0)) {
        throw DomainError("wedge_density: a1 + a2 must be positive");
    }
    if (!(x0 > -problem.b1() && x0 < problem.b2())) {
        throw DomainError("wedge_density: x0 must lie in (-b1, b2)");
    }
    const double lower = -problem.a1() * t - problem.b1();
    const double upper = problem.a2() * t + problem.b2();
    if (!(x >= lower && x <= upper)) {
        throw DomainError("wedge_density: x outside the wedge at time t");
    }
    const double ap = q.a_plus;
    const double bp = q.b_plus;
    const double grown = ap * t + bp;
    const double shifted = ap * x - q.d;
    const double shifted0 = ap * x0 - q.d;
    // xi + a1 = a+ (x - lower) / grown and a2 - xi = a+ (upper - x) / grown;
    // going through the nearer wall keeps both walls exact.
    const double to_lower = ap * (x - lower) / grown;
    const double to_upper = ap * (upper - x) / grown;
    const double xi = to_lower <= to_upper ? -problem.a1() + to_lower : problem.a2() - to_upper;
    const double xi0 = shifted0 / bp;
    const double s = ap * ap * t / (bp * grown);

    const double sigma = t + bp / ap;
    const double log_prefactor = 0.5 * std::log(ap / bp) - 0.5 * std::log(sigma) +
                                 shifted0 * shifted0 / (2.0 * q.alpha) -
                                 shifted * shifted / (2.0 * ap * grown);
    const StripProblem sp(xi0, problem.a1(), problem.a2());
    return std::exp(log_prefactor) * strip_density(sp, xi, s, tol);
}

}  // namespace wedge
