#include "wedge/alternative.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace wedge {

namespace {

using cplx = std::complex<double>;

constexpr double kPi = std::numbers::pi;
constexpr double kInvSqrt2 = 0.70710678118654752440;
// Below this exp() underflows to zero.
constexpr double kLogTiny = -745.0;

constexpr double kStep = 0.5;
constexpr double kFaddeevaReach = 1e4;
constexpr int kNodeReach = 14;  // exp(-(14 * 0.5)^2) ~ 5e-22

void check_inputs(const WedgeProblem& p, double T) {
    if (!(T > 0.0) || !std::isfinite(T)) {
        throw DomainError("alternative: T must be positive and finite");
    }
    if (!(p.a1() + p.a2() > 0.0)) {
        throw DomainError("alternative: a1 + a2 must be positive");
    }
}

struct Geometry {
    double a_plus;
    double b_plus;
    double d;
    double alpha;
    double beta;
    double sigma;
};

Geometry geometry(const WedgeProblem& p, double T) {
    const DerivedParams q = derive_params(p, Horizon::finite(T));
    return {q.a_plus, q.b_plus, q.d, q.alpha, q.beta_or_zero(), T + q.b_plus / q.a_plus};
}

// log of the factor multiplying sin(pi n b1 / 2b+) times the n-th integral.
double log_multiplier(const Geometry& g, int n) {
    return g.d * g.d / (2.0 * g.alpha) + 0.5 * std::log(g.sigma) - 0.5 * std::log(g.alpha) -
           kPi * kPi * n * n / (8.0 * (g.alpha + g.beta));
}

// Upper half plane, trapezoid with nodes (j + shift) h.
cplx faddeeva_upper(cplx z) {
    const double x = z.real();
    const double frac = x / kStep - std::floor(x / kStep);
    const double to_integer = std::min(frac, 1.0 - frac);
    const bool half_grid = std::abs(frac - 0.5) > to_integer;
    const double shift = half_grid ? 0.5 : 0.0;

    cplx sum = 0.0;
    for (int j = -kNodeReach; j <= kNodeReach; ++j) {
        const double t = (j + shift) * kStep;
        sum += std::exp(-t * t) / (z - t);
    }
    sum *= cplx(0.0, kStep / kPi);

    if (z.imag() < kPi / kStep) {
        // Residue of the poles of the periodized weight.
        const cplx q = std::exp(cplx(0.0, -2.0 * kPi / kStep) * z);
        const cplx lead = 2.0 * std::exp(-z * z);
        sum += half_grid ? lead / (1.0 + q) : lead / (1.0 - q);
    }
    return sum;
}

// exp(log_scale) * w(z), z in the upper half plane, with exp(-z^2) terms
// combined so that huge and tiny factors never meet in floating point.
cplx scaled_erfc_piece(cplx log_scale, cplx zeta) {
    // exp(log_scale - zeta^2) * w(i zeta) = exp(log_scale) * erfc(zeta)
    const cplx e = log_scale - zeta * zeta;
    if (e.real() < kLogTiny) {
        return 0.0;
    }
    return std::exp(e) * faddeeva(cplx(0.0, 1.0) * zeta);
}

// Rounding floor for an integrand sin(theta) g with theta up to max_phase:
// the argument alone carries an absolute error of about max_phase ulps.
double phase_noise(double max_phase) { return 32.0 * (1.0 + max_phase); }

// Cuts for the term integrals up to frequency n_max: the part of [0, 2a+]
// where the Gaussian is representable, split at the peak, in pieces no wider
// than one half-period of the top sine or two Gaussian widths.
std::vector<double> term_cuts(int n_max, const Geometry& g, double a1, const QuadratureSpec& spec) {
    const double top = 2.0 * g.a_plus;
    const double reach = std::sqrt(2.0 * -kLogTiny / g.sigma);
    const double lo = std::max(0.0, a1 - reach);
    const double hi = std::min(top, a1 + reach);
    std::vector<double> cuts;
    if (!(hi > lo)) {
        return cuts;
    }
    const double peak = std::clamp(spec.split_point, lo, hi);
    const double width = std::min(top / n_max, 2.0 / std::sqrt(g.sigma));
    auto fill = [&](double a, double b) {
        if (!(b > a)) {
            return;
        }
        const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / width)));
        for (int i = 0; i < pieces; ++i) {
            cuts.push_back(a + (b - a) * i / pieces);
        }
    };
    fill(lo, peak);
    fill(peak, hi);
    cuts.push_back(hi);
    return cuts;
}

double integral_simpson(int n, const Geometry& g, double a1, const QuadratureSpec& spec,
                        double tol) {
    const double top = 2.0 * g.a_plus;
    const double k = kPi * n / top;
    const double sigma = g.sigma;
    auto f = [&](double phi) {
        const double u = phi - a1;
        return std::sin(k * phi) * std::exp(-0.5 * sigma * u * u);
    };
    const std::vector<double> cuts = term_cuts(n, g, a1, spec);
    if (cuts.empty()) {
        return 0.0;
    }
    const QuadratureResult r =
        adaptive_simpson(f, cuts, tol, spec.max_depth, phase_noise(k * top));
    return r.value;
}

void check_spec(const QuadratureSpec& spec) {
    if (!(spec.abs_tol > 0.0)) {
        throw DomainError("quadrature: abs_tol must be positive");
    }
    if (spec.max_depth < 1 || spec.max_depth > 40) {
        throw DomainError("quadrature: max_depth must be in [1, 40]");
    }
}

double real_form_terms(const WedgeProblem& p, double T, int first, int last,
                       const QuadratureSpec& spec) {
    check_inputs(p, T);
    check_spec(spec);
    const Geometry g = geometry(p, T);
    const double u = p.b1() / (2.0 * g.b_plus);
    double sum = 0.0;
    for (int n = first; n <= last; ++n) {
        const double s = sin_pi(n * u);
        const double lm = log_multiplier(g, n);
        if (s == 0.0 || lm < kLogTiny) {
            continue;
        }
        const double mult = std::exp(lm) * s;
        if (!std::isfinite(mult)) {
            throw DomainError("alternative: term multiplier overflows (alpha too large)");
        }
        // The integral error enters the sum scaled by |mult|.
        const double tol = spec.abs_tol / std::abs(mult);
        const double term = mult * integral_simpson(n, g, p.a1(), spec, tol);
        if (!std::isfinite(term)) {
            throw InternalError("alternative: non-finite term");
        }
        sum += term;
    }
    return sum;
}

TruncationPlan plan_from(double alpha, double beta, double tol) {
    if (!(tol >= kMinTolerance)) {
        throw DomainError("alt_min_terms: tolerance must be >= 1e-16");
    }
    if (!(alpha > 0.0) || !(beta >= 0.0)) {
        throw DomainError("alt_min_terms: need alpha > 0 and beta >= 0");
    }
    for (int n = 2; n <= kMaxTerms; ++n) {
        const double bound = alt_remainder_bound(alpha, beta, n);
        if (bound < tol) {
            return {Method::Alternative, n, bound, tol};
        }
    }
    throw PlanningError("alternative: no N <= " + std::to_string(kMaxTerms) +
                        " meets the tolerance (alpha=" + std::to_string(alpha) +
                        ", beta=" + std::to_string(beta) + ")");
}

}  // namespace

QuadratureSpec default_quadrature_spec(const WedgeProblem& problem, double T) {
    check_inputs(problem, T);
    const Geometry g = geometry(problem, T);
    return {1e-18 * std::max(1.0, std::sqrt(g.sigma)), 30, problem.a1()};
}

cplx faddeeva(cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || std::abs(z.real()) > kFaddeevaReach ||
        std::abs(z.imag()) > kFaddeevaReach) {
        throw DomainError("faddeeva: argument outside |Re z|, |Im z| <= 1e4");
    }
    if (z.imag() >= 0.0) {
        return faddeeva_upper(z);
    }
    const cplx r = 2.0 * std::exp(-z * z) - faddeeva_upper(-z);
    if (!std::isfinite(r.real()) || !std::isfinite(r.imag())) {
        throw DomainError("faddeeva: value overflows in the lower half plane");
    }
    return r;
}

double alt_term_integral(int n, const WedgeProblem& problem, double T, const QuadratureSpec& spec) {
    if (n < 1) {
        throw DomainError("alt_term_integral: n must be >= 1");
    }
    check_inputs(problem, T);
    check_spec(spec);
    return integral_simpson(n, geometry(problem, T), problem.a1(), spec, spec.abs_tol);
}

double alt_term_integral_closed_form(int n, const WedgeProblem& problem, double T) {
    if (n < 1) {
        throw DomainError("alt_term_integral_closed_form: n must be >= 1");
    }
    check_inputs(problem, T);
    const Geometry g = geometry(problem, T);
    const double k = kPi * n / (2.0 * g.a_plus);
    const double root = std::sqrt(0.5 * g.sigma);
    const double x_hi = problem.a2() * root;
    const double x_lo = problem.a1() * root;
    const double y = k / std::sqrt(2.0 * g.sigma);

    const cplx centre = 2.0 * std::exp(-k * k / (2.0 * g.sigma)) *
                        cplx(std::cos(k * problem.a1()), std::sin(k * problem.a1()));
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    const cplx hi_piece = sign * std::exp(-x_hi * x_hi) * faddeeva(cplx(y, x_hi));
    const cplx lo_piece = std::exp(-x_lo * x_lo) * faddeeva(cplx(-y, x_lo));
    const cplx j = std::sqrt(kPi / (2.0 * g.sigma)) * (centre - hi_piece - lo_piece);
    return j.imag();
}

double alt_partial_sum(const WedgeProblem& problem, double T, int N, const QuadratureSpec& spec) {
    if (N < 0) {
        throw DomainError("alt_partial_sum: N must be nonnegative");
    }
    return real_form_terms(problem, T, 1, N, spec);
}

double alt_partial_sum(const WedgeProblem& problem, double T, int N) {
    return alt_partial_sum(problem, T, N, default_quadrature_spec(problem, T));
}

double alt_tail(const WedgeProblem& problem, double T, int N, int M, const QuadratureSpec& spec) {
    if (N < 0 || M < N) {
        throw DomainError("alt_tail: need 0 <= N <= M");
    }
    return real_form_terms(problem, T, N + 1, M, spec);
}

ComplexSeriesValue alt_partial_sum_erf(const WedgeProblem& problem, double T, int N) {
    if (N < 0) {
        throw DomainError("alt_partial_sum_erf: N must be nonnegative");
    }
    check_inputs(problem, T);
    const Geometry g = geometry(problem, T);
    const double root_sigma = std::sqrt(g.sigma);
    const double u = problem.b1() / (2.0 * g.b_plus);
    const double base = g.d * g.d / (2.0 * g.alpha);
    const cplx i(0.0, 1.0);

    cplx sum = 0.0;
    for (int n = -N; n <= N; ++n) {
        const double s = sin_pi(n * u);
        if (s == 0.0) {
            continue;
        }
        const double v = kPi * n / (2.0 * g.a_plus * root_sigma);
        const cplx zeta_lo = (i * v - problem.a1() * root_sigma) * kInvSqrt2;
        const cplx zeta_hi = (i * v + problem.a2() * root_sigma) * kInvSqrt2;
        // exp(e) times the phase exp(-i n pi a1 / 2a+).
        const double e = base - kPi * kPi * n * n / (8.0 * g.alpha);
        const cplx phase = cplx(0.0, -kPi * n * problem.a1() / (2.0 * g.a_plus));
        // 2 Psi = 2 - erfc(zeta_hi) - erfc(-zeta_lo)
        cplx twice_psi = 0.0;
        const cplx lead = e + phase;
        if (lead.real() >= kLogTiny) {
            twice_psi += 2.0 * std::exp(lead);
        }
        // exp(-zeta^2) grows like exp(v^2 / 2); e absorbs it first.
        twice_psi -= scaled_erfc_piece(lead, zeta_hi);
        twice_psi -= scaled_erfc_piece(lead, -zeta_lo);
        sum += i * std::sqrt(kPi / (2.0 * g.alpha)) * s * 0.5 * twice_psi;
    }
    if (!std::isfinite(sum.real()) || !std::isfinite(sum.imag())) {
        throw InternalError("alt_partial_sum_erf: non-finite sum");
    }
    return {sum.real(), sum.imag()};
}

double alt_partial_sum_rearranged(const WedgeProblem& problem, double T, int K,
                                  const QuadratureSpec& spec) {
    if (K < 0) {
        throw DomainError("alt_partial_sum_rearranged: K must be nonnegative");
    }
    check_inputs(problem, T);
    check_spec(spec);
    const Geometry g = geometry(problem, T);
    const double u = problem.b1() / (2.0 * g.b_plus);
    const double top = 2.0 * g.a_plus;
    const double a1 = problem.a1();
    const double reach = std::sqrt(2.0 * -kLogTiny / g.sigma);
    const double lo = std::max(0.0, a1 - reach);
    const double hi = std::min(top, a1 + reach);
    if (!(hi > lo)) {
        return 0.0;
    }

    double sum = 0.0;
    for (int m = 1; m <= K; ++m) {
        struct Part {
            int n;
            double weight;
        };
        std::vector<Part> parts;
        for (int n : {2 * m - 1, 2 * m}) {
            const double lm = log_multiplier(g, n);
            if (sin_pi(n * u) == 0.0 || lm < kLogTiny) {
                continue;
            }
            parts.push_back({n, 0.5 * std::exp(lm)});
        }
        if (parts.empty()) {
            continue;
        }
        auto f = [&](double phi) {
            const double v = phi / top;
            double acc = 0.0;
            for (const Part& part : parts) {
                acc += part.weight * (cos_pi(part.n * (u - v)) - cos_pi(part.n * (u + v)));
            }
            const double z = phi - a1;
            return acc * std::exp(-0.5 * g.sigma * z * z);
        };
        const double width = std::min(top / (2 * m), 2.0 / std::sqrt(g.sigma));
        std::vector<double> cuts;
        const double peak = std::clamp(spec.split_point, lo, hi);
        for (auto [a, b] : {std::pair{lo, peak}, std::pair{peak, hi}}) {
            if (!(b > a)) {
                continue;
            }
            const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / width)));
            for (int j = 0; j < pieces; ++j) {
                cuts.push_back(a + (b - a) * j / pieces);
            }
        }
        cuts.push_back(hi);
        sum += adaptive_simpson(f, cuts, spec.abs_tol, spec.max_depth, phase_noise(2.0 * kPi * m))
                   .value;
    }
    return sum;
}

double alt_remainder_bound(double alpha, double beta, int N) {
    if (N < 1) {
        throw DomainError("alt_remainder_bound: N must be >= 1");
    }
    if (!(alpha > 0.0) || !(beta >= 0.0)) {
        throw DomainError("alt_remainder_bound: need alpha > 0 and beta >= 0");
    }
    const double s = alpha + beta;
    // 2 (2/pi)^{3/2} (alpha+beta) / (N sqrt(alpha)) exp(2 alpha - pi^2 N^2 / 8(alpha+beta))
    const double log_bound = std::log(2.0) + 1.5 * std::log(2.0 / kPi) + std::log(s) -
                             std::log(static_cast<double>(N)) - 0.5 * std::log(alpha) +
                             2.0 * alpha - kPi * kPi * N * N / (8.0 * s);
    return std::exp(log_bound);
}

TruncationPlan alt_min_terms(double alpha, double beta, double tol) {
    return plan_from(alpha, beta, tol);
}

TruncationPlan alt_min_terms(const DerivedParams& params, double tol) {
    return plan_from(params.alpha, params.beta_or_zero(), tol);
}

}  // namespace wedge
