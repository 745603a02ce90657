#include "wedge/core.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace wedge {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kInvSqrtPi = 0.56418958354775628695;

// exp() returns exactly zero below this argument.
constexpr double kExpUnderflow = -746.0;

// Positive half of the 16-point Gauss-Legendre rule on [-1, 1].
constexpr std::array<double, 8> kGlNodes = {
    0.095012509837637440185, 0.28160355077925891323, 0.45801677765722738634,
    0.61787624440264374845,  0.75540440835500303390, 0.86563120238783174388,
    0.94457502307323257608,  0.98940093499164993260,
};
constexpr std::array<double, 8> kGlWeights = {
    0.18945061045506849629, 0.18260341504492358887, 0.16915651939500253819,
    0.14959598881657673208, 0.12462897125553387205, 0.09515851168249278481,
    0.062253523938647892863, 0.027152459411754094852,
};

std::string require_message(std::string_view field, std::string_view rule) {
    std::string msg = "invalid: ";
    msg.append(field).append(" must be ").append(rule);
    return msg;
}

void check_field(double v, std::string_view field, bool strictly_positive) {
    if (!std::isfinite(v)) {
        throw DomainError(require_message(field, "finite"));
    }
    if (strictly_positive ? !(v > 0.0) : !(v >= 0.0)) {
        throw DomainError(require_message(field, strictly_positive ? "positive" : "nonnegative"));
    }
}

// exp(s - x^2/2) with x^2 carried exactly as a double-double.
double exp_minus_half_square(double x, double s) {
    const double p = x * x;
    const double e = std::fma(x, x, -p);
    const double arg = s - 0.5 * p;
    if (arg < kExpUnderflow) {
        return 0.0;
    }
    return std::exp(arg) * (1.0 - 0.5 * e);
}

// exp(x^2), exact-argument version.
double exp_square(double x) {
    const double p = x * x;
    const double e = std::fma(x, x, -p);
    return std::exp(p) * (1.0 + e);
}

// exp(s) * Psi(lo, hi) for 0 <= lo < hi <= inf.
double upper_tail_mass(double s, double lo, double hi) {
    if (s - 0.5 * lo * lo < kExpUnderflow) {
        return 0.0;
    }
    double mantissa = 0.0;
    if (std::isinf(hi)) {
        mantissa = 0.5 * erfcx(lo * kInvSqrt2);
    } else {
        const double spread = 0.5 * (hi - lo) * (hi + lo);
        if (spread < 1.0) {
            // Integrand exp(-(x^2 - lo^2)/2) varies by less than a factor e.
            const double mid = 0.5 * (hi + lo);
            const double half = 0.5 * (hi - lo);
            double sum = 0.0;
            for (std::size_t i = 0; i < kGlNodes.size(); ++i) {
                const double xl = mid - half * kGlNodes[i];
                const double xr = mid + half * kGlNodes[i];
                sum += kGlWeights[i] * (std::exp(-0.5 * (xl - lo) * (xl + lo)) +
                                        std::exp(-0.5 * (xr - lo) * (xr + lo)));
            }
            mantissa = half * sum * kInvSqrt2Pi;
        } else {
            mantissa = 0.5 * (erfcx(lo * kInvSqrt2) - std::exp(-spread) * erfcx(hi * kInvSqrt2));
        }
    }
    return mantissa * exp_minus_half_square(lo, s);
}

}  // namespace

WedgeProblem::WedgeProblem(double a1, double b1, double a2, double b2)
    : a1_(a1), b1_(b1), a2_(a2), b2_(b2) {
    check_field(a1, "a1", false);
    check_field(b1, "b1", true);
    check_field(a2, "a2", false);
    check_field(b2, "b2", true);
}

WedgeProblem WedgeProblem::mirrored() const noexcept {
    WedgeProblem m;
    m.a1_ = a2_;
    m.b1_ = b2_;
    m.a2_ = a1_;
    m.b2_ = b1_;
    return m;
}

Horizon Horizon::finite(double T) {
    if (std::isnan(T) || !(T > 0.0)) {
        throw DomainError("invalid: T must be positive");
    }
    if (std::isinf(T)) {
        throw DomainError("invalid: T must be finite for a finite horizon");
    }
    return Horizon(T);
}

double Horizon::time() const noexcept { return time_.value_or(kInf); }

DerivedParams derive_params(const WedgeProblem& problem, const Horizon& horizon) {
    DerivedParams p;
    p.a_plus = 0.5 * (problem.a1() + problem.a2());
    p.b_plus = 0.5 * (problem.b1() + problem.b2());
    p.d = 0.5 * (problem.a1() * problem.b2() - problem.a2() * problem.b1());
    p.c = 0.5 * (problem.a1() * problem.b1() - problem.a2() * problem.b2());
    p.alpha = p.a_plus * p.b_plus;
    if (!horizon.is_infinite()) {
        p.beta = p.b_plus * p.b_plus / horizon.time();
    }
    return p;
}

std::string_view to_string(Method method) noexcept {
    switch (method) {
        case Method::Anderson: return "anderson";
        case Method::Alternative: return "alternative";
        case Method::Strip: return "strip";
        case Method::Doob: return "doob";
    }
    return "unknown";
}

std::optional<Method> parse_method(std::string_view name) noexcept {
    for (Method m : {Method::Anderson, Method::Alternative, Method::Strip, Method::Doob}) {
        if (name == to_string(m)) {
            return m;
        }
    }
    return std::nullopt;
}

ClampedProbability clamp_probability(double raw) {
    if (std::isnan(raw)) {
        throw InternalError("probability evaluated to NaN");
    }
    double excursion = 0.0;
    double value = raw;
    if (raw < 0.0) {
        excursion = -raw;
        value = 0.0;
    } else if (raw > 1.0) {
        excursion = raw - 1.0;
        value = 1.0;
    }
    if (excursion > 1e-12) {
        throw InternalError("probability outside [0, 1] by " + std::to_string(excursion));
    }
    return {value, excursion};
}

double erfcx(double x) {
    if (std::isnan(x)) {
        return x;
    }
    if (x < 0.0) {
        if (x < -26.6) {
            return kInf;
        }
        return 2.0 * exp_square(x) - erfcx(-x);
    }
    if (x < 26.0) {
        return std::erfc(x) * exp_square(x);
    }
    if (std::isinf(x)) {
        return 0.0;
    }
    // Laplace continued fraction; converges in a handful of levels this far out.
    double f = x;
    for (int k = 24; k >= 1; --k) {
        f = x + 0.5 * k / f;
    }
    return kInvSqrtPi / f;
}

double psi(double lo, double hi) { return scaled_psi_term(0.0, lo, hi); }

double scaled_psi_term(double log_scale, double lo, double hi) {
    if (std::isnan(lo) || std::isnan(hi) || std::isnan(log_scale)) {
        throw DomainError("psi: NaN argument");
    }
    if (lo > hi) {
        throw DomainError("psi: lower bound exceeds upper bound");
    }
    if (lo == hi) {
        return 0.0;
    }
    if (lo >= 0.0) {
        return upper_tail_mass(log_scale, lo, hi);
    }
    if (hi <= 0.0) {
        return upper_tail_mass(log_scale, -hi, -lo);
    }
    // Straddles zero: both erf values are positive, no cancellation.
    const double mass = 0.5 * (std::erf(hi * kInvSqrt2) + std::erf(-lo * kInvSqrt2));
    if (log_scale > 700.0) {
        return std::exp(log_scale + std::log(mass));
    }
    if (log_scale < kExpUnderflow) {
        return 0.0;
    }
    return std::exp(log_scale) * mass;
}

double sin_pi(double x) {
    double r = std::fmod(x, 2.0);  // exact, in (-2, 2)
    if (r > 1.0) {
        r -= 2.0;
    } else if (r < -1.0) {
        r += 2.0;
    }
    if (r == 0.0 || r == 1.0 || r == -1.0) {
        return 0.0;
    }
    if (r > 0.5) {
        r = 1.0 - r;
    } else if (r < -0.5) {
        r = -1.0 - r;
    }
    return std::sin(std::numbers::pi * r);
}

double cos_pi(double x) { return sin_pi(x + 0.5); }

}  // namespace wedge
