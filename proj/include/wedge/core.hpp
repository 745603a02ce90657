#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wedge {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input outside the supported domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// No term count up to kMaxTerms meets the requested tolerance.
class PlanningError : public Error {
public:
    using Error::Error;
};

/// An internal consistency check failed (e.g. probability far outside [0, 1]).
class InternalError : public Error {
public:
    using Error::Error;
};

/// Upper limit on the number of series terms any plan may request.
inline constexpr int kMaxTerms = 128;

/// Smallest truncation tolerance accepted by the planners.
inline constexpr double kMinTolerance = 1e-16;

/// Brownian motion started at 0 must stay strictly between -a1 t - b1 and a2 t + b2.
class WedgeProblem {
public:
    /// Throws DomainError unless b1, b2 > 0, a1, a2 >= 0 and all are finite.
    WedgeProblem(double a1, double b1, double a2, double b2);

    [[nodiscard]] double a1() const noexcept { return a1_; }
    [[nodiscard]] double b1() const noexcept { return b1_; }
    [[nodiscard]] double a2() const noexcept { return a2_; }
    [[nodiscard]] double b2() const noexcept { return b2_; }

    /// The reflected problem (a2, b2, a1, b1); it has the same survival probability.
    [[nodiscard]] WedgeProblem mirrored() const noexcept;

private:
    WedgeProblem() = default;

    double a1_ = 0.0;
    double b1_ = 1.0;
    double a2_ = 0.0;
    double b2_ = 1.0;
};

class Horizon {
public:
    /// Throws DomainError unless 0 < T < inf.
    [[nodiscard]] static Horizon finite(double T);
    [[nodiscard]] static Horizon infinite() noexcept { return Horizon{}; }

    [[nodiscard]] bool is_infinite() const noexcept { return !time_.has_value(); }
    /// The horizon length; +inf for the infinite horizon.
    [[nodiscard]] double time() const noexcept;

private:
    Horizon() = default;
    explicit Horizon(double T) : time_(T) {}

    std::optional<double> time_;
};

/// Reduced quantities that every series and remainder bound depends on.
struct DerivedParams {
    double a_plus = 0.0;  ///< (a1 + a2) / 2
    double b_plus = 0.0;  ///< (b1 + b2) / 2
    double d = 0.0;       ///< (a1 b2 - a2 b1) / 2
    double c = 0.0;       ///< (a1 b1 - a2 b2) / 2
    double alpha = 0.0;   ///< a_plus * b_plus
    std::optional<double> beta;  ///< b_plus^2 / T; empty for the infinite horizon

    /// beta, with the infinite horizon mapped to 0 as the bounds expect.
    [[nodiscard]] double beta_or_zero() const noexcept { return beta.value_or(0.0); }
};

[[nodiscard]] DerivedParams derive_params(const WedgeProblem& problem, const Horizon& horizon);

enum class Method { Anderson, Alternative, Strip, Doob };

[[nodiscard]] std::string_view to_string(Method method) noexcept;
[[nodiscard]] std::optional<Method> parse_method(std::string_view name) noexcept;

/// Series choice and term count whose remainder bound meets a tolerance.
struct TruncationPlan {
    Method method = Method::Anderson;
    int terms = 0;
    double bound = 0.0;
    double tolerance = 0.0;
};

struct EvalResult {
    double value = 0.0;
    Method method = Method::Anderson;
    int terms = 0;
    double remainder_bound = 0.0;
    /// Distance of the unclamped series value outside [0, 1].
    double clamp_excursion = 0.0;
};

struct ClampedProbability {
    double value;
    double excursion;
};

/// Clamps to [0, 1]; throws InternalError when the excursion exceeds 1e-12.
[[nodiscard]] ClampedProbability clamp_probability(double raw);

/// Standard normal mass on [lo, hi]; either bound may be infinite.
///
/// Same-sign bounds are evaluated through the scaled complementary error
/// function so that far tails keep full relative accuracy. Throws
/// DomainError for NaN or reversed bounds.
[[nodiscard]] double psi(double lo, double hi);

/// exp(log_scale) * psi(lo, hi) with the Gaussian exponent of the tail folded
/// into log_scale before exponentiating. Returns 0 when the combined exponent
/// is below the double range.
[[nodiscard]] double scaled_psi_term(double log_scale, double lo, double hi);

/// exp(x^2) erfc(x).
[[nodiscard]] double erfcx(double x);

/// sin(pi x), exactly zero at integers.
[[nodiscard]] double sin_pi(double x);

/// cos(pi x), exactly zero at half-integers.
[[nodiscard]] double cos_pi(double x);

}  // namespace wedge
