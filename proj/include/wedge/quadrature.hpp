#pragma once

#include "wedge/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

namespace wedge {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;  ///< accumulated Richardson error estimate
    int evaluations = 0;
};

/// Thrown when a panel still fails its error test at the depth limit.
class QuadratureError : public Error {
public:
    QuadratureError(const std::string& what, double estimate, double error_bound)
        : Error(what), estimate_(estimate), error_bound_(error_bound) {}

    [[nodiscard]] double estimate() const noexcept { return estimate_; }
    [[nodiscard]] double error_bound() const noexcept { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

namespace detail {

template <class F>
class SimpsonIntegrator {
public:
    SimpsonIntegrator(F& f, int max_depth, double noise_factor)
        : f_(f), max_depth_(max_depth), noise_factor_(noise_factor) {}

    struct Panel {
        double a, b, fa, fm, fb;
    };

    Panel sample(double a, double b) {
        Panel p{a, b, eval(a), eval(0.5 * (a + b)), eval(b)};
        peak_ = std::max({peak_, std::abs(p.fa), std::abs(p.fm), std::abs(p.fb)});
        return p;
    }

    void refine(const Panel& p, double tol) {
        const double whole = (p.b - p.a) / 6.0 * (p.fa + 4.0 * p.fm + p.fb);
        refine(p.a, p.b, p.fa, p.fm, p.fb, whole, tol, 0);
    }

    QuadratureResult result() const { return {sum_, error_, evaluations_}; }
    bool exhausted() const { return exhausted_; }

private:
    double eval(double x) {
        ++evaluations_;
        return f_(x);
    }

    void refine(double a, double b, double fa, double fm, double fb, double whole, double tol,
                int depth) {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = eval(lm);
        const double frm = eval(rm);
        const double h = b - a;
        // Actual child widths: h / 2 is off by an ulp of |a| once h is small.
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double delta = left + right - whole;
        // Differences below this are rounding noise: evaluation error of an
        // integrand of size peak_ over width h, plus the slope times the
        // rounding of the node positions themselves (an ulp of |x|).
        constexpr double eps = std::numeric_limits<double>::epsilon();
        const double slope_noise = 8.0 * std::max(std::abs(a), std::abs(b)) *
                                   (std::abs(fa - fm) + std::abs(fm - fb));
        const double noise = eps * (noise_factor_ * h * peak_ + slope_noise);
        if (std::abs(delta) <= 15.0 * tol || std::abs(delta) <= noise) {
            sum_ += left + right + delta / 15.0;
            error_ += std::abs(delta) / 15.0;
            return;
        }
        if (depth >= max_depth_ || !(m > a && m < b)) {
            exhausted_ = true;
            sum_ += left + right + delta / 15.0;
            error_ += std::abs(delta) / 15.0;
            return;
        }
        refine(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1);
        refine(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
    }

    F& f_;
    int max_depth_;
    double noise_factor_;
    double sum_ = 0.0;
    double error_ = 0.0;
    int evaluations_ = 0;
    double peak_ = 0.0;
    bool exhausted_ = false;
};

}  // namespace detail

/// Adaptive Simpson with Richardson correction over consecutive breakpoints.
///
/// The absolute tolerance is shared between panels in proportion to their
/// width. A panel also stops refining once its Richardson difference is
/// below noise_factor * eps * width * max|f| (max over the initial samples)
/// plus a node-rounding term eps * |x| * |f'| * width, since smaller
/// differences are rounding noise; tolerances under that floor
/// are met only up to it. Integrands whose evaluation error exceeds a few ulps
/// of max|f| should raise noise_factor accordingly. Throws QuadratureError (carrying the best estimate) when any panel
/// reaches max_depth without passing the error test.
template <class F>
QuadratureResult adaptive_simpson(F&& f, std::span<const double> breakpoints, double abs_tol,
                                  int max_depth, double noise_factor = 32.0) {
    if (breakpoints.size() < 2) {
        return {};
    }
    if (!(abs_tol > 0.0) || max_depth < 1) {
        throw DomainError("adaptive_simpson: need abs_tol > 0 and max_depth >= 1");
    }
    const double total = breakpoints.back() - breakpoints.front();
    detail::SimpsonIntegrator<std::remove_reference_t<F>> integrator(f, max_depth,
                                                                           noise_factor);
    // Sample every panel first so the rounding floor knows the integrand scale.
    std::vector<typename detail::SimpsonIntegrator<std::remove_reference_t<F>>::Panel> panels;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (breakpoints[i + 1] > breakpoints[i]) {
            panels.push_back(integrator.sample(breakpoints[i], breakpoints[i + 1]));
        }
    }
    for (const auto& p : panels) {
        integrator.refine(p, abs_tol * (p.b - p.a) / total);
    }
    QuadratureResult r = integrator.result();
    if (integrator.exhausted()) {
        throw QuadratureError("adaptive_simpson: depth limit reached", r.value, r.error);
    }
    return r;
}

}  // namespace wedge
