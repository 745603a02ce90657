#include "wedge/selftest.hpp"

#include "wedge/alternative.hpp"
#include "wedge/limits.hpp"
#include "wedge/strip.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

namespace wedge {

namespace {

std::string format_worst(double worst, double limit) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "worst %.3g (limit %.3g)", worst, limit);
    return buf;
}

// Runs body, which returns the worst deviation; NaN counts as a failure.
SelftestCheck check(const std::string& name, double limit, const std::function<double()>& body) {
    SelftestCheck c{name, false, ""};
    try {
        const double worst = body();
        c.passed = worst <= limit;
        c.detail = format_worst(worst, limit);
    } catch (const std::exception& e) {
        c.detail = std::string("exception: ") + e.what();
    }
    return c;
}

constexpr double kGrid[] = {0.25, 1.0, 4.0};

}  // namespace

bool SelftestReport::ok() const noexcept {
    for (const auto& c : checks) {
        if (!c.passed) {
            return false;
        }
    }
    return !checks.empty();
}

SelftestReport run_selftest(const SelftestOptions& options) {
    SelftestReport report;
    const AndersonOptions& ao = options.anderson;

    report.checks.push_back(check("series agree on the grid", 1e-12, [&] {
        double worst = 0.0;
        for (double a1 : kGrid) {
            for (double b1 : kGrid) {
                for (double a2 : kGrid) {
                    for (double b2 : kGrid) {
                        const WedgeProblem p(a1, b1, a2, b2);
                        for (double T : {0.1, 1.0, 10.0}) {
                            const auto q = derive_params(p, Horizon::finite(T));
                            const int na = anderson_min_terms(q, 1e-16).terms;
                            const int nb = alt_min_terms(q, 1e-16).terms;
                            const double x = anderson_partial_sum(p, T, na, ao);
                            const double y = alt_partial_sum(p, T, nb);
                            worst = std::max(worst, std::isnan(x) ? INFINITY : std::abs(x - y));
                        }
                    }
                }
            }
        }
        return worst;
    }));

    report.checks.push_back(check("strip densities agree", 1e-13, [] {
        double worst = 0.0;
        for (double a1 : {0.0, 0.5, 1.0}) {
            for (double t : {0.05, 0.5, 3.0}) {
                const StripProblem sp(0.2, a1, 1.0);
                for (int k = 0; k <= 10; ++k) {
                    const double x = -a1 + (a1 + 1.0) * k / 10.0;
                    worst = std::max(worst, std::abs(strip_density_fourier(sp, x, t, 2000) -
                                                     strip_density_images(sp, x, t, 60)));
                }
                worst = std::max(worst, std::abs(strip_survival_fourier(sp, t, 4001) -
                                                 strip_survival_images(sp, t, 60)));
            }
        }
        return worst;
    }));

    report.checks.push_back(check("strip reference value", 1e-15, [] {
        return std::abs(strip_survival(StripProblem(0.0, 1.0, 1.0), 1.0, 1e-16) -
                        0.3707774297995239054);
    }));

    // Theta-series rounding grows with ycart_condition; differences are scaled by it.
    report.checks.push_back(check("infinite-horizon series agree", 1e-14, [] {
        double worst = std::abs(doob_prob(WedgeProblem(1, 1, 1, 1)) - 0.7300003283226454788);
        for (double a1 : kGrid) {
            for (double b1 : kGrid) {
                for (double a2 : kGrid) {
                    for (double b2 : kGrid) {
                        const WedgeProblem p(a1, b1, a2, b2);
                        const double cond = ycart_condition(p);
                        if (cond <= 1e2) {
                            worst = std::max(worst, std::abs(doob_prob(p) - ycart_prob(p)) /
                                                        std::max(1.0, cond));
                        }
                    }
                }
            }
        }
        return worst;
    }));

    report.checks.push_back(check("long horizon approaches the limit", 1e-8, [&] {
        double worst = 0.0;
        for (double a1 : kGrid) {
            for (double b2 : kGrid) {
                const WedgeProblem p(a1, 1.0, 1.0, b2);
                const auto q = derive_params(p, Horizon::finite(1e8));
                const int n = anderson_min_terms(q, 1e-16).terms;
                const double x = anderson_partial_sum(p, 1e8, n, ao);
                worst = std::max(worst, std::isnan(x) ? INFINITY : std::abs(x - doob_prob(p)));
            }
        }
        return worst;
    }));

    return report;
}

}  // namespace wedge
