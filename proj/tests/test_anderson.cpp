#include "doctest.h"
#include "wedge/anderson.hpp"

#include <cmath>
#include <random>

using namespace wedge;

TEST_CASE("abcd small cases") {
    const auto k1 = abcd(1, WedgeProblem(1, 1, 1, 1));
    CHECK(k1.A == 1.0);
    CHECK(k1.B == 1.0);
    CHECK(k1.C == 4.0);
    CHECK(k1.D == 4.0);
    const auto k2 = abcd(2, WedgeProblem(1, 1, 1, 1));
    CHECK(k2.A == 9.0);
    CHECK(k2.B == 9.0);
    CHECK(k2.C == 16.0);
    CHECK(k2.D == 16.0);
    const auto k3 = abcd(1, WedgeProblem(1, 2, 3, 4));
    CHECK(k3.A == 12.0);
    CHECK(k3.B == 2.0);
    CHECK(k3.C == 22.0);
    CHECK(k3.D == 26.0);
    CHECK_THROWS_AS((void)abcd(0, WedgeProblem(1, 1, 1, 1)), DomainError);
}

TEST_CASE("abcd rewrite identity and lower bound") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 4.0);
    for (int trial = 0; trial < 100; ++trial) {
        const WedgeProblem p(u(rng), u(rng) + 0.01, u(rng), u(rng) + 0.01);
        const double alpha = derive_params(p, Horizon::infinite()).alpha;
        for (int n = 1; n <= 50; ++n) {
            const auto x = abcd(n, p);
            const auto y = abcd_reduced(n, p);
            const double scale = std::max(1.0, std::abs(x.A) + std::abs(x.C));
            CHECK(std::abs(x.A - y.A) <= 1e-12 * scale);
            CHECK(std::abs(x.B - y.B) <= 1e-12 * scale);
            CHECK(std::abs(x.C - y.C) <= 1e-12 * scale);
            CHECK(std::abs(x.D - y.D) <= 1e-12 * scale);
            const double floor = 4.0 * (n - 1) * (n - 1) * alpha * (1 - 1e-14);
            CHECK(x.A >= floor);
            CHECK(x.B >= floor);
            CHECK(x.C >= floor);
            CHECK(x.D >= floor);
        }
    }
}

TEST_CASE("reference values") {
    struct Case {
        double a1, b1, a2, b2, T, value;
    };
    const Case cases[] = {
        {1, 1, 1, 1, 1, 0.81918828897646707},
        {1, 2, 3, 4, 0.5, 0.99948612104259379},
        {0.3, 0.7, 1.2, 0.4, 2, 0.20801809661383116},
        {0.25, 4, 4, 0.25, 0.1, 0.88773470251433111},
    };
    for (const auto& c : cases) {
        const WedgeProblem p(c.a1, c.b1, c.a2, c.b2);
        CHECK(std::abs(anderson_partial_sum(p, c.T, 20) - c.value) < 1e-14);
    }
}

TEST_CASE("short and long horizons") {
    const WedgeProblem p(1, 1, 1, 1);
    CHECK(anderson_partial_sum(p, 1e-6, 5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(anderson_partial_sum(p, 1e8, 6) - 0.730000) < 1e-6);
    CHECK(std::abs(anderson_partial_sum(p, 1e8, 6) - 0.7300003283226454788) < 1e-6);
}

TEST_CASE("printed second-sum exponent disagrees") {
    const WedgeProblem p(1, 1, 1, 1);
    const double doubled = anderson_partial_sum(p, 1.0, 20);
    const double printed =
        anderson_partial_sum(p, 1.0, 20, {SecondSumExponent::AsPrinted});
    CHECK(std::abs(doubled - 0.81918828897646707) < 1e-14);
    CHECK(std::abs(printed - doubled) > 0.05);
}

TEST_CASE("reflection symmetry") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.05, 3.0);
    for (int i = 0; i < 200; ++i) {
        const WedgeProblem p(u(rng), u(rng), u(rng), u(rng));
        const double T = u(rng);
        CHECK(std::abs(anderson_partial_sum(p, T, 8) - anderson_partial_sum(p.mirrored(), T, 8)) <=
              1e-14);
    }
}

TEST_CASE("remainder stays under the bound") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> logu(std::log(0.05), std::log(6.0));
    int checked = 0;
    for (int i = 0; i < 400; ++i) {
        const WedgeProblem p(std::exp(logu(rng)), std::exp(logu(rng)), std::exp(logu(rng)),
                             std::exp(logu(rng)));
        const double T = std::exp(logu(rng));
        const auto q = derive_params(p, Horizon::finite(T));
        const double ab = q.alpha * *q.beta;
        if (ab < 1e-3 || ab > 1e3) {
            continue;
        }
        for (int N = 2; N <= 6; ++N) {
            const double tail = std::abs(anderson_tail(p, T, N, N + 10));
            CHECK(tail <= anderson_remainder_bound(q.alpha, *q.beta, N));
        }
        ++checked;
    }
    CHECK(checked > 100);
}

TEST_CASE("term planning") {
    const auto a = anderson_min_terms(10.0, 1.0, 1e-16);
    CHECK(a.terms == 2);
    CHECK(a.bound == doctest::Approx(std::exp(-80.0) / 40.0).epsilon(1e-12));
    CHECK(a.method == Method::Anderson);

    const auto b = anderson_min_terms(0.1, 0.1, 1e-16);
    CHECK(b.terms == 7);
    CHECK(b.bound == doctest::Approx(3.9e-17).epsilon(0.02));
    CHECK(anderson_remainder_bound(0.1, 0.1, 6) == doctest::Approx(2.8e-12).epsilon(0.02));

    // e^{-8(N-1)^2}/(4(N-1)): 2.1e-16 at N=3, so N=4.
    const auto c = anderson_min_terms(1.0, 0.0, 1e-16);
    CHECK(c.terms == 4);
    CHECK(anderson_remainder_bound(1.0, 0.0, 3) > 1e-16);

    CHECK_THROWS_AS((void)anderson_min_terms(1.0, 1.0, 1e-17), DomainError);
    CHECK_THROWS_AS((void)anderson_min_terms(1e-6, 1e-6, 1e-16), PlanningError);
}

TEST_CASE("plans are monotone in the tolerance") {
    for (double alpha : {0.05, 0.3, 1.0, 4.0}) {
        for (double beta : {0.0, 0.05, 0.5, 3.0}) {
            int last = 0;
            for (double tol = 1e-2; tol >= 1e-16; tol /= 10) {
                const int n = anderson_min_terms(alpha, beta, tol).terms;
                CHECK(n >= last);
                last = n;
            }
        }
    }
}
