#include "doctest.h"
#include "wedge/engine.hpp"
#include "wedge/limits.hpp"

#include <cmath>
#include <cstring>
#include <random>

using namespace wedge;

namespace {
DerivedParams params(double alpha, double beta) {
    DerivedParams q;
    q.a_plus = 1.0;
    q.b_plus = alpha;
    q.alpha = alpha;
    q.beta = beta;
    return q;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }
}  // namespace

TEST_CASE("classification") {
    const auto h = Horizon::finite(1.0);
    CHECK(classify(params(0.5, 0.5), h, MethodRule::paper_simple()).method == Method::Alternative);
    CHECK(classify(params(10, 0.1), h, MethodRule::paper_simple()).method == Method::Anderson);
    CHECK(classify(params(0.1, 0.1), h, MethodRule::best_bound()).method == Method::Alternative);
    CHECK(classify(params(10, 1), h, MethodRule::best_bound()).method == Method::Anderson);
    CHECK(classify(params(0.5, 0.5), Horizon::infinite(), MethodRule::paper_simple()).method ==
          Method::Doob);
    const auto strip = derive_params(WedgeProblem(0, 1, 0, 1), h);
    CHECK(classify(strip, h, MethodRule::force(Method::Anderson)).method == Method::Strip);
    CHECK_THROWS_AS((void)classify(params(1, 1), h, MethodRule::force(Method::Strip)), DomainError);
    CHECK_THROWS_AS((void)classify(params(1, 1), h, MethodRule::force(Method::Doob)), DomainError);
}

TEST_CASE("evaluate reference points") {
    const WedgeProblem p(1, 1, 1, 1);
    CHECK(evaluate(p, Horizon::finite(1e-300)).value == 1.0);
    const auto inf = evaluate(p, Horizon::infinite());
    CHECK(std::abs(inf.value - 0.7300003283226454788) < 1e-15);
    CHECK(inf.method == Method::Doob);
    const auto one = evaluate(p, Horizon::finite(1.0));
    CHECK(std::abs(one.value - 0.81918828897646707) < 1e-15);
    CHECK(one.method == Method::Anderson);
    CHECK(one.terms <= 8);
    const auto alt = evaluate(p, Horizon::finite(1.0), 1e-16, MethodRule::force(Method::Alternative));
    CHECK(std::abs(alt.value - one.value) <= 1e-12);
    const auto strip = evaluate(WedgeProblem(0, 1, 0, 1), Horizon::finite(1.0));
    CHECK(strip.method == Method::Strip);
    CHECK(std::abs(strip.value - 0.3707774297995239054) < 1e-15);
    CHECK(evaluate(WedgeProblem(0, 1, 0, 1), Horizon::infinite()).value == 0.0);
    CHECK(std::abs(evaluate(WedgeProblem(1, 2, 3, 4), Horizon::finite(1e8)).value -
                   doob_prob(WedgeProblem(1, 2, 3, 4))) <= 1e-8);
    CHECK_THROWS_AS((void)evaluate(p, Horizon::finite(1.0), 1e-17), DomainError);
    CHECK_THROWS_AS((void)evaluate(p, Horizon::finite(1.0), 0.1), DomainError);
}

TEST_CASE("methods agree and respect symmetry, range and time order") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> logu(std::log(0.1), std::log(4.0));
    for (int i = 0; i < 60; ++i) {
        const WedgeProblem p(std::exp(logu(rng)), std::exp(logu(rng)), std::exp(logu(rng)),
                             std::exp(logu(rng)));
        double last = 1.0;
        for (double T : {0.1, 1.0, 10.0, 100.0}) {
            const auto h = Horizon::finite(T);
            const double a = evaluate(p, h, 1e-16, MethodRule::force(Method::Anderson)).value;
            const double b = evaluate(p, h, 1e-16, MethodRule::force(Method::Alternative)).value;
            CHECK(std::abs(a - b) <= 1e-12);
            const double v = evaluate(p, h).value;
            CHECK(std::abs(v - evaluate(p.mirrored(), h).value) <= 1e-14);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            CHECK(v <= last + 1e-13);
            last = v;
        }
        CHECK(evaluate(p, Horizon::infinite()).value <= last + 1e-13);
    }
}

TEST_CASE("batch evaluation") {
    CHECK(evaluate_batch({}, 1e-16, MethodRule::paper_simple()).empty());

    const BatchRow row{WedgeProblem(0.3, 0.7, 1.2, 0.4), Horizon::finite(2.0)};
    const std::vector<BatchRow> same(3, row);
    const auto r = evaluate_batch(same, 1e-16, MethodRule::paper_simple());
    REQUIRE(r.size() == 3);
    CHECK(same_bits(r[0].result->value, r[1].result->value));
    CHECK(same_bits(r[0].result->value, r[2].result->value));

    std::vector<BatchRow> rows;
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int i = 0; i < 500; ++i) {
        rows.push_back({WedgeProblem(u(rng), u(rng) + 1e-3, u(rng), u(rng) + 1e-3),
                        Horizon::finite(10.0 * u(rng) + 1e-3)});
    }
    rows.push_back({WedgeProblem(1, 1, 1, 1), Horizon::infinite()});
    const auto one = evaluate_batch(rows, 1e-16, MethodRule::paper_simple(), 1);
    const auto four = evaluate_batch(rows, 1e-16, MethodRule::paper_simple(), 4);
    REQUIRE(one.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        REQUIRE(one[i].result);
        CHECK(same_bits(one[i].result->value, four[i].result->value));
        CHECK(same_bits(one[i].result->value,
                        evaluate(rows[i].problem, rows[i].horizon).value));
    }

    // A forced strip fails on ordinary rows without disturbing strip rows.
    const std::vector<BatchRow> mixed{row, {WedgeProblem(0, 1, 0, 1), Horizon::finite(1.0)}};
    const auto m = evaluate_batch(mixed, 1e-16, MethodRule::force(Method::Strip), 2);
    CHECK_FALSE(m[0].result);
    CHECK(m[0].error == "strip method needs a1 = a2 = 0");
    REQUIRE(m[1].result);
    CHECK(std::abs(m[1].result->value - 0.3707774297995239054) < 1e-15);
}

TEST_CASE("minimal term grid") {
    GridSpec node;
    node.log_alpha = {std::log(0.1), std::log(0.1), 1};
    node.log_beta = node.log_alpha;
    auto g = min_terms_grid(node);
    REQUIRE(g.size() == 1);
    CHECK(g[0].n_anderson == 7);
    CHECK(g[0].n_alternative == 3);
    CHECK(g[0].n_best == 3);
    CHECK(g[0].best == Method::Alternative);

    node.log_alpha = {std::log(10.0), std::log(10.0), 1};
    node.log_beta = {0.0, 0.0, 1};
    g = min_terms_grid(node);
    CHECK(g[0].n_anderson == 2);
    CHECK(g[0].n_best == 2);

    node.log_alpha = {0.0, 0.0, 1};
    CHECK(min_terms_grid(node)[0].n_alternative == 8);

    const auto full = min_terms_grid(GridSpec{});
    CHECK(full.size() == 121u * 121u);
    int best = 0;
    int simple = 0;
    int simple_anderson = 0;
    for (const auto& r : full) {
        CHECK(r.n_best > 0);
        CHECK(r.n_best <= r.n_simple);
        best = std::max(best, r.n_best);
        simple = std::max(simple, r.n_simple);
        if (r.simple == Method::Anderson) {
            simple_anderson = std::max(simple_anderson, r.n_simple);
        }
    }
    CHECK(best <= 6);
    CHECK(simple <= 8);
    CHECK(simple_anderson <= 5);

    GridSpec bad;
    bad.log_alpha = {1.0, 0.0, 5};
    CHECK_THROWS_AS(validate_grid(bad), DomainError);
    bad.log_alpha = {0.0, 1.0, 1};
    CHECK_THROWS_AS(validate_grid(bad), DomainError);
}
