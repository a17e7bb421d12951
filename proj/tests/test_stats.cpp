#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "nptasmc/rng.hpp"
#include "nptasmc/stats.hpp"

using namespace nptasmc;

TEST_SUITE_BEGIN("stats");

TEST_CASE("sample size follows the Chernoff-Hoeffding budget") {
    CHECK(required_samples({0.05, 0.05}) == 4794);
    CHECK(required_samples({0.01, 0.1}) == 1843);
    CHECK(required_samples({1.0, 0.05}) == 0);
}

TEST_CASE("the sequential test crosses its boundaries as computed by hand") {
    SprtParams params;
    params.theta = 0.5;
    params.delta0 = 0.1;
    params.delta1 = 0.1; // p0 = 0.6, p1 = 0.4
    params.alpha = 0.05;
    params.beta = 0.05;

    // Eight consecutive successes push the ratio to 8*ln(2/3) = -3.244,
    // just past ln(0.05/0.95) = -2.944.
    const SprtResult h0 = sprt(constant_source(true), params);
    CHECK(h0.decision == Hypothesis::H0);
    CHECK(h0.samples == 8);

    const SprtResult h1 = sprt(constant_source(false), params);
    CHECK(h1.decision == Hypothesis::H1);
    CHECK(h1.samples == 8);

    const SprtResult undecided = sprt(capped(constant_source(true), 4), params);
    CHECK(undecided.decision == Hypothesis::Undecided);
    CHECK(undecided.samples == 4);
}

TEST_CASE("the sequential test errs within its strength at the thresholds") {
    SprtParams params;
    params.theta = 0.5;
    params.delta0 = 0.05;
    params.delta1 = 0.05;
    params.alpha = 0.05;
    params.beta = 0.05;

    int wrong_at_p0 = 0;
    int wrong_at_p1 = 0;
    for (uint64_t trial = 0; trial < 500; ++trial) {
        if (sprt(bernoulli_source(params.p0(), 1000 + trial), params).decision == Hypothesis::H1) {
            ++wrong_at_p0;
        }
        if (sprt(bernoulli_source(params.p1(), 2000 + trial), params).decision == Hypothesis::H0) {
            ++wrong_at_p1;
        }
    }
    CHECK(wrong_at_p0 / 500.0 <= params.alpha + 0.03);
    CHECK(wrong_at_p1 / 500.0 <= params.beta + 0.03);
}

TEST_CASE("estimation consumes exactly N outcomes and brackets the truth") {
    const EstimateResult sure = estimate(constant_source(true), {0.05, 0.05});
    CHECK(sure.p_hat == 1.0);
    CHECK(sure.samples == 4794);

    // Fair coin: the estimate stays within epsilon almost always.
    int inside = 0;
    for (uint64_t trial = 0; trial < 100; ++trial) {
        const EstimateResult r = estimate(bernoulli_source(0.5, 3000 + trial), {0.05, 0.05});
        if (r.p_hat >= 0.45 && r.p_hat <= 0.55) {
            ++inside;
        }
    }
    CHECK(inside >= 95);

    CHECK_THROWS_AS((void)estimate(capped(constant_source(true), 100), {0.05, 0.05}),
                    model_error);
}

TEST_CASE("estimation covers the truth at its confidence") {
    const EstimateParams params{0.05, 0.05};
    int covered = 0;
    const double truth = 0.3;
    for (uint64_t trial = 0; trial < 500; ++trial) {
        const EstimateResult r = estimate(bernoulli_source(truth, 5000 + trial), params);
        if (truth >= r.lo && truth <= r.hi) {
            ++covered;
        }
    }
    CHECK(covered / 500.0 >= 1.0 - params.delta - 0.03);
}

namespace {

Source paired(double p, uint64_t seed, uint64_t offset) {
    return [p, seed, offset](uint64_t k) -> std::optional<Sample> {
        RngStream rng = substream(seed, 2 * k + offset);
        return rng.uniform01() < p ? Sample::hit(0.0) : Sample::miss();
    };
}

} // namespace

TEST_CASE("comparison prefers the clearly better process") {
    CompareParams params; // u0 = 0.5, u1 = 2
    int p1_wins = 0;
    int p2_wins = 0;
    for (uint64_t trial = 0; trial < 30; ++trial) {
        const uint64_t seed = 100 + trial;
        const CompareVerdict forward =
            compare(paired(0.75, seed, 0), paired(0.50, seed, 1), params);
        if (forward.value == CompareOutcome::Process1Superior) {
            ++p1_wins;
        }
        const CompareVerdict swapped =
            compare(paired(0.50, seed, 0), paired(0.75, seed, 1), params);
        if (swapped.value == CompareOutcome::Process2Superior) {
            ++p2_wins;
        }
    }
    CHECK(p1_wins >= 27);
    CHECK(p2_wins >= 27);
}

TEST_CASE("identical processes trip the equality precheck") {
    CompareParams params;
    params.p0_eq = 0.95;
    params.p1_eq = 0.85;
    int indifferent = 0;
    for (uint64_t trial = 0; trial < 20; ++trial) {
        // The same stream on both sides: outcomes always equal.
        const Source same = paired(0.9, 400 + trial, 0);
        const CompareVerdict verdict = compare(same, same, params);
        if (verdict.value == CompareOutcome::Indifferent) {
            ++indifferent;
        }
    }
    CHECK(indifferent == 20);
}

TEST_CASE("degenerate comparison thresholds are rejected") {
    CompareParams params;
    params.u0 = params.u1 = 1.0;
    CHECK_THROWS_AS((void)TwoPhaseComparator(params), model_error);
}

TEST_CASE("the ratio form and the count form take identical decisions") {
    CompareParams params;
    params.u0 = 0.5;
    params.u1 = 2.0;
    params.alpha = 0.05;
    params.beta = 0.05;
    // Disable the precheck by making it decide "differences common" fast.
    params.p0_eq = 0.999;
    params.p1_eq = 0.001;

    const double a = params.boundary_a();
    const double r = params.boundary_r();
    const double c = params.boundary_c();

    RngStream rng(2718, 0);
    for (int trial = 0; trial < 200; ++trial) {
        TwoPhaseComparator comparator(params);
        double t = 0; // informative successes
        double n = 0; // informative pairs
        const double p1 = rng.uniform01();
        const double p2 = rng.uniform01();
        for (int step = 0; step < 4000; ++step) {
            const bool x1 = rng.uniform01() < p1;
            const bool x2 = rng.uniform01() < p2;
            const auto verdict = comparator.update(x1, x2);
            std::optional<CompareOutcome> counted;
            if (x1 != x2) {
                n += 1;
                t += (!x1 && x2) ? 1 : 0;
                if (t >= r + n * c) {
                    counted = CompareOutcome::Process2Superior;
                } else if (t <= a + n * c) {
                    counted = CompareOutcome::Process1Superior;
                }
            }
            if (verdict.has_value() != counted.has_value()) {
                // Disagreement is only tolerable on a knife-edge boundary.
                const double margin =
                    std::min(std::abs(t - (r + n * c)), std::abs(t - (a + n * c)));
                CHECK_MESSAGE(margin < 1e-9, "forms disagree away from the boundary");
                break;
            }
            if (verdict) {
                CHECK(*verdict == *counted);
                break;
            }
        }
    }
}

TEST_CASE("a single-bound parametrised comparison reduces to the plain one") {
    CompareParams params;
    const Source s1 = paired(0.75, 31, 0);
    const Source s2 = paired(0.50, 31, 1);
    const CompareVerdict plain = compare(s1, s2, params);
    const ParamCompareResult vec = compare_param(s1, s2, 1.0, 1, params);
    REQUIRE(vec.results.size() == 1);
    const double expected = plain.value == CompareOutcome::Process2Superior ? 1.0
                            : plain.value == CompareOutcome::Process1Superior ? 0.0
                                                                              : 0.5;
    CHECK(vec.results.front() == expected);
    CHECK(vec.pairs == plain.total_pairs);
}

TEST_CASE("nested-bound outcomes are monotone per sample") {
    RngStream rng(93, 0);
    for (int trial = 0; trial < 200; ++trial) {
        Sample sample;
        sample.value = rng.pick(2) == 0;
        sample.event_cost = sample.value ? rng.uniform(0, 10)
                                         : std::numeric_limits<double>::infinity();
        bool prev = false;
        for (int i = 1; i <= 10; ++i) {
            const bool y = sample.at(i);
            if (i > 1) {
                CHECK(prev <= y);
            }
            prev = y;
        }
    }
}

TEST_CASE("run reuse never costs more pairs than independent comparisons") {
    CompareParams params;
    const uint64_t seed = 808;
    auto source_with_costs = [&](double p, uint64_t offset) -> Source {
        return [=](uint64_t k) -> std::optional<Sample> {
            RngStream rng = substream(seed, 2 * k + offset);
            const bool hit = rng.uniform01() < p;
            return hit ? Sample::hit(rng.uniform(0, 4)) : Sample::miss();
        };
    };
    const Source s1 = source_with_costs(0.4, 0);
    const Source s2 = source_with_costs(0.7, 1);
    const uint32_t n = 10;
    const ParamCompareResult reused = compare_param(s1, s2, 4.0, n, params);
    uint64_t independent_total = 0;
    for (uint32_t i = 1; i <= n; ++i) {
        const double b = 4.0 * i / n;
        const Source c1 = [&, b](uint64_t k) -> std::optional<Sample> {
            auto s = s1(k);
            return Sample{s->at(b), 0, 0, false};
        };
        const Source c2 = [&, b](uint64_t k) -> std::optional<Sample> {
            auto s = s2(k);
            return Sample{s->at(b), 0, 0, false};
        };
        independent_total += compare(c1, c2, params).total_pairs;
    }
    CHECK(reused.pairs <= independent_total);
}

TEST_CASE("verdicts replay exactly under a fixed seed") {
    CompareParams params;
    const CompareVerdict v1 = compare(paired(0.6, 55, 0), paired(0.4, 55, 1), params);
    const CompareVerdict v2 = compare(paired(0.6, 55, 0), paired(0.4, 55, 1), params);
    CHECK(v1.value == v2.value);
    CHECK(v1.total_pairs == v2.total_pairs);
    CHECK(v1.informative_pairs == v2.informative_pairs);

    SprtParams sprt_params;
    const SprtResult s1 = sprt(bernoulli_source(0.7, 99), sprt_params);
    const SprtResult s2 = sprt(bernoulli_source(0.7, 99), sprt_params);
    CHECK(s1.decision == s2.decision);
    CHECK(s1.samples == s2.samples);
}

TEST_SUITE_END();
