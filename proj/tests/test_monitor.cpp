#include "doctest.h"

#include <cmath>

#include "fixtures.hpp"
#include "nptasmc/monitor.hpp"
#include "nptasmc/rng.hpp"

using namespace nptasmc;

TEST_SUITE_BEGIN("monitor");

namespace {

// Single silent component: runs are one long delay cut at the bound.
const char* kDriftText = R"(network drift
automaton P
  clock x
  location P0
  initial P0
end
)";

StateProperty random_phi(const NetworkModel& model, RngStream& rng, int depth = 2) {
    if (depth > 0 && rng.pick(3) == 0) {
        switch (rng.pick(3)) {
        case 0: return StateProperty::negate(random_phi(model, rng, depth - 1));
        case 1: {
            std::vector<StateProperty> kids;
            kids.push_back(random_phi(model, rng, depth - 1));
            kids.push_back(random_phi(model, rng, depth - 1));
            return StateProperty::conj(std::move(kids));
        }
        default: {
            std::vector<StateProperty> kids;
            kids.push_back(random_phi(model, rng, depth - 1));
            kids.push_back(random_phi(model, rng, depth - 1));
            return StateProperty::disj(std::move(kids));
        }
        }
    }
    if (rng.pick(2) == 0) {
        const uint32_t comp = static_cast<uint32_t>(rng.pick(model.components.size()));
        const uint32_t loc =
            static_cast<uint32_t>(rng.pick(model.components[comp].locations.size()));
        return StateProperty::in_location(comp, loc);
    }
    const uint32_t clock = static_cast<uint32_t>(rng.pick(model.clock_names.size()));
    const Rel rel = rng.pick(2) ? Rel::Ge : Rel::Le;
    return StateProperty::clock_cmp(clock, rel, static_cast<int64_t>(rng.pick(4)));
}

// Brute-force reference: sample the run densely in time.
bool discretized_diamond(const NetworkModel& model, const Run& run, const StateProperty& phi,
                         uint32_t observer, double bound, int points_per_segment) {
    const NetworkState* state = &run.initial;
    for (const RunStep& step : run.steps) {
        const RateVector rates = model.rates_for(state->locations);
        for (int i = 0; i <= points_per_segment; ++i) {
            const double t = step.delay * i / points_per_segment;
            NetworkState probe = *state;
            probe.clocks = advance(state->clocks, rates, t);
            if (probe.clocks[observer] <= bound + 1e-9 && eval_property(phi, probe)) {
                return true;
            }
        }
        state = &step.post;
    }
    if (state->clocks[observer] <= bound + 1e-9 && eval_property(phi, *state)) {
        return true;
    }
    return false;
}

} // namespace

TEST_CASE("a location entered inside the bound is a hit") {
    const NetworkModel model = fixtures::must_validate(fixtures::kAbtText);
    const PwctlQuery query = fixtures::must_query("Pr[time<=2](<> T.T3)", model);
    // Find a satisfied run and cross-check the hit fields against the trace.
    int checked = 0;
    for (uint64_t k = 0; k < 200; ++k) {
        RngStream rng = substream(17, k);
        const Run run = random_run(model, kTimeClock, 2.0, rng);
        const Outcome outcome = check_diamond(model, run, query.phi, kTimeClock, 2.0);
        const uint32_t t3 = *model.components[2].location_index("T3");
        double entry_time = -1;
        double elapsed = 0;
        for (const RunStep& step : run.steps) {
            elapsed += step.delay;
            if (step.post.locations[2] == t3) {
                entry_time = elapsed;
                break;
            }
        }
        if (entry_time >= 0 && entry_time <= 2.0) {
            ++checked;
            REQUIRE(outcome.satisfied);
            CHECK(*outcome.hit_time == doctest::Approx(entry_time));
            CHECK(*outcome.hit_cost == doctest::Approx(entry_time));
        } else {
            CHECK_FALSE(outcome.satisfied);
        }
    }
    CHECK(checked > 50);
}

TEST_CASE("a linear crossing inside a delay is found exactly") {
    const NetworkModel model = fixtures::must_validate(kDriftText);
    RngStream rng = substream(1, 0);
    const Run run = random_run(model, kTimeClock, 3.0, rng);
    REQUIRE(run.steps.size() == 1);
    REQUIRE(run.steps.front().delay == doctest::Approx(3.0));

    const StateProperty phi = StateProperty::clock_cmp(*model.clock_index("x"), Rel::Ge, 2);
    const Outcome outcome = check_diamond(model, run, phi, kTimeClock, 3.0);
    REQUIRE(outcome.satisfied);
    CHECK(*outcome.hit_time == doctest::Approx(2.0));
    CHECK(*outcome.hit_cost == doctest::Approx(2.0));

    // Tighter bound: the crossing lies beyond it.
    const Outcome miss = check_diamond(model, run, phi, kTimeClock, 1.5);
    CHECK_FALSE(miss.satisfied);
}

TEST_CASE("an unsatisfied truncated run stays unsatisfied") {
    const NetworkModel model = fixtures::must_validate(fixtures::kAbtText);
    const uint32_t t3 = *model.components[2].location_index("T3");
    Run run;
    run.observer = kTimeClock;
    run.bound = 2.0;
    run.initial = model.initial_state();
    RunStep step;
    step.delay = 2.0;
    step.post = run.initial;
    step.post.clocks = advance(run.initial.clocks, model.rates_for(run.initial.locations), 2.0);
    run.steps.push_back(step);
    const Outcome outcome =
        check_diamond(model, run, StateProperty::in_location(2, t3), kTimeClock, 2.0);
    CHECK_FALSE(outcome.satisfied);
    CHECK_FALSE(outcome.hit_cost.has_value());
}

TEST_CASE("box truth is vacuous, bound-limited and dual") {
    const NetworkModel model = fixtures::must_validate(fixtures::kAbtText);
    RngStream rng = substream(23, 0);
    const Run run = random_run(model, kTimeClock, 2.0, rng);

    CHECK(check_box(model, run, StateProperty::make_true(), kTimeClock, 2.0).satisfied);

    // Violation strictly beyond the bound does not count.
    const NetworkModel drift = fixtures::must_validate(kDriftText);
    RngStream drng = substream(2, 0);
    const Run drun = random_run(drift, kTimeClock, 8.0, drng);
    const StateProperty below7 =
        StateProperty::clock_cmp(*drift.clock_index("x"), Rel::Lt, 7);
    CHECK(check_box(drift, drun, below7, kTimeClock, 6.0).satisfied);
    CHECK_FALSE(check_box(drift, drun, below7, kTimeClock, 8.0).satisfied);
}

TEST_CASE("box equals negated diamond of the negation") {
    const NetworkModel model = fixtures::must_validate(fixtures::kAbtText);
    RngStream phi_rng(31, 0);
    for (uint64_t k = 0; k < 300; ++k) {
        RngStream rng = substream(37, k);
        const Run run = random_run(model, kTimeClock, 2.0, rng);
        const StateProperty phi = random_phi(model, phi_rng);
        const Outcome box = check_box(model, run, phi, kTimeClock, 2.0);
        const Outcome dia =
            check_diamond(model, run, StateProperty::negate(phi), kTimeClock, 2.0);
        CHECK(box.satisfied == !dia.satisfied);
    }
}

TEST_CASE("a hit at cost h satisfies every bound from h up") {
    const NetworkModel model = fixtures::must_validate(fixtures::kAbtText);
    const PwctlQuery query = fixtures::must_query("Pr[C<=6](<> T.T3)", model);
    const uint32_t c_clock = *model.clock_index("C");
    for (uint64_t k = 0; k < 300; ++k) {
        RngStream rng = substream(41, k);
        const Run run = random_run(model, c_clock, 6.0, rng);
        const Outcome outcome = check_diamond(model, run, query.phi, c_clock, 6.0);
        if (!outcome.satisfied) {
            continue;
        }
        for (double extra : {0.0, 0.3, 1.0, 2.5}) {
            const double bound = std::min(6.0, *outcome.hit_cost + extra);
            CHECK(check_diamond(model, run, query.phi, c_clock, bound).satisfied);
        }
    }
}

TEST_CASE("interval analysis never misses what dense sampling finds") {
    const NetworkModel model = fixtures::must_validate(fixtures::kAbtText);
    RngStream phi_rng(53, 0);
    for (uint64_t k = 0; k < 120; ++k) {
        RngStream rng = substream(59, k);
        const Run run = random_run(model, kTimeClock, 2.0, rng);
        const StateProperty phi = random_phi(model, phi_rng);
        const bool exact = check_diamond(model, run, phi, kTimeClock, 2.0).satisfied;
        const bool sampled = discretized_diamond(model, run, phi, kTimeClock, 2.0, 10000);
        if (sampled) {
            CHECK(exact);
        }
    }
}

TEST_CASE("monitoring is a pure function of the run") {
    const NetworkModel model = fixtures::must_validate(fixtures::kAbtText);
    const PwctlQuery query = fixtures::must_query("Pr[time<=2](<> T.T3)", model);
    RngStream rng = substream(61, 0);
    const Run run = random_run(model, kTimeClock, 2.0, rng);
    const Outcome first = check_diamond(model, run, query.phi, kTimeClock, 2.0);
    const Outcome second = check_diamond(model, run, query.phi, kTimeClock, 2.0);
    CHECK(first.satisfied == second.satisfied);
    CHECK(first.hit_cost == second.hit_cost);
    CHECK(first.hit_time == second.hit_time);
}

TEST_CASE("observer mismatches are rejected") {
    const NetworkModel model = fixtures::must_validate(fixtures::kAbtText);
    RngStream rng = substream(67, 0);
    const Run run = random_run(model, kTimeClock, 2.0, rng);
    const StateProperty phi = StateProperty::make_true();
    CHECK_THROWS_AS((void)check_diamond(model, run, phi, *model.clock_index("C"), 2.0),
                    model_error);
    CHECK_THROWS_AS((void)check_diamond(model, run, phi, kTimeClock, 5.0), model_error);
}

TEST_CASE("a blocked run keeps drifting for the monitor") {
    const NetworkModel model = fixtures::must_validate(R"(network stuck
automaton P
  clock c x
  location P0 rate c=0
  initial P0
end
)");
    RngStream rng = substream(3, 0);
    const uint32_t c = *model.clock_index("c");
    const Run run = random_run(model, c, 1.0, rng);
    REQUIRE(run.truncation == Truncation::Blocked);
    // x keeps rate 1, so it eventually passes any threshold while the
    // observer stays put.
    const StateProperty phi = StateProperty::clock_cmp(*model.clock_index("x"), Rel::Ge, 40);
    const Outcome outcome = check_diamond(model, run, phi, c, 1.0);
    CHECK(outcome.satisfied);
    CHECK(*outcome.hit_time == doctest::Approx(40.0));
    CHECK(*outcome.hit_cost == 0.0);
}

TEST_SUITE_END();
