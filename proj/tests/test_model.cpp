#include "doctest.h"

#include <cmath>

#include "fixtures.hpp"
#include "nptasmc/model.hpp"
#include "nptasmc/rng.hpp"

using namespace nptasmc;

TEST_SUITE_BEGIN("core");

TEST_CASE("advance follows rate scaling") {
    ClockValuation v{0.0, 0.5};
    RateVector r{1, 2};
    const ClockValuation moved = advance(v, r, 0.25);
    CHECK(moved[1] == doctest::Approx(1.0));
    CHECK(moved[0] == doctest::Approx(0.25));

    CHECK(advance(v, r, 0.0) == v);

    RateVector stopped{1, 0};
    CHECK(advance(v, stopped, 17.0)[1] == 0.5);
}

TEST_CASE("advance is additive") {
    RngStream rng(7, 0);
    for (int trial = 0; trial < 200; ++trial) {
        ClockValuation v{rng.uniform(0, 5), rng.uniform(0, 5), rng.uniform(0, 5)};
        RateVector r{static_cast<int64_t>(rng.pick(4)), static_cast<int64_t>(rng.pick(4)),
                     static_cast<int64_t>(rng.pick(4))};
        const double d1 = rng.uniform(0, 3);
        const double d2 = rng.uniform(0, 3);
        const ClockValuation split = advance(advance(v, r, d1), r, d2);
        const ClockValuation joint = advance(v, r, d1 + d2);
        for (size_t i = 0; i < v.size(); ++i) {
            CHECK(split[i] == doctest::Approx(joint[i]).epsilon(0).scale(1).epsilon(1e-9));
        }
    }
}

TEST_CASE("reset zeroes exactly the requested clocks") {
    ClockValuation v{1.0, 3.0, 1.0};
    const uint32_t ys[] = {1};
    const ClockValuation once = reset(v, ys);
    CHECK(once[1] == 0.0);
    CHECK(once[2] == 1.0);

    CHECK(reset(v, {}) == v);
    CHECK(reset(once, ys) == once);

    const uint32_t bad[] = {9};
    CHECK_THROWS_AS((void)reset(v, bad), model_error);
}

TEST_CASE("guard evaluation is conjunctive and boundary-inclusive") {
    NetworkState state;
    state.clocks = {1.0, 2.0};
    state.ints = {3};

    Guard both{{GuardAtom{true, 0, Rel::Ge, 1}, GuardAtom{true, 1, Rel::Ge, 2}}};
    CHECK(eval_guard(both, state));

    state.clocks[0] = 0.999;
    Guard one{{GuardAtom{true, 0, Rel::Ge, 1}}};
    CHECK_FALSE(eval_guard(one, state));

    CHECK(eval_guard(Guard{}, state));

    Guard ints{{GuardAtom{false, 0, Rel::Eq, 3}}};
    CHECK(eval_guard(ints, state));
    Guard missing{{GuardAtom{false, 5, Rel::Eq, 3}}};
    CHECK_THROWS_AS((void)eval_guard(missing, state), model_error);
}

TEST_CASE("lower-bound guards stay enabled while delaying") {
    RngStream rng(11, 0);
    for (int trial = 0; trial < 200; ++trial) {
        NetworkState state;
        state.clocks = {rng.uniform(0, 4), rng.uniform(0, 4)};
        Guard guard{{GuardAtom{true, 0, rng.pick(2) ? Rel::Ge : Rel::Gt,
                               static_cast<int64_t>(rng.pick(4))},
                     GuardAtom{true, 1, Rel::Ge, static_cast<int64_t>(rng.pick(4))}}};
        if (!eval_guard(guard, state)) {
            continue;
        }
        RateVector rates{static_cast<int64_t>(rng.pick(3)), static_cast<int64_t>(rng.pick(3))};
        NetworkState later = state;
        later.clocks = advance(state.clocks, rates, rng.uniform(0, 10));
        CHECK(eval_guard(guard, later));
    }
}

TEST_CASE("validation wires the abt network") {
    const NetworkModel model = fixtures::must_validate(fixtures::kAbtText);
    CHECK(model.components.size() == 3);
    CHECK(model.clock_names.size() == 4); // time, x, y, C
    CHECK(model.clock_names[kTimeClock] == "time");
    CHECK(model.actions.size() == 2);

    // Input completion: every component reacts to every non-owned action in
    // every location.
    for (const Component& comp : model.components) {
        for (uint32_t l = 0; l < comp.locations.size(); ++l) {
            for (uint32_t action : comp.input_actions) {
                bool covered = false;
                for (uint32_t edge : comp.locations[l].input_edges) {
                    covered |= comp.edges[edge].action == action;
                }
                CHECK_MESSAGE(covered, comp.name, " misses an input at ", comp.locations[l].name);
            }
        }
    }

    const NetworkState init = model.initial_state();
    CHECK(init.clocks == ClockValuation{0, 0, 0, 0});
    CHECK(invariants_satisfied(model, init));

    // Rates per location vector: T0 drives C at 4.
    const RateVector rates = model.rates_for(init.locations);
    CHECK(rates[*model.clock_index("C")] == 4);
    CHECK(rates[kTimeClock] == 1);
}

TEST_CASE("validation is idempotent") {
    const NetworkModel model = fixtures::must_validate(fixtures::kAbtText);
    ValidationResult again = validate(document_from(model));
    REQUIRE(again.ok());
    CHECK(*again.model == model);
}

TEST_CASE("validation rejects an output declared twice") {
    ParseResult parsed = parse_model(R"(network bad
automaton P
  clock x
  action out a
  location P0 inv x<=1
  initial P0
  edge P0 -> P0 on a!
end
automaton Q
  clock y
  action out a
  location Q0 inv y<=1
  initial Q0
  edge Q0 -> Q0 on a!
end
)");
    REQUIRE(parsed.ok());
    const ValidationResult result = validate(*parsed.document);
    REQUIRE_FALSE(result.ok());
    CHECK(result.diagnostics.front().code == DiagCode::OutputPartitionViolation);
}

TEST_CASE("validation rejects wrong guard kinds") {
    ParseResult parsed = parse_model(R"(network bad
automaton P
  clock x
  action out a
  location P0 inv x<=3
  location P1
  initial P0
  edge P0 -> P1 on a! guard x<=3
end
)");
    REQUIRE(parsed.ok()); // the layering: parsing succeeds, validation rejects
    const ValidationResult result = validate(*parsed.document);
    REQUIRE_FALSE(result.ok());
    CHECK(result.diagnostics.front().code == DiagCode::GuardKindViolation);
}

TEST_CASE("validation demands an exprate for unbounded emitters") {
    ParseResult parsed = parse_model(R"(network bad
automaton P
  clock x
  action out a
  location P0
  location P1
  initial P0
  edge P0 -> P1 on a!
end
)");
    REQUIRE(parsed.ok());
    const ValidationResult result = validate(*parsed.document);
    REQUIRE_FALSE(result.ok());
    CHECK(result.diagnostics.front().code == DiagCode::MissingExpRate);
}

TEST_CASE("validation rejects reserved and overlapping clocks") {
    {
        ParseResult parsed = parse_model("network bad\nautomaton P\n  clock time\n  action out a\n"
                                         "  location P0 inv time<=1\n  initial P0\n"
                                         "  edge P0 -> P0 on a!\nend\n");
        REQUIRE(parsed.ok());
        const ValidationResult result = validate(*parsed.document);
        REQUIRE_FALSE(result.ok());
        CHECK(result.diagnostics.front().code == DiagCode::ClockOverlap);
    }
    {
        ParseResult parsed = parse_model(R"(network bad
automaton P
  clock x
  action out a
  location P0 inv x<=1
  initial P0
  edge P0 -> P0 on a!
end
automaton Q
  clock x
  action out b
  location Q0 inv x<=1
  initial Q0
  edge Q0 -> Q0 on b!
end
)");
        REQUIRE(parsed.ok());
        const ValidationResult result = validate(*parsed.document);
        REQUIRE_FALSE(result.ok());
        CHECK(result.diagnostics.front().code == DiagCode::ClockOverlap);
    }
}

TEST_CASE("enabled outputs respect guards and runtime determinism") {
    const NetworkModel model = fixtures::must_validate(fixtures::kAbtText);
    NetworkState state = model.initial_state();

    // A's edge carries no guard: enabled from the start.
    const auto at_zero = enabled_outputs(model, state, 0);
    REQUIRE(at_zero.size() == 1);
    CHECK(model.actions[at_zero.front().action] == "a");

    // T never emits.
    CHECK(enabled_outputs(model, state, 2).empty());

    const NetworkModel twin = fixtures::must_validate(R"(network twin
automaton P
  clock x
  action out a
  location P0 inv x<=5
  location P1
  initial P0
  edge P0 -> P1 on a! guard x>=1
  edge P0 -> P0 on a! guard x>=2
end
)");
    NetworkState tstate = twin.initial_state();
    CHECK(enabled_outputs(twin, tstate, 0).empty());
    tstate.clocks = advance(tstate.clocks, twin.rates_for(tstate.locations), 1.5);
    CHECK(enabled_outputs(twin, tstate, 0).size() == 1);
    tstate.clocks = advance(tstate.clocks, twin.rates_for(tstate.locations), 1.0);
    CHECK_THROWS_AS((void)enabled_outputs(twin, tstate, 0), model_error);
}

TEST_CASE("guard-gated enabledness example from the race semantics") {
    const NetworkModel model = fixtures::must_validate(R"(network gated
automaton P
  clock x
  action out a
  location P0 inv x<=3
  location P1
  initial P0
  edge P0 -> P1 on a! guard x>=1
end
)");
    NetworkState state = model.initial_state();
    state.clocks[*model.clock_index("x")] = 1.0;
    const auto enabled = enabled_outputs(model, state, 0);
    REQUIRE(enabled.size() == 1);
    CHECK(model.actions[enabled.front().action] == "a");
}

TEST_CASE("composition builds the full reachable product") {
    const NetworkModel model = fixtures::must_validate(fixtures::kAbtText);
    const Component product = syntactic_compose(model, 0, 1);
    CHECK(product.locations.size() == 4);
    CHECK(product.clocks.size() == 2);

    // Breadth-first over syntactic edges: all four pair locations reachable.
    std::vector<bool> seen(product.locations.size(), false);
    std::vector<uint32_t> frontier{product.initial};
    seen[product.initial] = true;
    while (!frontier.empty()) {
        const uint32_t loc = frontier.back();
        frontier.pop_back();
        for (const Edge& edge : product.edges) {
            if (edge.source != loc) {
                continue;
            }
            for (const Branch& branch : edge.branches) {
                if (!seen[branch.target]) {
                    seen[branch.target] = true;
                    frontier.push_back(branch.target);
                }
            }
        }
    }
    for (size_t i = 0; i < seen.size(); ++i) {
        CHECK_MESSAGE(seen[i], "unreachable product location ", product.locations[i].name);
    }
}

TEST_CASE("composition with an input-only singleton is neutral") {
    const NetworkModel model = fixtures::must_validate(R"(network neutral
automaton P
  clock x
  action out a b
  location P0 inv x<=1
  location P1 inv x<=2
  initial P0
  edge P0 -> P1 on a!
  edge P1 -> P0 on b! guard x>=1
end
automaton Sink
  location S0
  initial S0
end
)");
    const Component product = syntactic_compose(model, 0, 1);
    const Component& p = model.components[0];
    CHECK(product.locations.size() == p.locations.size());
    CHECK(product.clocks == p.clocks);
    CHECK(product.output_actions == p.output_actions);
    for (uint32_t l = 0; l < p.locations.size(); ++l) {
        CHECK(product.locations[l].invariant == p.locations[l].invariant);
        CHECK(product.locations[l].rates == p.locations[l].rates);
    }
}

TEST_CASE("composition refuses overlapping pieces") {
    const NetworkModel model = fixtures::must_validate(fixtures::kAbtText);
    CHECK_THROWS_AS((void)syntactic_compose(model, 0, 0), model_error);
}

TEST_CASE("product invariant is the conjunction of factor invariants") {
    const NetworkModel model = fixtures::must_validate(fixtures::kAbtText);
    const Component product = syntactic_compose(model, 0, 1);
    const Component& a = model.components[0];
    const Component& b = model.components[1];

    RngStream rng(13, 0);
    for (int trial = 0; trial < 500; ++trial) {
        NetworkState state = model.initial_state();
        state.clocks[1] = rng.uniform(0, 3);
        state.clocks[2] = rng.uniform(0, 3);
        const uint32_t l1 = static_cast<uint32_t>(rng.pick(a.locations.size()));
        const uint32_t l2 = static_cast<uint32_t>(rng.pick(b.locations.size()));
        const bool factors = eval_guard(a.locations[l1].invariant, state) &&
                             eval_guard(b.locations[l2].invariant, state);
        const uint32_t pair = l1 * static_cast<uint32_t>(b.locations.size()) + l2;
        CHECK(eval_guard(product.locations[pair].invariant, state) == factors);
    }
}

TEST_SUITE_END();
