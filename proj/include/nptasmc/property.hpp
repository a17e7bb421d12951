#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "nptasmc/model.hpp"

namespace nptasmc {

// State property: boolean combination of location membership, clock bounds
// and integer-variable bounds, resolved against a validated model.
struct StateProperty {
    enum class Node : uint8_t { True, LocationAtom, ClockAtom, IntAtom, Not, And, Or };

    Node node = Node::True;
    // LocationAtom
    uint32_t component = 0;
    uint32_t location = 0;
    // ClockAtom / IntAtom
    GuardAtom cmp;
    std::vector<StateProperty> children;

    static StateProperty make_true();
    static StateProperty in_location(uint32_t component, uint32_t location);
    static StateProperty clock_cmp(uint32_t clock, Rel rel, int64_t bound);
    static StateProperty int_cmp(uint32_t var, Rel rel, int64_t bound);
    static StateProperty negate(StateProperty child);
    static StateProperty conj(std::vector<StateProperty> children);
    static StateProperty disj(std::vector<StateProperty> children);
};

bool eval_property(const StateProperty& phi, const NetworkState& state);

// True when no clock atom occurs anywhere in the formula, i.e. the property
// is constant during delays.
bool clock_free(const StateProperty& phi);

struct PwctlQuery {
    bool is_diamond = true; // false: box
    uint32_t observer = kTimeClock;
    double bound = 0;
    StateProperty phi;
    std::optional<std::pair<Rel, double>> comparison;
};

} // namespace nptasmc
