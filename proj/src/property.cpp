#include "nptasmc/property.hpp"

#include <cmath>

namespace nptasmc {

StateProperty StateProperty::make_true() {
    return StateProperty{};
}

StateProperty StateProperty::in_location(uint32_t component, uint32_t location) {
    StateProperty p;
    p.node = Node::LocationAtom;
    p.component = component;
    p.location = location;
    return p;
}

StateProperty StateProperty::clock_cmp(uint32_t clock, Rel rel, int64_t bound) {
    StateProperty p;
    p.node = Node::ClockAtom;
    p.cmp = {true, clock, rel, bound};
    return p;
}

StateProperty StateProperty::int_cmp(uint32_t var, Rel rel, int64_t bound) {
    StateProperty p;
    p.node = Node::IntAtom;
    p.cmp = {false, var, rel, bound};
    return p;
}

StateProperty StateProperty::negate(StateProperty child) {
    StateProperty p;
    p.node = Node::Not;
    p.children.push_back(std::move(child));
    return p;
}

StateProperty StateProperty::conj(std::vector<StateProperty> children) {
    StateProperty p;
    p.node = Node::And;
    p.children = std::move(children);
    return p;
}

StateProperty StateProperty::disj(std::vector<StateProperty> children) {
    StateProperty p;
    p.node = Node::Or;
    p.children = std::move(children);
    return p;
}

bool eval_property(const StateProperty& phi, const NetworkState& state) {
    switch (phi.node) {
    case StateProperty::Node::True:
        return true;
    case StateProperty::Node::LocationAtom:
        return state.locations[phi.component] == phi.location;
    case StateProperty::Node::ClockAtom: {
        const double value = state.clocks[phi.cmp.var];
        const double bound = static_cast<double>(phi.cmp.bound);
        switch (phi.cmp.rel) {
        case Rel::Lt: return value < bound;
        case Rel::Le: return value <= bound;
        case Rel::Gt: return value > bound;
        case Rel::Ge: return value >= bound;
        case Rel::Eq: return value == bound;
        }
        return false;
    }
    case StateProperty::Node::IntAtom: {
        const int64_t value = state.ints[phi.cmp.var];
        switch (phi.cmp.rel) {
        case Rel::Lt: return value < phi.cmp.bound;
        case Rel::Le: return value <= phi.cmp.bound;
        case Rel::Gt: return value > phi.cmp.bound;
        case Rel::Ge: return value >= phi.cmp.bound;
        case Rel::Eq: return value == phi.cmp.bound;
        }
        return false;
    }
    case StateProperty::Node::Not:
        return !eval_property(phi.children.front(), state);
    case StateProperty::Node::And:
        for (const StateProperty& child : phi.children) {
            if (!eval_property(child, state)) {
                return false;
            }
        }
        return true;
    case StateProperty::Node::Or:
        for (const StateProperty& child : phi.children) {
            if (eval_property(child, state)) {
                return true;
            }
        }
        return false;
    }
    return false;
}

bool clock_free(const StateProperty& phi) {
    if (phi.node == StateProperty::Node::ClockAtom) {
        return false;
    }
    for (const StateProperty& child : phi.children) {
        if (!clock_free(child)) {
            return false;
        }
    }
    return true;
}

} // namespace nptasmc
