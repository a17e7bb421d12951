#include "nptasmc/document.hpp"

namespace nptasmc {

const char* rel_text(Rel rel) {
    switch (rel) {
    case Rel::Lt: return "<";
    case Rel::Le: return "<=";
    case Rel::Gt: return ">";
    case Rel::Ge: return ">=";
    case Rel::Eq: return "==";
    }
    return "?";
}

// Structural equality; source line numbers are not part of identity.

bool operator==(const DocGuardAtom& a, const DocGuardAtom& b) {
    return a.var == b.var && a.rel == b.rel && a.bound == b.bound;
}

bool operator==(const DocGuard& a, const DocGuard& b) {
    return a.atoms == b.atoms;
}

bool operator==(const DocIntExpr& a, const DocIntExpr& b) {
    return a.constant == b.constant && a.terms == b.terms;
}

bool operator==(const DocUpdate& a, const DocUpdate& b) {
    return a.target == b.target && a.value == b.value;
}

bool operator==(const DocBranch& a, const DocBranch& b) {
    return a.weight == b.weight && a.resets == b.resets && a.updates == b.updates &&
           a.target == b.target;
}

bool operator==(const DocEdge& a, const DocEdge& b) {
    return a.source == b.source && a.target == b.target && a.action == b.action &&
           a.is_output == b.is_output && a.guard == b.guard && a.branches == b.branches &&
           a.synthesized == b.synthesized;
}

bool operator==(const DocLocation& a, const DocLocation& b) {
    return a.name == b.name && a.invariant == b.invariant && a.rates == b.rates &&
           a.exp_rate == b.exp_rate;
}

bool operator==(const DocIntVar& a, const DocIntVar& b) {
    return a.name == b.name && a.lo == b.lo && a.hi == b.hi && a.init == b.init;
}

bool operator==(const DocComponent& a, const DocComponent& b) {
    return a.name == b.name && a.clocks == b.clocks && a.int_vars == b.int_vars &&
           a.out_actions == b.out_actions && a.in_actions == b.in_actions &&
           a.locations == b.locations && a.initial == b.initial && a.edges == b.edges;
}

bool operator==(const ModelDocument& a, const ModelDocument& b) {
    return a.name == b.name && a.components == b.components;
}

} // namespace nptasmc
