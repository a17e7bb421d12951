#include "nptasmc/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace nptasmc {

namespace {

bool rel_holds_real(double lhs, Rel rel, double rhs, double eps) {
    switch (rel) {
    case Rel::Lt: return lhs < rhs + eps;
    case Rel::Le: return lhs <= rhs + eps;
    case Rel::Gt: return lhs > rhs - eps;
    case Rel::Ge: return lhs >= rhs - eps;
    case Rel::Eq: return std::abs(lhs - rhs) <= eps;
    }
    return false;
}

bool rel_holds_int(int64_t lhs, Rel rel, int64_t rhs) {
    switch (rel) {
    case Rel::Lt: return lhs < rhs;
    case Rel::Le: return lhs <= rhs;
    case Rel::Gt: return lhs > rhs;
    case Rel::Ge: return lhs >= rhs;
    case Rel::Eq: return lhs == rhs;
    }
    return false;
}

} // namespace

std::optional<uint32_t> Component::location_index(const std::string& loc) const {
    for (uint32_t i = 0; i < locations.size(); ++i) {
        if (locations[i].name == loc) {
            return i;
        }
    }
    return std::nullopt;
}

std::optional<uint32_t> NetworkModel::clock_index(const std::string& clock) const {
    for (uint32_t i = 0; i < clock_names.size(); ++i) {
        if (clock_names[i] == clock) {
            return i;
        }
    }
    return std::nullopt;
}

std::optional<uint32_t> NetworkModel::int_var_index(const std::string& var) const {
    for (uint32_t i = 0; i < int_vars.size(); ++i) {
        if (int_vars[i].name == var) {
            return i;
        }
    }
    return std::nullopt;
}

std::optional<uint32_t> NetworkModel::action_index(const std::string& action) const {
    for (uint32_t i = 0; i < actions.size(); ++i) {
        if (actions[i] == action) {
            return i;
        }
    }
    return std::nullopt;
}

std::optional<uint32_t> NetworkModel::component_index(const std::string& component) const {
    for (uint32_t i = 0; i < components.size(); ++i) {
        if (components[i].name == component) {
            return i;
        }
    }
    return std::nullopt;
}

NetworkState NetworkModel::initial_state() const {
    NetworkState state;
    state.locations.reserve(components.size());
    for (const auto& comp : components) {
        state.locations.push_back(comp.initial);
    }
    state.clocks.assign(clock_names.size(), 0.0);
    state.ints.reserve(int_vars.size());
    for (const auto& var : int_vars) {
        state.ints.push_back(var.init);
    }
    return state;
}

RateVector NetworkModel::rates_for(std::span<const uint32_t> locations) const {
    RateVector rates(clock_names.size(), 1);
    for (uint32_t j = 0; j < components.size(); ++j) {
        const Component& comp = components[j];
        const Location& loc = comp.locations[locations[j]];
        for (uint32_t i = 0; i < comp.clocks.size(); ++i) {
            rates[comp.clocks[i]] = loc.rates[i];
        }
    }
    return rates;
}

int64_t NetworkModel::clock_rate(std::span<const uint32_t> locations, uint32_t clock) const {
    const int32_t owner = clock_owner.at(clock);
    if (owner < 0) {
        return 1;
    }
    const Component& comp = components[owner];
    const Location& loc = comp.locations[locations[owner]];
    for (uint32_t i = 0; i < comp.clocks.size(); ++i) {
        if (comp.clocks[i] == clock) {
            return loc.rates[i];
        }
    }
    return 1;
}

ClockValuation advance(const ClockValuation& v, const RateVector& rates, double delay) {
    ClockValuation out(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
        out[i] = v[i] + static_cast<double>(rates[i]) * delay;
    }
    return out;
}

ClockValuation reset(const ClockValuation& v, std::span<const uint32_t> clocks) {
    ClockValuation out = v;
    for (uint32_t c : clocks) {
        if (c >= out.size()) {
            throw model_error(Errc::UnknownClock, "reset of undeclared clock index");
        }
        out[c] = 0.0;
    }
    return out;
}

bool eval_guard_eps(const Guard& g, const NetworkState& state, double eps) {
    for (const GuardAtom& atom : g.atoms) {
        if (atom.on_clock) {
            if (atom.var >= state.clocks.size()) {
                throw model_error(Errc::UnknownIdentifier, "guard references undeclared clock");
            }
            if (!rel_holds_real(state.clocks[atom.var], atom.rel,
                                static_cast<double>(atom.bound), eps)) {
                return false;
            }
        } else {
            if (atom.var >= state.ints.size()) {
                throw model_error(Errc::UnknownIdentifier, "guard references undeclared variable");
            }
            if (!rel_holds_int(state.ints[atom.var], atom.rel, atom.bound)) {
                return false;
            }
        }
    }
    return true;
}

bool eval_guard(const Guard& g, const NetworkState& state) {
    return eval_guard_eps(g, state, 0.0);
}

bool invariant_satisfied(const NetworkModel& model, const NetworkState& state, uint32_t component,
                         double eps) {
    const Component& comp = model.components[component];
    return eval_guard_eps(comp.locations[state.locations[component]].invariant, state, eps);
}

bool invariants_satisfied(const NetworkModel& model, const NetworkState& state, double eps) {
    for (uint32_t j = 0; j < model.components.size(); ++j) {
        if (!invariant_satisfied(model, state, j, eps)) {
            return false;
        }
    }
    return true;
}

std::vector<EnabledOutput> enabled_outputs(const NetworkModel& model, const NetworkState& state,
                                           uint32_t component, double eps) {
    const Component& comp = model.components[component];
    const Location& loc = comp.locations[state.locations[component]];
    std::vector<EnabledOutput> enabled;
    for (uint32_t edge_idx : loc.output_edges) {
        const Edge& edge = comp.edges[edge_idx];
        if (!eval_guard_eps(edge.guard, state, eps)) {
            continue;
        }
        for (const EnabledOutput& prev : enabled) {
            if (prev.action == edge.action) {
                throw model_error(Errc::DeterminismViolation,
                                  "two enabled edges emit '" + model.actions[edge.action] +
                                      "' from " + comp.name + "." + loc.name);
            }
        }
        enabled.push_back({edge.action, edge_idx});
    }
    return enabled;
}

void apply_branch(const NetworkModel& model, NetworkState& state, uint32_t component,
                  const Edge& edge, const Branch& branch) {
    for (uint32_t clock : branch.resets) {
        state.clocks.at(clock) = 0.0;
    }
    for (const IntUpdate& update : branch.updates) {
        int64_t value = update.value.constant;
        for (const auto& [sign, var] : update.value.terms) {
            value += sign * state.ints.at(var);
        }
        const IntVarInfo& info = model.int_vars[update.target];
        if (value < info.lo || value > info.hi) {
            throw model_error(Errc::IntRangeViolation,
                              "assignment " + info.name + " = " + std::to_string(value) +
                                  " leaves range [" + std::to_string(info.lo) + "," +
                                  std::to_string(info.hi) + "]");
        }
        state.ints[update.target] = value;
    }
    state.locations[component] = branch.target;
    (void)edge;
}

// --- validation ---

namespace {

struct SymbolTable {
    std::unordered_map<std::string, uint32_t> clocks;
    std::unordered_map<std::string, uint32_t> int_vars;
    std::unordered_map<std::string, uint32_t> actions;
};

class Validator {
  public:
    explicit Validator(const ModelDocument& doc) : doc_(doc) {}

    ValidationResult run() {
        collect_symbols();
        if (!errors_.empty()) {
            return {std::nullopt, errors_};
        }
        build_components();
        if (!errors_.empty()) {
            return {std::nullopt, errors_};
        }
        complete_inputs();
        model_.name = doc_.name;
        return {std::move(model_), errors_};
    }

  private:
    void error(DiagCode code, std::string message, int line = 0) {
        errors_.push_back({code, std::move(message), line, 0});
    }

    void collect_symbols() {
        model_.clock_names.push_back(kTimeClockName);
        model_.clock_owner.push_back(-1);
        syms_.clocks[kTimeClockName] = kTimeClock;

        std::unordered_set<std::string> component_names;
        for (int32_t j = 0; j < static_cast<int32_t>(doc_.components.size()); ++j) {
            const DocComponent& comp = doc_.components[j];
            if (!component_names.insert(comp.name).second) {
                error(DiagCode::DuplicateIdentifier, "component '" + comp.name + "' redeclared",
                      comp.line);
            }
            for (const std::string& clock : comp.clocks) {
                if (clock == kTimeClockName) {
                    error(DiagCode::ClockOverlap,
                          "clock 'time' is reserved for the global time clock", comp.line);
                    continue;
                }
                if (syms_.clocks.count(clock)) {
                    error(DiagCode::ClockOverlap,
                          "clock '" + clock + "' declared by more than one component", comp.line);
                    continue;
                }
                syms_.clocks[clock] = static_cast<uint32_t>(model_.clock_names.size());
                model_.clock_names.push_back(clock);
                model_.clock_owner.push_back(j);
            }
            for (const DocIntVar& var : comp.int_vars) {
                if (syms_.clocks.count(var.name) || syms_.int_vars.count(var.name)) {
                    error(DiagCode::DuplicateIdentifier, "identifier '" + var.name + "' redeclared",
                          var.line);
                    continue;
                }
                if (var.lo > var.hi || var.init < var.lo || var.init > var.hi) {
                    error(DiagCode::UnresolvedReference,
                          "variable '" + var.name + "' has an empty range or an out-of-range init",
                          var.line);
                    continue;
                }
                syms_.int_vars[var.name] = static_cast<uint32_t>(model_.int_vars.size());
                model_.int_vars.push_back({var.name, j, var.lo, var.hi, var.init});
            }
        }

        // Action universe and output ownership. Every action somebody uses
        // must be emitted by exactly one component.
        for (int32_t j = 0; j < static_cast<int32_t>(doc_.components.size()); ++j) {
            const DocComponent& comp = doc_.components[j];
            for (const std::string& action : comp.out_actions) {
                auto [it, fresh] = syms_.actions.try_emplace(
                    action, static_cast<uint32_t>(model_.actions.size()));
                if (fresh) {
                    model_.actions.push_back(action);
                    model_.action_owner.push_back(j);
                } else if (model_.action_owner[it->second] >= 0 &&
                           model_.action_owner[it->second] != j) {
                    error(DiagCode::OutputPartitionViolation,
                          "action '" + action + "' is an output of both '" +
                              doc_.components[model_.action_owner[it->second]].name + "' and '" +
                              comp.name + "'",
                          comp.line);
                } else {
                    model_.action_owner[it->second] = j;
                }
            }
        }
        auto note_used = [&](const std::string& action) {
            auto [it, fresh] =
                syms_.actions.try_emplace(action, static_cast<uint32_t>(model_.actions.size()));
            if (fresh) {
                model_.actions.push_back(action);
                model_.action_owner.push_back(-1);
            }
            (void)it;
        };
        for (const DocComponent& comp : doc_.components) {
            for (const std::string& action : comp.in_actions) {
                note_used(action);
            }
            for (const DocEdge& edge : comp.edges) {
                note_used(edge.action);
            }
        }
        for (uint32_t a = 0; a < model_.actions.size(); ++a) {
            if (model_.action_owner[a] < 0) {
                error(DiagCode::OutputPartitionViolation,
                      "action '" + model_.actions[a] + "' is not the output of any component");
            }
        }
    }

    // Clock atoms of invariants must be upper bounds, clock atoms of output
    // edge guards lower bounds; input edges take integer atoms only.
    enum class GuardSite { Invariant, OutputEdge, InputEdge };

    Guard resolve_guard(const DocGuard& doc_guard, const DocComponent& comp, GuardSite site,
                        int line) {
        Guard guard;
        for (const DocGuardAtom& atom : doc_guard.atoms) {
            GuardAtom resolved;
            resolved.rel = atom.rel;
            resolved.bound = atom.bound;
            auto clock_it = syms_.clocks.find(atom.var);
            auto int_it = syms_.int_vars.find(atom.var);
            if (int_it != syms_.int_vars.end()) {
                resolved.on_clock = false;
                resolved.var = int_it->second;
            } else if (clock_it != syms_.clocks.end()) {
                resolved.on_clock = true;
                resolved.var = clock_it->second;
                if (atom.var == kTimeClockName ||
                    std::find(comp.clocks.begin(), comp.clocks.end(), atom.var) ==
                        comp.clocks.end()) {
                    error(DiagCode::UnresolvedReference,
                          "clock '" + atom.var + "' is not owned by component '" + comp.name + "'",
                          atom.line ? atom.line : line);
                    continue;
                }
                switch (site) {
                case GuardSite::Invariant:
                    if (atom.rel != Rel::Lt && atom.rel != Rel::Le) {
                        error(DiagCode::GuardKindViolation,
                              "invariant atom on clock '" + atom.var + "' must be an upper bound",
                              atom.line ? atom.line : line);
                    }
                    break;
                case GuardSite::OutputEdge:
                    if (atom.rel != Rel::Gt && atom.rel != Rel::Ge) {
                        error(DiagCode::GuardKindViolation,
                              "edge guard atom on clock '" + atom.var + "' must be a lower bound",
                              atom.line ? atom.line : line);
                    }
                    break;
                case GuardSite::InputEdge:
                    error(DiagCode::GuardKindViolation,
                          "input edge guards may constrain integer variables only",
                          atom.line ? atom.line : line);
                    break;
                }
                if (atom.bound < 0) {
                    error(DiagCode::GuardKindViolation,
                          "clock bounds are nonnegative integers", atom.line ? atom.line : line);
                }
            } else {
                error(DiagCode::UnresolvedReference, "unknown identifier '" + atom.var + "'",
                      atom.line ? atom.line : line);
                continue;
            }
            guard.atoms.push_back(resolved);
        }
        return guard;
    }

    IntExpr resolve_expr(const DocIntExpr& expr, int line) {
        IntExpr out;
        out.constant = expr.constant;
        for (const auto& [sign, name] : expr.terms) {
            auto it = syms_.int_vars.find(name);
            if (it == syms_.int_vars.end()) {
                error(DiagCode::UnresolvedReference, "unknown variable '" + name + "'", line);
                continue;
            }
            out.terms.emplace_back(sign, it->second);
        }
        return out;
    }

    void build_components() {
        for (int32_t j = 0; j < static_cast<int32_t>(doc_.components.size()); ++j) {
            const DocComponent& doc_comp = doc_.components[j];
            Component comp;
            comp.name = doc_comp.name;
            for (const std::string& clock : doc_comp.clocks) {
                auto it = syms_.clocks.find(clock);
                if (it != syms_.clocks.end() && it->second != kTimeClock) {
                    comp.clocks.push_back(it->second);
                }
            }

            std::unordered_map<std::string, uint32_t> loc_index;
            for (const DocLocation& doc_loc : doc_comp.locations) {
                if (loc_index.count(doc_loc.name)) {
                    error(DiagCode::DuplicateIdentifier,
                          "location '" + doc_loc.name + "' redeclared in '" + comp.name + "'",
                          doc_loc.line);
                    continue;
                }
                loc_index[doc_loc.name] = static_cast<uint32_t>(comp.locations.size());
                Location loc;
                loc.name = doc_loc.name;
                if (doc_loc.invariant) {
                    loc.invariant =
                        resolve_guard(*doc_loc.invariant, doc_comp, GuardSite::Invariant,
                                      doc_loc.line);
                }
                loc.rates.assign(comp.clocks.size(), 1);
                for (const auto& [clock, rate] : doc_loc.rates) {
                    auto it = syms_.clocks.find(clock);
                    bool owned = it != syms_.clocks.end() &&
                                 std::find(comp.clocks.begin(), comp.clocks.end(), it->second) !=
                                     comp.clocks.end();
                    if (!owned) {
                        error(DiagCode::UnresolvedReference,
                              "rate for clock '" + clock + "' not owned by '" + comp.name + "'",
                              doc_loc.line);
                        continue;
                    }
                    if (rate < 0) {
                        error(DiagCode::GuardKindViolation, "clock rates are nonnegative",
                              doc_loc.line);
                        continue;
                    }
                    for (uint32_t i = 0; i < comp.clocks.size(); ++i) {
                        if (comp.clocks[i] == it->second) {
                            loc.rates[i] = rate;
                        }
                    }
                }
                if (doc_loc.exp_rate) {
                    auto [num, den] = *doc_loc.exp_rate;
                    if (num <= 0 || den <= 0) {
                        error(DiagCode::MissingExpRate, "exprate must be a positive rational",
                              doc_loc.line);
                    } else {
                        loc.exp_rate = static_cast<double>(num) / static_cast<double>(den);
                    }
                }
                // Delay supremum is finite iff some invariant clock atom
                // advances here.
                loc.unbounded_delay = true;
                for (const GuardAtom& atom : loc.invariant.atoms) {
                    if (!atom.on_clock) {
                        continue;
                    }
                    for (uint32_t i = 0; i < comp.clocks.size(); ++i) {
                        if (comp.clocks[i] == atom.var && loc.rates[i] > 0) {
                            loc.unbounded_delay = false;
                        }
                    }
                }
                comp.locations.push_back(std::move(loc));
            }

            if (auto it = loc_index.find(doc_comp.initial); it != loc_index.end()) {
                comp.initial = it->second;
            } else {
                error(DiagCode::UnresolvedReference,
                      "initial location '" + doc_comp.initial + "' not declared in '" + comp.name +
                          "'",
                      doc_comp.line);
            }

            for (const std::string& action : doc_comp.out_actions) {
                comp.output_actions.push_back(syms_.actions.at(action));
            }

            for (const DocEdge& doc_edge : doc_comp.edges) {
                Edge edge;
                edge.synthesized = doc_edge.synthesized;
                auto src = loc_index.find(doc_edge.source);
                if (src == loc_index.end()) {
                    error(DiagCode::UnresolvedReference,
                          "edge source '" + doc_edge.source + "' not declared", doc_edge.line);
                    continue;
                }
                edge.source = src->second;
                edge.action = syms_.actions.at(doc_edge.action);
                edge.is_output = doc_edge.is_output;
                const bool owns_action = model_.action_owner[edge.action] == j;
                if (doc_edge.is_output && !owns_action) {
                    error(DiagCode::UnresolvedReference,
                          "component '" + comp.name + "' does not declare output '" +
                              doc_edge.action + "'",
                          doc_edge.line);
                    continue;
                }
                if (!doc_edge.is_output && owns_action) {
                    error(DiagCode::UnresolvedReference,
                          "component '" + comp.name + "' cannot receive its own output '" +
                              doc_edge.action + "'",
                          doc_edge.line);
                    continue;
                }
                edge.guard = resolve_guard(
                    doc_edge.guard, doc_comp,
                    doc_edge.is_output ? GuardSite::OutputEdge : GuardSite::InputEdge,
                    doc_edge.line);
                for (const DocBranch& doc_branch : doc_edge.branches) {
                    Branch branch;
                    branch.weight = doc_branch.weight;
                    if (branch.weight == 0) {
                        error(DiagCode::GuardKindViolation, "branch weights are positive",
                              doc_edge.line);
                    }
                    for (const std::string& clock : doc_branch.resets) {
                        if (clock == kTimeClockName) {
                            error(DiagCode::ClockOverlap, "the global clock 'time' cannot be reset",
                                  doc_edge.line);
                            continue;
                        }
                        auto it = syms_.clocks.find(clock);
                        bool owned =
                            it != syms_.clocks.end() &&
                            std::find(comp.clocks.begin(), comp.clocks.end(), it->second) !=
                                comp.clocks.end();
                        if (!owned) {
                            error(DiagCode::UnresolvedReference,
                                  "reset of clock '" + clock + "' not owned by '" + comp.name + "'",
                                  doc_edge.line);
                            continue;
                        }
                        branch.resets.push_back(it->second);
                    }
                    for (const DocUpdate& doc_update : doc_branch.updates) {
                        auto it = syms_.int_vars.find(doc_update.target);
                        if (it == syms_.int_vars.end()) {
                            error(DiagCode::UnresolvedReference,
                                  "assignment to unknown variable '" + doc_update.target + "'",
                                  doc_update.line);
                            continue;
                        }
                        branch.updates.push_back(
                            {it->second, resolve_expr(doc_update.value, doc_update.line)});
                    }
                    const std::string& target =
                        doc_branch.target.empty() ? doc_edge.target : doc_branch.target;
                    auto dst = loc_index.find(target);
                    if (dst == loc_index.end()) {
                        error(DiagCode::UnresolvedReference,
                              "edge target '" + target + "' not declared", doc_edge.line);
                        continue;
                    }
                    branch.target = dst->second;
                    edge.branches.push_back(std::move(branch));
                }
                if (edge.branches.empty()) {
                    error(DiagCode::GuardKindViolation, "edge needs at least one branch",
                          doc_edge.line);
                    continue;
                }
                const uint32_t edge_idx = static_cast<uint32_t>(comp.edges.size());
                if (edge.source < comp.locations.size()) {
                    auto& bucket = edge.is_output ? comp.locations[edge.source].output_edges
                                                  : comp.locations[edge.source].input_edges;
                    bucket.push_back(edge_idx);
                }
                comp.edges.push_back(std::move(edge));
            }

            // A location whose delays are unbounded needs an exponential
            // rate to place its output in time.
            for (const Location& loc : comp.locations) {
            	if (!loc.output_edges.empty() && loc.unbounded_delay && !loc.exp_rate) {
                    error(DiagCode::MissingExpRate,
                          "location '" + comp.name + "." + loc.name +
                              "' emits outputs under an unbounded invariant but has no exprate");
                }
            }

            model_.components.push_back(std::move(comp));
        }
    }

    // Every component must react to every input in every location; missing
    // reactions become looping input edges.
    void complete_inputs() {
        for (uint32_t j = 0; j < model_.components.size(); ++j) {
            Component& comp = model_.components[j];
            comp.input_actions.clear();
            for (uint32_t a = 0; a < model_.actions.size(); ++a) {
                if (model_.action_owner[a] != static_cast<int32_t>(j)) {
                    comp.input_actions.push_back(a);
                }
            }
            for (uint32_t l = 0; l < comp.locations.size(); ++l) {
                std::set<uint32_t> covered;
                for (uint32_t edge_idx : comp.locations[l].input_edges) {
                    covered.insert(comp.edges[edge_idx].action);
                }
                for (uint32_t a : comp.input_actions) {
                    if (covered.count(a)) {
                        continue;
                    }
                    Edge loop;
                    loop.source = l;
                    loop.action = a;
                    loop.is_output = false;
                    loop.synthesized = true;
                    Branch branch;
                    branch.target = l;
                    loop.branches.push_back(branch);
                    comp.locations[l].input_edges.push_back(
                        static_cast<uint32_t>(comp.edges.size()));
                    comp.edges.push_back(std::move(loop));
                }
            }
        }
    }

    const ModelDocument& doc_;
    NetworkModel model_;
    SymbolTable syms_;
    std::vector<Diagnostic> errors_;
};

} // namespace

ValidationResult validate(const ModelDocument& doc) {
    return Validator(doc).run();
}

ModelDocument document_from(const NetworkModel& model) {
    ModelDocument doc;
    doc.name = model.name;
    for (uint32_t j = 0; j < model.components.size(); ++j) {
        const Component& comp = model.components[j];
        DocComponent doc_comp;
        doc_comp.name = comp.name;
        for (uint32_t clock : comp.clocks) {
            doc_comp.clocks.push_back(model.clock_names[clock]);
        }
        for (const IntVarInfo& var : model.int_vars) {
            if (var.owner == static_cast<int32_t>(j)) {
                doc_comp.int_vars.push_back({var.name, var.lo, var.hi, var.init, 0});
            }
        }
        for (uint32_t a : comp.output_actions) {
            doc_comp.out_actions.push_back(model.actions[a]);
        }
        for (const Edge& edge : comp.edges) {
            if (!edge.is_output && !edge.synthesized) {
                const std::string& name = model.actions[edge.action];
                if (std::find(doc_comp.in_actions.begin(), doc_comp.in_actions.end(), name) ==
                    doc_comp.in_actions.end()) {
                    doc_comp.in_actions.push_back(name);
                }
            }
        }
        auto guard_doc = [&](const Guard& guard) {
            DocGuard out;
            for (const GuardAtom& atom : guard.atoms) {
                DocGuardAtom doc_atom;
                doc_atom.var = atom.on_clock ? model.clock_names[atom.var]
                                             : model.int_vars[atom.var].name;
                doc_atom.rel = atom.rel;
                doc_atom.bound = atom.bound;
                out.atoms.push_back(std::move(doc_atom));
            }
            return out;
        };
        for (const Location& loc : comp.locations) {
            DocLocation doc_loc;
            doc_loc.name = loc.name;
            if (!loc.invariant.atoms.empty()) {
                doc_loc.invariant = guard_doc(loc.invariant);
            }
            for (uint32_t i = 0; i < comp.clocks.size(); ++i) {
                if (loc.rates[i] != 1) {
                    doc_loc.rates.emplace_back(model.clock_names[comp.clocks[i]], loc.rates[i]);
                }
            }
            if (loc.exp_rate) {
                // Render as a rational with denominator 1e6 unless integral.
                double rate = *loc.exp_rate;
                if (rate == std::floor(rate)) {
                    doc_loc.exp_rate = {static_cast<int64_t>(rate), 1};
                } else {
                    doc_loc.exp_rate = {static_cast<int64_t>(std::llround(rate * 1e6)), 1000000};
                }
            }
            doc_comp.locations.push_back(std::move(doc_loc));
        }
        doc_comp.initial = comp.locations[comp.initial].name;
        for (const Edge& edge : comp.edges) {
            DocEdge doc_edge;
            doc_edge.synthesized = edge.synthesized;
            doc_edge.source = comp.locations[edge.source].name;
            doc_edge.action = model.actions[edge.action];
            doc_edge.is_output = edge.is_output;
            doc_edge.guard = guard_doc(edge.guard);
            doc_edge.target = comp.locations[edge.branches.front().target].name;
            for (const Branch& branch : edge.branches) {
                DocBranch doc_branch;
                doc_branch.weight = branch.weight;
                for (uint32_t clock : branch.resets) {
                    doc_branch.resets.push_back(model.clock_names[clock]);
                }
                for (const IntUpdate& update : branch.updates) {
                    DocUpdate doc_update;
                    doc_update.target = model.int_vars[update.target].name;
                    doc_update.value.constant = update.value.constant;
                    for (const auto& [sign, var] : update.value.terms) {
                        doc_update.value.terms.emplace_back(sign, model.int_vars[var].name);
                    }
                    doc_branch.updates.push_back(std::move(doc_update));
                }
                doc_branch.target = comp.locations[branch.target].name;
                doc_edge.branches.push_back(std::move(doc_branch));
            }
            doc_comp.edges.push_back(std::move(doc_edge));
        }
        doc.components.push_back(std::move(doc_comp));
    }
    return doc;
}

Component syntactic_compose(const NetworkModel& model, uint32_t first, uint32_t second) {
    if (first >= model.components.size() || second >= model.components.size() || first == second) {
        throw model_error(Errc::NotComposable, "composition needs two distinct components");
    }
    const Component& c1 = model.components[first];
    const Component& c2 = model.components[second];
    for (uint32_t clock : c1.clocks) {
        if (std::find(c2.clocks.begin(), c2.clocks.end(), clock) != c2.clocks.end()) {
            throw model_error(Errc::NotComposable, "clock sets overlap");
        }
    }
    for (uint32_t action : c1.output_actions) {
        if (std::find(c2.output_actions.begin(), c2.output_actions.end(), action) !=
            c2.output_actions.end()) {
            throw model_error(Errc::NotComposable,
                              "output action '" + model.actions[action] + "' owned by both");
        }
    }

    Component product;
    product.name = c1.name + "_" + c2.name;
    product.clocks = c1.clocks;
    product.clocks.insert(product.clocks.end(), c2.clocks.begin(), c2.clocks.end());
    product.output_actions = c1.output_actions;
    product.output_actions.insert(product.output_actions.end(), c2.output_actions.begin(),
                                  c2.output_actions.end());
    for (uint32_t a = 0; a < model.actions.size(); ++a) {
        if (std::find(product.output_actions.begin(), product.output_actions.end(), a) ==
            product.output_actions.end()) {
            product.input_actions.push_back(a);
        }
    }

    const uint32_t n2 = static_cast<uint32_t>(c2.locations.size());
    auto pair_index = [n2](uint32_t l1, uint32_t l2) { return l1 * n2 + l2; };

    for (const Location& l1 : c1.locations) {
        for (const Location& l2 : c2.locations) {
            Location loc;
            loc.name = l1.name + "__" + l2.name;
            loc.invariant.atoms = l1.invariant.atoms;
            loc.invariant.atoms.insert(loc.invariant.atoms.end(), l2.invariant.atoms.begin(),
                                       l2.invariant.atoms.end());
            loc.rates = l1.rates;
            loc.rates.insert(loc.rates.end(), l2.rates.begin(), l2.rates.end());
            if (l1.exp_rate && l2.exp_rate) {
                loc.exp_rate = *l1.exp_rate + *l2.exp_rate;
            } else if (l1.exp_rate) {
                loc.exp_rate = l1.exp_rate;
            } else if (l2.exp_rate) {
                loc.exp_rate = l2.exp_rate;
            }
            loc.unbounded_delay = l1.unbounded_delay && l2.unbounded_delay;
            product.locations.push_back(std::move(loc));
        }
    }
    product.initial = pair_index(c1.initial, c2.initial);

    // Synchronized edges: both factors move on every action. Validation has
    // already materialized looping input edges, so the factor edge sets are
    // total per (location, action).
    auto edges_for = [](const Component& comp, uint32_t loc, uint32_t action) {
        std::vector<const Edge*> found;
        const Location& l = comp.locations[loc];
        for (uint32_t idx : l.output_edges) {
            if (comp.edges[idx].action == action) {
                found.push_back(&comp.edges[idx]);
            }
        }
        for (uint32_t idx : l.input_edges) {
            if (comp.edges[idx].action == action) {
                found.push_back(&comp.edges[idx]);
            }
        }
        return found;
    };

    for (uint32_t l1 = 0; l1 < c1.locations.size(); ++l1) {
        for (uint32_t l2 = 0; l2 < c2.locations.size(); ++l2) {
            for (uint32_t action = 0; action < model.actions.size(); ++action) {
                const bool own1 =
                    std::find(c1.output_actions.begin(), c1.output_actions.end(), action) !=
                    c1.output_actions.end();
                const bool own2 =
                    std::find(c2.output_actions.begin(), c2.output_actions.end(), action) !=
                    c2.output_actions.end();
                for (const Edge* e1 : edges_for(c1, l1, action)) {
                    for (const Edge* e2 : edges_for(c2, l2, action)) {
                        Edge edge;
                        edge.source = pair_index(l1, l2);
                        edge.action = action;
                        edge.is_output = own1 || own2;
                        edge.synthesized = e1->synthesized && e2->synthesized;
                        edge.guard.atoms = e1->guard.atoms;
                        edge.guard.atoms.insert(edge.guard.atoms.end(), e2->guard.atoms.begin(),
                                                e2->guard.atoms.end());
                        for (const Branch& b1 : e1->branches) {
                            for (const Branch& b2 : e2->branches) {
                                Branch branch;
                                branch.weight = b1.weight * b2.weight;
                                branch.resets = b1.resets;
                                branch.resets.insert(branch.resets.end(), b2.resets.begin(),
                                                     b2.resets.end());
                                branch.updates = b1.updates;
                                branch.updates.insert(branch.updates.end(), b2.updates.begin(),
                                                      b2.updates.end());
                                branch.target = pair_index(b1.target, b2.target);
                                edge.branches.push_back(std::move(branch));
                            }
                        }
                        const uint32_t edge_idx = static_cast<uint32_t>(product.edges.size());
                        auto& bucket = edge.is_output
                                           ? product.locations[edge.source].output_edges
                                           : product.locations[edge.source].input_edges;
                        bucket.push_back(edge_idx);
                        product.edges.push_back(std::move(edge));
                    }
                }
            }
        }
    }
    return product;
}

} // namespace nptasmc
