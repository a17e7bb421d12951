#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nptasmc/diagnostics.hpp"
#include "nptasmc/document.hpp"

namespace nptasmc {

// Validated network representation. Identifiers are interned into global
// index spaces: clocks (index 0 is the reserved rate-1 clock "time"),
// integer variables, and actions. Components keep their own location and
// edge tables but refer to the global spaces.

using ClockValuation = std::vector<double>; // indexed by global clock id
using RateVector = std::vector<int64_t>;    // nonnegative, one rate per clock

inline constexpr uint32_t kTimeClock = 0;
inline constexpr const char* kTimeClockName = "time";

struct GuardAtom {
    bool on_clock = true;
    uint32_t var = 0; // global clock index or int-var index
    Rel rel = Rel::Le;
    int64_t bound = 0;

    bool operator==(const GuardAtom&) const = default;
};

struct Guard {
    std::vector<GuardAtom> atoms; // conjunction; empty means true

    bool operator==(const Guard&) const = default;
};

struct IntExpr {
    int64_t constant = 0;
    std::vector<std::pair<int, uint32_t>> terms; // sign, int-var index

    bool operator==(const IntExpr&) const = default;
};

struct IntUpdate {
    uint32_t target = 0;
    IntExpr value;

    bool operator==(const IntUpdate&) const = default;
};

struct Branch {
    uint32_t weight = 1;
    std::vector<uint32_t> resets; // global clock indices
    std::vector<IntUpdate> updates;
    uint32_t target = 0; // location index within the owning component

    bool operator==(const Branch&) const = default;
};

struct Edge {
    uint32_t source = 0;
    uint32_t action = 0;
    bool is_output = true;
    Guard guard;
    std::vector<Branch> branches;
    bool synthesized = false;

    bool operator==(const Edge&) const = default;
};

struct Location {
    std::string name;
    Guard invariant;                  // upper-bound clock atoms + int atoms
    std::vector<int64_t> rates;       // parallel to Component::clocks
    std::optional<double> exp_rate;
    // True when no invariant clock atom advances at this location, i.e. the
    // delay supremum is statically infinite.
    bool unbounded_delay = true;
    std::vector<uint32_t> output_edges; // indices into Component::edges
    std::vector<uint32_t> input_edges;

    bool operator==(const Location&) const = default;
};

struct Component {
    std::string name;
    std::vector<uint32_t> clocks; // global clock indices owned here
    std::vector<Location> locations;
    uint32_t initial = 0;
    std::vector<uint32_t> output_actions;
    std::vector<uint32_t> input_actions; // effective: every action not output here
    std::vector<Edge> edges;

    std::optional<uint32_t> location_index(const std::string& name) const;

    bool operator==(const Component&) const = default;
};

struct IntVarInfo {
    std::string name;
    int32_t owner = -1;
    int64_t lo = 0;
    int64_t hi = 0;
    int64_t init = 0;

    bool operator==(const IntVarInfo&) const = default;
};

struct NetworkState {
    std::vector<uint32_t> locations; // one per component
    ClockValuation clocks;
    std::vector<int64_t> ints;

    bool operator==(const NetworkState&) const = default;
};

struct NetworkModel {
    std::string name;
    std::vector<std::string> clock_names; // [0] == "time"
    std::vector<int32_t> clock_owner;     // component index, -1 for "time"
    std::vector<IntVarInfo> int_vars;
    std::vector<std::string> actions;
    std::vector<int32_t> action_owner; // emitting component per action
    std::vector<Component> components;

    std::optional<uint32_t> clock_index(const std::string& name) const;
    std::optional<uint32_t> int_var_index(const std::string& name) const;
    std::optional<uint32_t> action_index(const std::string& name) const;
    std::optional<uint32_t> component_index(const std::string& name) const;

    NetworkState initial_state() const;
    // Rate of every clock under the given location vector.
    RateVector rates_for(std::span<const uint32_t> locations) const;
    int64_t clock_rate(std::span<const uint32_t> locations, uint32_t clock) const;

    bool operator==(const NetworkModel&) const = default;
};

struct ValidationResult {
    std::optional<NetworkModel> model;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return model.has_value(); }
};

// Rebuilds the syntactic form of a validated model, keeping synthesized
// input self-loops flagged as such.
ModelDocument document_from(const NetworkModel& model);

// Resolves and checks a parsed document. Adds looping input edges for every
// (location, input action) pair that has none, so the result is
// input-enabled by construction.
ValidationResult validate(const ModelDocument& doc);

// --- valuation algebra ---

ClockValuation advance(const ClockValuation& v, const RateVector& rates, double delay);
ClockValuation reset(const ClockValuation& v, std::span<const uint32_t> clocks);

bool eval_guard(const Guard& g, const NetworkState& state);
// Same, with an absolute tolerance on clock atoms; used wherever a clock
// value was produced by advancing to a computed boundary.
bool eval_guard_eps(const Guard& g, const NetworkState& state, double eps);

// True when every component's invariant holds in the state. `eps` tolerance
// applies to clock atoms.
bool invariants_satisfied(const NetworkModel& model, const NetworkState& state, double eps = 0.0);
bool invariant_satisfied(const NetworkModel& model, const NetworkState& state, uint32_t component,
                         double eps = 0.0);

// --- discrete structure ---

struct EnabledOutput {
    uint32_t action = 0;
    uint32_t edge = 0; // index into the component's edge table
};

// Output actions of one component whose guards hold in the state. Throws
// model_error(DeterminismViolation) when one action is enabled via two edges.
std::vector<EnabledOutput> enabled_outputs(const NetworkModel& model, const NetworkState& state,
                                           uint32_t component, double eps = 0.0);

// Product of two components of the same validated network. Both components
// are input-completed first, so the product synchronizes on every action.
Component syntactic_compose(const NetworkModel& model, uint32_t first, uint32_t second);

// Applies one branch of an edge to the state: resets, then updates in
// sequence. Throws model_error(IntRangeViolation) when an assignment leaves
// a variable's declared range.
void apply_branch(const NetworkModel& model, NetworkState& state, uint32_t component,
                  const Edge& edge, const Branch& branch);

} // namespace nptasmc
