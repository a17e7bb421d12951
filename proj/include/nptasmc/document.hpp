#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nptasmc {

// Comparison relation used in guards and state properties. Eq is legal on
// integer variables only.
enum class Rel : uint8_t { Lt, Le, Gt, Ge, Eq };

const char* rel_text(Rel rel);

// Syntactic model form produced by the parser and consumed by validation.
// All references are by name; resolution happens in validate().

struct DocGuardAtom {
    std::string var;
    Rel rel = Rel::Le;
    int64_t bound = 0;
    int line = 0;
};

struct DocGuard {
    std::vector<DocGuardAtom> atoms; // conjunction; empty means true
};

// Linear integer expression: constant + sum of signed variable terms.
struct DocIntExpr {
    int64_t constant = 0;
    std::vector<std::pair<int, std::string>> terms; // sign in {+1,-1}
};

struct DocUpdate {
    std::string target;
    DocIntExpr value;
    int line = 0;
};

struct DocBranch {
    uint32_t weight = 1;
    std::vector<std::string> resets;
    std::vector<DocUpdate> updates;
    std::string target;
};

struct DocEdge {
    std::string source;
    std::string target; // default branch target
    std::string action;
    bool is_output = true;
    DocGuard guard;
    std::vector<DocBranch> branches; // never empty after parsing
    bool synthesized = false;        // input self-loop added by validation
    int line = 0;
};

struct DocLocation {
    std::string name;
    std::optional<DocGuard> invariant;
    std::vector<std::pair<std::string, int64_t>> rates; // clock -> rate, default 1
    std::optional<std::pair<int64_t, int64_t>> exp_rate; // numerator, denominator
    int line = 0;
};

struct DocIntVar {
    std::string name;
    int64_t lo = 0;
    int64_t hi = 0;
    int64_t init = 0;
    int line = 0;
};

struct DocComponent {
    std::string name;
    std::vector<std::string> clocks;
    std::vector<DocIntVar> int_vars;
    std::vector<std::string> out_actions;
    std::vector<std::string> in_actions;
    std::vector<DocLocation> locations;
    std::string initial;
    std::vector<DocEdge> edges;
    int line = 0;
};

struct ModelDocument {
    std::string name;
    std::vector<DocComponent> components;
};

bool operator==(const DocGuardAtom&, const DocGuardAtom&);
bool operator==(const DocGuard&, const DocGuard&);
bool operator==(const DocIntExpr&, const DocIntExpr&);
bool operator==(const DocUpdate&, const DocUpdate&);
bool operator==(const DocBranch&, const DocBranch&);
bool operator==(const DocEdge&, const DocEdge&);
bool operator==(const DocLocation&, const DocLocation&);
bool operator==(const DocIntVar&, const DocIntVar&);
bool operator==(const DocComponent&, const DocComponent&);
bool operator==(const ModelDocument&, const ModelDocument&);

} // namespace nptasmc
