#include "nptasmc/text.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <sstream>
#include <unordered_set>

namespace nptasmc {

std::string format_double(double value) {
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    (void)ec;
    return std::string(buf, ptr);
}

namespace {

const std::unordered_set<std::string>& reserved_words() {
    static const std::unordered_set<std::string> words{
        "network", "automaton", "clock", "int",     "action", "out",   "in",
        "location", "inv",       "rate",  "exprate", "initial", "edge", "on",
        "guard",    "weight",    "reset", "set",     "goto",    "end",  "run",
        "observer", "bound",     "state", "delay",   "output",  "by",   "true",
        "false",
    };
    return words;
}

struct Token {
    enum class Kind { Ident, Number, Op, Newline, End };
    Kind kind = Kind::End;
    std::string text;
    bool is_integer = false;
    int64_t ivalue = 0;
    double dvalue = 0;
    int line = 1;
    int col = 1;
};

// Signals a statement-level parse failure after a diagnostic was recorded.
struct parse_abort {};

class Lexer {
  public:
    Lexer(std::string_view text, std::vector<Diagnostic>& diags) : text_(text), diags_(diags) {}

    std::vector<Token> run() {
        std::vector<Token> tokens;
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == '\r') {
                ++pos_;
                continue;
            }
            if (c == '\n') {
                push(tokens, Token::Kind::Newline, "\n");
                ++pos_;
                ++line_;
                col_ = 1;
                continue;
            }
            if (c == ' ' || c == '\t') {
                ++pos_;
                ++col_;
                continue;
            }
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') {
                    ++pos_;
                }
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                lex_ident(tokens);
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c))) {
                lex_number(tokens);
                continue;
            }
            lex_op(tokens);
        }
        push(tokens, Token::Kind::End, "");
        return tokens;
    }

  private:
    void push(std::vector<Token>& tokens, Token::Kind kind, std::string text) {
        Token t;
        t.kind = kind;
        t.text = std::move(text);
        t.line = line_;
        t.col = col_;
        tokens.push_back(std::move(t));
    }

    void lex_ident(std::vector<Token>& tokens) {
        const size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '_')) {
            ++pos_;
        }
        push(tokens, Token::Kind::Ident, std::string(text_.substr(start, pos_ - start)));
        col_ += static_cast<int>(pos_ - start);
    }

    void lex_number(std::vector<Token>& tokens) {
        const size_t start = pos_;
        bool real = false;
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '.' && pos_ + 1 < text_.size() &&
                       std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
                real = true;
                ++pos_;
            } else if ((c == 'e' || c == 'E') && pos_ + 1 < text_.size() &&
                       (std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])) ||
                        text_[pos_ + 1] == '-' || text_[pos_ + 1] == '+')) {
                real = true;
                pos_ += 2;
            } else {
                break;
            }
        }
        const std::string_view body = text_.substr(start, pos_ - start);
        Token t;
        t.kind = Token::Kind::Number;
        t.text = std::string(body);
        t.line = line_;
        t.col = col_;
        std::from_chars(body.data(), body.data() + body.size(), t.dvalue);
        if (!real) {
            t.is_integer = true;
            std::from_chars(body.data(), body.data() + body.size(), t.ivalue);
        }
        tokens.push_back(std::move(t));
        col_ += static_cast<int>(pos_ - start);
    }

    void lex_op(std::vector<Token>& tokens) {
        static const char* two_char[] = {"->", "<=", ">=", "==", "&&", "||", "<>", "[]"};
        const std::string_view rest = text_.substr(pos_);
        for (const char* op : two_char) {
            if (rest.size() >= 2 && rest.substr(0, 2) == op) {
                push(tokens, Token::Kind::Op, op);
                pos_ += 2;
                col_ += 2;
                return;
            }
        }
        const char c = text_[pos_];
        if (std::strchr("<>=!?{}[](),./|+-*", c) != nullptr) {
            push(tokens, Token::Kind::Op, std::string(1, c));
            ++pos_;
            ++col_;
            return;
        }
        diags_.push_back({DiagCode::SyntaxError,
                          std::string("unexpected character '") + c + "'", line_, col_});
        ++pos_;
        ++col_;
    }

    std::string_view text_;
    std::vector<Diagnostic>& diags_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class TokenCursor {
  public:
    TokenCursor(std::vector<Token> tokens, std::vector<Diagnostic>& diags)
        : tokens_(std::move(tokens)), diags_(diags) {}

    const Token& peek() const { return tokens_[pos_]; }

    const Token& next() {
        const Token& t = tokens_[pos_];
        if (t.kind != Token::Kind::End) {
            ++pos_;
        }
        return t;
    }

    bool at_op(const char* op) const {
        return peek().kind == Token::Kind::Op && peek().text == op;
    }

    bool at_word(const char* word) const {
        return peek().kind == Token::Kind::Ident && peek().text == word;
    }

    bool eat_op(const char* op) {
        if (at_op(op)) {
            next();
            return true;
        }
        return false;
    }

    bool eat_word(const char* word) {
        if (at_word(word)) {
            next();
            return true;
        }
        return false;
    }

    void skip_newlines() {
        while (peek().kind == Token::Kind::Newline) {
            next();
        }
    }

    [[noreturn]] void fail(DiagCode code, const std::string& message) {
        diags_.push_back({code, message, peek().line, peek().col});
        throw parse_abort{};
    }

    void expect_op(const char* op) {
        if (!eat_op(op)) {
            fail(DiagCode::SyntaxError, std::string("expected '") + op + "'");
        }
    }

    void expect_word(const char* word) {
        if (!eat_word(word)) {
            fail(DiagCode::SyntaxError, std::string("expected '") + word + "'");
        }
    }

    std::string identifier(const char* what) {
        if (peek().kind != Token::Kind::Ident) {
            fail(DiagCode::SyntaxError, std::string("expected ") + what);
        }
        if (reserved_words().count(peek().text)) {
            fail(DiagCode::ReservedWord, "'" + peek().text + "' is a reserved word");
        }
        return next().text;
    }

    int64_t integer(const char* what) {
        bool negative = false;
        if (at_op("-")) {
            next();
            negative = true;
        }
        if (peek().kind != Token::Kind::Number || !peek().is_integer) {
            fail(DiagCode::SyntaxError, std::string("expected ") + what);
        }
        const int64_t value = next().ivalue;
        return negative ? -value : value;
    }

    double real(const char* what) {
        bool negative = false;
        if (at_op("-")) {
            next();
            negative = true;
        }
        if (at_word("inf")) {
            next();
            return negative ? -std::numeric_limits<double>::infinity()
                            : std::numeric_limits<double>::infinity();
        }
        if (peek().kind != Token::Kind::Number) {
            fail(DiagCode::SyntaxError, std::string("expected ") + what);
        }
        const double value = next().dvalue;
        return negative ? -value : value;
    }

    // Skips to the start of the next line; used for statement recovery.
    void synchronize() {
        while (peek().kind != Token::Kind::Newline && peek().kind != Token::Kind::End) {
            next();
        }
        skip_newlines();
    }

    void end_of_statement() {
        if (peek().kind == Token::Kind::Newline || peek().kind == Token::Kind::End) {
            skip_newlines();
            return;
        }
        fail(DiagCode::SyntaxError, "unexpected trailing tokens");
    }

  private:
    std::vector<Token> tokens_;
    std::vector<Diagnostic>& diags_;
    size_t pos_ = 0;
};

std::optional<Rel> op_to_rel(const std::string& op) {
    if (op == "<") return Rel::Lt;
    if (op == "<=") return Rel::Le;
    if (op == ">") return Rel::Gt;
    if (op == ">=") return Rel::Ge;
    if (op == "==" || op == "=") return Rel::Eq;
    return std::nullopt;
}

class ModelParser {
  public:
    explicit ModelParser(std::string_view text) : cursor_(lex(text), diags_) {}

    ParseResult parse() {
        ModelDocument doc;
        try {
            cursor_.skip_newlines();
            cursor_.expect_word("network");
            doc.name = cursor_.identifier("network name");
            cursor_.end_of_statement();
            while (cursor_.peek().kind != Token::Kind::End) {
                if (!cursor_.at_word("automaton")) {
                    cursor_.fail(DiagCode::SyntaxError, "expected 'automaton'");
                }
                parse_component(doc);
                cursor_.skip_newlines();
            }
        } catch (const parse_abort&) {
            return {std::nullopt, diags_};
        }
        if (!diags_.empty()) {
            return {std::nullopt, diags_};
        }
        return {std::move(doc), diags_};
    }

  private:
    std::vector<Token> lex(std::string_view text) { return Lexer(text, diags_).run(); }

    void parse_component(ModelDocument& doc) {
        DocComponent comp;
        comp.line = cursor_.peek().line;
        cursor_.expect_word("automaton");
        comp.name = cursor_.identifier("automaton name");
        cursor_.end_of_statement();
        while (!cursor_.eat_word("end")) {
            if (cursor_.peek().kind == Token::Kind::End) {
                cursor_.fail(DiagCode::SyntaxError, "missing 'end' for automaton " + comp.name);
            }
            try {
                parse_statement(comp);
            } catch (const parse_abort&) {
                cursor_.synchronize();
            }
        }
        cursor_.end_of_statement();
        doc.components.push_back(std::move(comp));
    }

    void parse_statement(DocComponent& comp) {
        if (cursor_.eat_word("clock")) {
            do {
                const int line = cursor_.peek().line;
                std::string name = cursor_.identifier("clock name");
                if (std::find(comp.clocks.begin(), comp.clocks.end(), name) !=
                    comp.clocks.end()) {
                    diags_.push_back({DiagCode::DuplicateIdentifier,
                                      "clock '" + name + "' redeclared", line, 0});
                }
                comp.clocks.push_back(std::move(name));
            } while (cursor_.peek().kind == Token::Kind::Ident);
            cursor_.end_of_statement();
            return;
        }
        if (cursor_.eat_word("int")) {
            DocIntVar var;
            var.line = cursor_.peek().line;
            var.name = cursor_.identifier("variable name");
            cursor_.expect_op("[");
            var.lo = cursor_.integer("lower bound");
            cursor_.expect_op(",");
            var.hi = cursor_.integer("upper bound");
            cursor_.expect_op("]");
            cursor_.expect_op("=");
            var.init = cursor_.integer("initial value");
            for (const DocIntVar& other : comp.int_vars) {
                if (other.name == var.name) {
                    diags_.push_back({DiagCode::DuplicateIdentifier,
                                      "variable '" + var.name + "' redeclared", var.line, 0});
                }
            }
            comp.int_vars.push_back(std::move(var));
            cursor_.end_of_statement();
            return;
        }
        if (cursor_.eat_word("action")) {
            std::vector<std::string>* list = nullptr;
            if (cursor_.eat_word("out")) {
                list = &comp.out_actions;
            } else if (cursor_.eat_word("in")) {
                list = &comp.in_actions;
            } else {
                cursor_.fail(DiagCode::SyntaxError, "expected 'out' or 'in'");
            }
            do {
                list->push_back(cursor_.identifier("action name"));
            } while (cursor_.peek().kind == Token::Kind::Ident);
            cursor_.end_of_statement();
            return;
        }
        if (cursor_.eat_word("location")) {
            parse_location(comp);
            return;
        }
        if (cursor_.eat_word("initial")) {
            comp.initial = cursor_.identifier("initial location");
            cursor_.end_of_statement();
            return;
        }
        if (cursor_.eat_word("edge")) {
            parse_edge(comp);
            return;
        }
        cursor_.fail(DiagCode::SyntaxError, "expected a declaration");
    }

    DocGuard parse_guard() {
        DocGuard guard;
        while (true) {
            DocGuardAtom atom;
            atom.line = cursor_.peek().line;
            atom.var = cursor_.identifier("guard variable");
            if (cursor_.peek().kind != Token::Kind::Op) {
                cursor_.fail(DiagCode::SyntaxError, "expected a comparison operator");
            }
            const auto rel = op_to_rel(cursor_.peek().text);
            if (!rel) {
                cursor_.fail(DiagCode::SyntaxError, "expected a comparison operator");
            }
            cursor_.next();
            atom.rel = *rel;
            atom.bound = cursor_.integer("integer bound");
            guard.atoms.push_back(std::move(atom));
            if (!cursor_.eat_op("&&")) {
                break;
            }
        }
        return guard;
    }

    void parse_location(DocComponent& comp) {
        DocLocation loc;
        loc.line = cursor_.peek().line;
        loc.name = cursor_.identifier("location name");
        for (const DocLocation& other : comp.locations) {
            if (other.name == loc.name) {
                diags_.push_back({DiagCode::DuplicateIdentifier,
                                  "location '" + loc.name + "' redeclared", loc.line, 0});
            }
        }
        while (true) {
            if (cursor_.eat_word("inv")) {
                loc.invariant = parse_guard();
            } else if (cursor_.eat_word("rate")) {
                do {
                    std::string clock = cursor_.identifier("clock name");
                    cursor_.expect_op("=");
                    const int64_t rate = cursor_.integer("rate");
                    loc.rates.emplace_back(std::move(clock), rate);
                } while (cursor_.peek().kind == Token::Kind::Ident &&
                         !cursor_.at_word("exprate") && !cursor_.at_word("inv") &&
                         !cursor_.at_word("rate"));
            } else if (cursor_.eat_word("exprate")) {
                const int64_t num = cursor_.integer("exprate numerator");
                int64_t den = 1;
                if (cursor_.eat_op("/")) {
                    den = cursor_.integer("exprate denominator");
                }
                loc.exp_rate = {num, den};
            } else {
                break;
            }
        }
        comp.locations.push_back(std::move(loc));
        cursor_.end_of_statement();
    }

    DocIntExpr parse_int_expr() {
        DocIntExpr expr;
        int sign = 1;
        if (cursor_.eat_op("-")) {
            sign = -1;
        }
        while (true) {
            if (cursor_.peek().kind == Token::Kind::Number) {
                expr.constant += sign * cursor_.integer("integer");
            } else {
                expr.terms.emplace_back(sign, cursor_.identifier("variable"));
            }
            if (cursor_.eat_op("+")) {
                sign = 1;
            } else if (cursor_.eat_op("-")) {
                sign = -1;
            } else {
                break;
            }
        }
        return expr;
    }

    std::vector<std::string> parse_reset_list() {
        std::vector<std::string> resets;
        do {
            resets.push_back(cursor_.identifier("clock name"));
        } while (cursor_.peek().kind == Token::Kind::Ident && !cursor_.at_word("set") &&
                 !cursor_.at_word("goto") && !cursor_.at_word("weight") &&
                 !cursor_.at_word("reset"));
        return resets;
    }

    void parse_edge(DocComponent& comp) {
        DocEdge edge;
        edge.line = cursor_.peek().line;
        edge.source = cursor_.identifier("source location");
        cursor_.expect_op("->");
        edge.target = cursor_.identifier("target location");
        cursor_.expect_word("on");
        edge.action = cursor_.identifier("action name");
        if (cursor_.eat_op("!")) {
            edge.is_output = true;
        } else if (cursor_.eat_op("?")) {
            edge.is_output = false;
        } else {
            cursor_.fail(DiagCode::SyntaxError, "expected '!' or '?' after the action");
        }
        if (cursor_.eat_word("guard")) {
            edge.guard = parse_guard();
        }

        if (edge.is_output) {
            while (cursor_.at_op("{")) {
                cursor_.next();
                DocBranch branch;
                branch.target = edge.target;
                cursor_.skip_newlines();
                while (!cursor_.eat_op("}")) {
                    if (cursor_.eat_word("weight")) {
                        const int64_t w = cursor_.integer("weight");
                        if (w <= 0) {
                            cursor_.fail(DiagCode::SyntaxError, "weights are positive");
                        }
                        branch.weight = static_cast<uint32_t>(w);
                    } else if (cursor_.eat_word("reset")) {
                        for (std::string& clock : parse_reset_list()) {
                            branch.resets.push_back(std::move(clock));
                        }
                    } else if (cursor_.eat_word("set")) {
                        DocUpdate update;
                        update.line = cursor_.peek().line;
                        update.target = cursor_.identifier("variable");
                        cursor_.expect_op("=");
                        update.value = parse_int_expr();
                        branch.updates.push_back(std::move(update));
                    } else if (cursor_.eat_word("goto")) {
                        branch.target = cursor_.identifier("branch target");
                    } else {
                        cursor_.fail(DiagCode::SyntaxError,
                                     "expected weight, reset, set, goto or '}'");
                    }
                    cursor_.skip_newlines();
                }
                edge.branches.push_back(std::move(branch));
            }
            if (edge.branches.empty()) {
                DocBranch branch;
                branch.target = edge.target;
                edge.branches.push_back(std::move(branch));
            }
        } else {
            DocBranch branch;
            branch.target = edge.target;
            while (true) {
                if (cursor_.eat_word("reset")) {
                    for (std::string& clock : parse_reset_list()) {
                        branch.resets.push_back(std::move(clock));
                    }
                } else if (cursor_.eat_word("set")) {
                    DocUpdate update;
                    update.line = cursor_.peek().line;
                    update.target = cursor_.identifier("variable");
                    cursor_.expect_op("=");
                    update.value = parse_int_expr();
                    branch.updates.push_back(std::move(update));
                } else {
                    break;
                }
            }
            edge.branches.push_back(std::move(branch));
        }
        comp.edges.push_back(std::move(edge));
        cursor_.end_of_statement();
    }

    std::vector<Diagnostic> diags_;
    TokenCursor cursor_;
};

} // namespace

ParseResult parse_model(std::string_view text) {
    return ModelParser(text).parse();
}

// --- model serialization ---

namespace {

void write_guard(std::ostream& out, const DocGuard& guard) {
    for (size_t i = 0; i < guard.atoms.size(); ++i) {
        if (i > 0) {
            out << " && ";
        }
        const DocGuardAtom& atom = guard.atoms[i];
        out << atom.var << rel_text(atom.rel) << atom.bound;
    }
}

void write_int_expr(std::ostream& out, const DocIntExpr& expr) {
    bool first = true;
    for (const auto& [sign, var] : expr.terms) {
        if (first) {
            out << (sign < 0 ? "- " : "") << var;
            first = false;
        } else {
            out << (sign < 0 ? " - " : " + ") << var;
        }
    }
    if (expr.constant != 0 || first) {
        if (first) {
            out << expr.constant;
        } else if (expr.constant < 0) {
            out << " - " << -expr.constant;
        } else {
            out << " + " << expr.constant;
        }
    }
}

void write_branch_body(std::ostream& out, const DocBranch& branch, const std::string& edge_target,
                       bool with_weight) {
    if (with_weight && branch.weight != 1) {
        out << " weight " << branch.weight;
    }
    if (!branch.resets.empty()) {
        out << " reset";
        for (const std::string& clock : branch.resets) {
            out << ' ' << clock;
        }
    }
    for (const DocUpdate& update : branch.updates) {
        out << " set " << update.target << " = ";
        write_int_expr(out, update.value);
    }
    if (with_weight && !branch.target.empty() && branch.target != edge_target) {
        out << " goto " << branch.target;
    }
}

bool branch_is_plain(const DocBranch& branch, const std::string& edge_target) {
    return branch.weight == 1 && branch.resets.empty() && branch.updates.empty() &&
           (branch.target.empty() || branch.target == edge_target);
}

} // namespace

std::string serialize_model(const ModelDocument& doc) {
    std::ostringstream out;
    out << "network " << doc.name << "\n";
    for (const DocComponent& comp : doc.components) {
        out << "\nautomaton " << comp.name << "\n";
        if (!comp.clocks.empty()) {
            out << "  clock";
            for (const std::string& clock : comp.clocks) {
                out << ' ' << clock;
            }
            out << "\n";
        }
        for (const DocIntVar& var : comp.int_vars) {
            out << "  int " << var.name << " [" << var.lo << "," << var.hi << "] = " << var.init
                << "\n";
        }
        if (!comp.out_actions.empty()) {
            out << "  action out";
            for (const std::string& action : comp.out_actions) {
                out << ' ' << action;
            }
            out << "\n";
        }
        if (!comp.in_actions.empty()) {
            out << "  action in";
            for (const std::string& action : comp.in_actions) {
                out << ' ' << action;
            }
            out << "\n";
        }
        for (const DocLocation& loc : comp.locations) {
            out << "  location " << loc.name;
            if (loc.invariant && !loc.invariant->atoms.empty()) {
                out << " inv ";
                write_guard(out, *loc.invariant);
            }
            if (!loc.rates.empty()) {
                out << " rate";
                for (const auto& [clock, rate] : loc.rates) {
                    out << ' ' << clock << '=' << rate;
                }
            }
            if (loc.exp_rate) {
                out << " exprate " << loc.exp_rate->first;
                if (loc.exp_rate->second != 1) {
                    out << '/' << loc.exp_rate->second;
                }
            }
            out << "\n";
        }
        out << "  initial " << comp.initial << "\n";
        for (const DocEdge& edge : comp.edges) {
            if (edge.synthesized) {
                continue;
            }
            out << "  edge " << edge.source << " -> " << edge.target << " on " << edge.action
                << (edge.is_output ? '!' : '?');
            if (!edge.guard.atoms.empty()) {
                out << " guard ";
                write_guard(out, edge.guard);
            }
            if (edge.is_output) {
                const bool plain = edge.branches.size() == 1 &&
                                   branch_is_plain(edge.branches.front(), edge.target);
                if (!plain) {
                    for (const DocBranch& branch : edge.branches) {
                        out << " {";
                        write_branch_body(out, branch, edge.target, true);
                        out << " }";
                    }
                }
            } else {
                write_branch_body(out, edge.branches.front(), edge.target, false);
            }
            out << "\n";
        }
        out << "end\n";
    }
    return out.str();
}

// --- query parsing ---

namespace {

class QueryParser {
  public:
    QueryParser(std::string_view text, const NetworkModel& model)
        : model_(model), cursor_(Lexer(text, diags_).run(), diags_) {}

    QueryParseResult parse() {
        PwctlQuery query;
        try {
            cursor_.skip_newlines();
            cursor_.expect_word("Pr");
            cursor_.expect_op("[");
            const std::string observer = cursor_.identifier("observer clock");
            if (auto idx = model_.clock_index(observer)) {
                query.observer = *idx;
            } else {
                cursor_.fail(DiagCode::UnknownObserver,
                             "observer clock '" + observer + "' is not declared");
            }
            cursor_.expect_op("<=");
            const int64_t bound = cursor_.integer("cost bound");
            if (bound <= 0) {
                cursor_.fail(DiagCode::SyntaxError, "cost bound must be a positive integer");
            }
            query.bound = static_cast<double>(bound);
            cursor_.expect_op("]");
            cursor_.expect_op("(");
            if (cursor_.eat_op("<>")) {
                query.is_diamond = true;
            } else if (cursor_.eat_op("[]")) {
                query.is_diamond = false;
            } else {
                cursor_.fail(DiagCode::SyntaxError, "expected '<>' or '[]'");
            }
            query.phi = parse_or();
            cursor_.expect_op(")");
            if (cursor_.peek().kind == Token::Kind::Op && !cursor_.at_op(")")) {
                const auto rel = op_to_rel(cursor_.peek().text);
                if (!rel) {
                    cursor_.fail(DiagCode::SyntaxError, "expected a probability comparison");
                }
                cursor_.next();
                const double p = cursor_.real("probability");
                if (p < 0.0 || p > 1.0) {
                    cursor_.fail(DiagCode::ProbabilityOutOfRange,
                                 "probability " + format_double(p) + " lies outside [0,1]");
                }
                query.comparison = {{*rel, p}};
            }
            cursor_.skip_newlines();
            if (cursor_.peek().kind != Token::Kind::End) {
                cursor_.fail(DiagCode::SyntaxError, "unexpected trailing tokens");
            }
        } catch (const parse_abort&) {
            return {std::nullopt, diags_};
        }
        if (!diags_.empty()) {
            return {std::nullopt, diags_};
        }
        return {std::move(query), diags_};
    }

  private:
    StateProperty parse_or() {
        std::vector<StateProperty> children;
        children.push_back(parse_and());
        while (cursor_.eat_op("||")) {
            children.push_back(parse_and());
        }
        if (children.size() == 1) {
            return std::move(children.front());
        }
        return StateProperty::disj(std::move(children));
    }

    StateProperty parse_and() {
        std::vector<StateProperty> children;
        children.push_back(parse_unary());
        while (cursor_.eat_op("&&")) {
            children.push_back(parse_unary());
        }
        if (children.size() == 1) {
            return std::move(children.front());
        }
        return StateProperty::conj(std::move(children));
    }

    StateProperty parse_unary() {
        if (cursor_.eat_op("!")) {
            return StateProperty::negate(parse_unary());
        }
        if (cursor_.eat_op("(")) {
            StateProperty inner = parse_or();
            cursor_.expect_op(")");
            return inner;
        }
        if (cursor_.eat_word("true")) {
            return StateProperty::make_true();
        }
        if (cursor_.eat_word("false")) {
            return StateProperty::negate(StateProperty::make_true());
        }
        const std::string name = cursor_.identifier("atom");
        if (cursor_.eat_op(".")) {
            const std::string loc = cursor_.identifier("location name");
            const auto comp_idx = model_.component_index(name);
            if (!comp_idx) {
                cursor_.fail(DiagCode::UnresolvedReference,
                             "unknown component '" + name + "'");
            }
            const auto loc_idx = model_.components[*comp_idx].location_index(loc);
            if (!loc_idx) {
                cursor_.fail(DiagCode::UnresolvedReference,
                             "component '" + name + "' has no location '" + loc + "'");
            }
            return StateProperty::in_location(*comp_idx, *loc_idx);
        }
        if (cursor_.peek().kind != Token::Kind::Op) {
            cursor_.fail(DiagCode::SyntaxError, "expected a comparison operator");
        }
        const auto rel = op_to_rel(cursor_.peek().text);
        if (!rel) {
            cursor_.fail(DiagCode::SyntaxError, "expected a comparison operator");
        }
        cursor_.next();
        const int64_t bound = cursor_.integer("integer bound");
        if (auto var = model_.int_var_index(name)) {
            return StateProperty::int_cmp(*var, *rel, bound);
        }
        if (auto clock = model_.clock_index(name)) {
            if (*rel == Rel::Eq) {
                cursor_.fail(DiagCode::GuardKindViolation,
                             "equality atoms on clocks are not allowed in properties");
            }
            return StateProperty::clock_cmp(*clock, *rel, bound);
        }
        cursor_.fail(DiagCode::UnresolvedReference, "unknown identifier '" + name + "'");
    }

    const NetworkModel& model_;
    std::vector<Diagnostic> diags_;
    TokenCursor cursor_;
};

} // namespace

QueryParseResult parse_query(std::string_view text, const NetworkModel& model) {
    return QueryParser(text, model).parse();
}

// --- run traces ---

namespace {

void write_state(std::ostream& out, const NetworkModel& model, const NetworkState& state) {
    out << "state";
    for (uint32_t j = 0; j < model.components.size(); ++j) {
        out << ' ' << model.components[j].locations[state.locations[j]].name;
    }
    out << " |";
    for (uint32_t c = 0; c < model.clock_names.size(); ++c) {
        out << ' ' << model.clock_names[c] << '=' << format_double(state.clocks[c]);
    }
    out << " |";
    for (uint32_t v = 0; v < model.int_vars.size(); ++v) {
        out << ' ' << model.int_vars[v].name << '=' << state.ints[v];
    }
    out << "\n";
}

} // namespace

std::string serialize_run(const NetworkModel& model, const Run& run) {
    std::ostringstream out;
    out << "run " << model.name << "\n";
    out << "observer " << model.clock_names[run.observer] << " bound " << format_double(run.bound)
        << "\n";
    write_state(out, model, run.initial);
    for (const RunStep& step : run.steps) {
        out << "delay " << format_double(step.delay) << "\n";
        if (step.action) {
            out << "output " << model.actions[*step.action] << " by "
                << model.components[*step.emitter].name << "\n";
        }
        write_state(out, model, step.post);
    }
    out << "end " << (run.truncation == Truncation::BoundHit ? "bound" : "blocked") << "\n";
    return out.str();
}

namespace {

class RunParser {
  public:
    RunParser(std::string_view text, const NetworkModel& model)
        : model_(model), cursor_(Lexer(text, diags_).run(), diags_) {}

    RunParseResult parse() {
        Run run;
        try {
            cursor_.skip_newlines();
            cursor_.expect_word("run");
            const std::string name = cursor_.identifier("network name");
            if (name != model_.name) {
                cursor_.fail(DiagCode::UnresolvedReference,
                             "trace was recorded for network '" + name + "'");
            }
            cursor_.end_of_statement();
            cursor_.expect_word("observer");
            const std::string observer = cursor_.identifier("observer clock");
            if (auto idx = model_.clock_index(observer)) {
                run.observer = *idx;
            } else {
                cursor_.fail(DiagCode::UnknownObserver, "unknown clock '" + observer + "'");
            }
            cursor_.expect_word("bound");
            run.bound = cursor_.real("bound");
            cursor_.end_of_statement();
            run.initial = parse_state();
            while (true) {
                cursor_.skip_newlines();
                if (cursor_.eat_word("end")) {
                    if (cursor_.eat_word("bound")) {
                        run.truncation = Truncation::BoundHit;
                    } else if (cursor_.eat_word("blocked")) {
                        run.truncation = Truncation::Blocked;
                    } else {
                        cursor_.fail(DiagCode::SyntaxError, "expected 'bound' or 'blocked'");
                    }
                    break;
                }
                RunStep step;
                cursor_.expect_word("delay");
                step.delay = cursor_.real("delay");
                cursor_.end_of_statement();
                if (cursor_.eat_word("output")) {
                    const std::string action = cursor_.identifier("action");
                    if (auto idx = model_.action_index(action)) {
                        step.action = *idx;
                    } else {
                        cursor_.fail(DiagCode::UnresolvedReference,
                                     "unknown action '" + action + "'");
                    }
                    cursor_.expect_word("by");
                    const std::string comp = cursor_.identifier("component");
                    if (auto idx = model_.component_index(comp)) {
                        step.emitter = *idx;
                    } else {
                        cursor_.fail(DiagCode::UnresolvedReference,
                                     "unknown component '" + comp + "'");
                    }
                    cursor_.end_of_statement();
                }
                step.post = parse_state();
                run.steps.push_back(std::move(step));
            }
        } catch (const parse_abort&) {
            return {std::nullopt, diags_};
        }
        if (!diags_.empty()) {
            return {std::nullopt, diags_};
        }
        return {std::move(run), diags_};
    }

  private:
    NetworkState parse_state() {
        cursor_.skip_newlines();
        cursor_.expect_word("state");
        NetworkState state;
        for (uint32_t j = 0; j < model_.components.size(); ++j) {
            const std::string loc = cursor_.identifier("location");
            const auto idx = model_.components[j].location_index(loc);
            if (!idx) {
                cursor_.fail(DiagCode::UnresolvedReference,
                             "component '" + model_.components[j].name + "' has no location '" +
                                 loc + "'");
            }
            state.locations.push_back(*idx);
        }
        cursor_.expect_op("|");
        state.clocks.assign(model_.clock_names.size(), 0.0);
        for (uint32_t c = 0; c < model_.clock_names.size(); ++c) {
            const std::string name = cursor_.identifier("clock");
            if (name != model_.clock_names[c]) {
                cursor_.fail(DiagCode::UnresolvedReference, "unexpected clock '" + name + "'");
            }
            cursor_.expect_op("=");
            state.clocks[c] = cursor_.real("clock value");
        }
        cursor_.expect_op("|");
        state.ints.assign(model_.int_vars.size(), 0);
        for (uint32_t v = 0; v < model_.int_vars.size(); ++v) {
            const std::string name = cursor_.identifier("variable");
            if (name != model_.int_vars[v].name) {
                cursor_.fail(DiagCode::UnresolvedReference, "unexpected variable '" + name + "'");
            }
            cursor_.expect_op("=");
            state.ints[v] = cursor_.integer("variable value");
        }
        cursor_.end_of_statement();
        return state;
    }

    const NetworkModel& model_;
    std::vector<Diagnostic> diags_;
    TokenCursor cursor_;
};

} // namespace

RunParseResult parse_run(std::string_view text, const NetworkModel& model) {
    return RunParser(text, model).parse();
}

} // namespace nptasmc
