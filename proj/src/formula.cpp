#include "la/formula.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "la/error.hpp"

namespace la {

namespace {

bool reserved_word(const std::string& text) {
    return text == "forall" || text == "exists";
}

void check_identifier(const std::string& text, const char* role) {
    if (!valid_identifier(text)) {
        throw Error("InvalidFormula",
                    std::string(role) + " '" + text + "' is not a valid identifier");
    }
    if (reserved_word(text)) {
        throw Error("InvalidFormula",
                    std::string(role) + " '" + text + "' is a reserved word");
    }
}

int precedence(Kind kind) {
    switch (kind) {
        case Kind::Var:
        case Kind::Atom:
        case Kind::Pred:
            return 5;
        case Kind::Not:
            return 4;
        case Kind::And:
            return 3;
        case Kind::Or:
            return 2;
        case Kind::Implies:
            return 1;
        case Kind::Equiv:
            return 0;
        case Kind::Forall:
        case Kind::Exists:
            return -1;
    }
    return -1;
}

void render_operator(const Formula& f, int min_prec, std::string& out) {
    const bool parens = precedence(f.kind()) < min_prec;
    if (parens) out += '(';
    switch (f.kind()) {
        case Kind::Var:
        case Kind::Atom:
            out += f.name();
            break;
        case Kind::Pred:
            out += f.name();
            out += '(';
            out += f.var();
            out += ')';
            break;
        case Kind::Not:
            out += '~';
            render_operator(f.child(), 4, out);
            break;
        case Kind::And:
            for (std::size_t i = 0; i < f.parts().size(); ++i) {
                if (i > 0) out += " & ";
                render_operator(f.parts()[i], 4, out);
            }
            break;
        case Kind::Or:
            for (std::size_t i = 0; i < f.parts().size(); ++i) {
                if (i > 0) out += " | ";
                render_operator(f.parts()[i], 3, out);
            }
            break;
        case Kind::Implies:
            render_operator(f.lhs(), 2, out);
            out += " -> ";
            render_operator(f.rhs(), 1, out);
            break;
        case Kind::Equiv:
            render_operator(f.lhs(), 0, out);
            out += " <-> ";
            render_operator(f.rhs(), 1, out);
            break;
        case Kind::Forall:
        case Kind::Exists:
            out += f.kind() == Kind::Forall ? "forall " : "exists ";
            out += f.var();
            out += ". ";
            render_operator(f.body(), -1, out);
            break;
    }
    if (parens) out += ')';
}

void render_constructor(const Formula& f, std::string& out) {
    switch (f.kind()) {
        case Kind::Var:
            out += "Var(" + f.name() + ")";
            return;
        case Kind::Atom:
            out += "Atom(" + f.name() + ")";
            return;
        case Kind::Pred:
            out += "Pred(" + f.name() + ", " + f.var() + ")";
            return;
        case Kind::Not:
            out += "Not(";
            render_constructor(f.child(), out);
            out += ')';
            return;
        case Kind::And:
        case Kind::Or: {
            out += f.kind() == Kind::And ? "And(" : "Or(";
            for (std::size_t i = 0; i < f.parts().size(); ++i) {
                if (i > 0) out += ", ";
                render_constructor(f.parts()[i], out);
            }
            out += ')';
            return;
        }
        case Kind::Implies:
        case Kind::Equiv: {
            out += f.kind() == Kind::Implies ? "Implies(" : "Equiv(";
            render_constructor(f.lhs(), out);
            out += ", ";
            render_constructor(f.rhs(), out);
            out += ')';
            return;
        }
        case Kind::Forall:
        case Kind::Exists:
            out += f.kind() == Kind::Forall ? "Forall(" : "Exists(";
            out += f.var() + ", ";
            render_constructor(f.body(), out);
            out += ')';
            return;
    }
}

void collect_atoms(const Formula& f, std::vector<std::string>& out,
                   std::unordered_set<std::string>& seen) {
    switch (f.kind()) {
        case Kind::Atom:
        case Kind::Pred:
            if (seen.insert(f.name()).second) out.push_back(f.name());
            break;
        case Kind::Var:
            break;
        default:
            for (const Formula& part : f.parts()) collect_atoms(part, out, seen);
            break;
    }
}

bool closed_under(const Formula& f, std::vector<std::string>& bound) {
    switch (f.kind()) {
        case Kind::Atom:
            return true;
        case Kind::Var:
        case Kind::Pred: {
            const std::string& v = f.kind() == Kind::Var ? f.name() : f.var();
            return std::find(bound.begin(), bound.end(), v) != bound.end();
        }
        case Kind::Forall:
        case Kind::Exists: {
            bound.push_back(f.var());
            const bool ok = closed_under(f.body(), bound);
            bound.pop_back();
            return ok;
        }
        default:
            for (const Formula& part : f.parts()) {
                if (!closed_under(part, bound)) return false;
            }
            return true;
    }
}

}  // namespace

bool valid_identifier(const std::string& text) {
    if (text.empty()) return false;
    auto head = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
    auto tail = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
    if (!head(text[0])) return false;
    return std::all_of(text.begin() + 1, text.end(), tail);
}

Formula Formula::make(Kind kind, std::string name, std::string var,
                      std::vector<Formula> parts) {
    auto node = std::make_shared<Node>();
    node->kind = kind;
    node->name = std::move(name);
    node->var = std::move(var);
    node->parts = std::move(parts);
    return Formula(std::move(node));
}

bool Formula::operator==(const Formula& other) const {
    if (node_ == other.node_) return true;
    if (node_->kind != other.node_->kind) return false;
    if (node_->name != other.node_->name) return false;
    if (node_->var != other.node_->var) return false;
    if (node_->parts.size() != other.node_->parts.size()) return false;
    for (std::size_t i = 0; i < node_->parts.size(); ++i) {
        if (node_->parts[i] != other.node_->parts[i]) return false;
    }
    return true;
}

Formula var(std::string name) {
    check_identifier(name, "variable");
    return Formula::make(Kind::Var, std::move(name), "", {});
}

Formula atom(std::string name) {
    check_identifier(name, "atom");
    return Formula::make(Kind::Atom, std::move(name), "", {});
}

Formula pred(std::string name, std::string variable) {
    check_identifier(name, "predicate");
    check_identifier(variable, "variable");
    return Formula::make(Kind::Pred, std::move(name), std::move(variable), {});
}

Formula neg(Formula inner) {
    return Formula::make(Kind::Not, "", "", {std::move(inner)});
}

namespace {

std::vector<Formula> flatten_parts(Kind kind, std::vector<Formula> parts) {
    std::vector<Formula> flat;
    flat.reserve(parts.size());
    for (Formula& part : parts) {
        if (part.kind() == kind) {
            for (const Formula& sub : part.parts()) flat.push_back(sub);
        } else {
            flat.push_back(std::move(part));
        }
    }
    if (flat.size() < 2) {
        throw Error("InvalidFormula", kind == Kind::And
                                          ? "And requires at least two parts"
                                          : "Or requires at least two parts");
    }
    return flat;
}

}  // namespace

Formula conj(std::vector<Formula> parts) {
    return Formula::make(Kind::And, "", "", flatten_parts(Kind::And, std::move(parts)));
}

Formula disj(std::vector<Formula> parts) {
    return Formula::make(Kind::Or, "", "", flatten_parts(Kind::Or, std::move(parts)));
}

Formula implies(Formula antecedent, Formula consequent) {
    return Formula::make(Kind::Implies, "", "",
                         {std::move(antecedent), std::move(consequent)});
}

Formula equiv(Formula left, Formula right) {
    return Formula::make(Kind::Equiv, "", "", {std::move(left), std::move(right)});
}

Formula forall(std::string variable, Formula body) {
    check_identifier(variable, "variable");
    return Formula::make(Kind::Forall, "", std::move(variable), {std::move(body)});
}

Formula exists(std::string variable, Formula body) {
    check_identifier(variable, "variable");
    return Formula::make(Kind::Exists, "", std::move(variable), {std::move(body)});
}

std::vector<std::string> atoms(const Formula& f) {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    collect_atoms(f, out, seen);
    return out;
}

bool is_propositional(const Formula& f) {
    switch (f.kind()) {
        case Kind::Var:
        case Kind::Pred:
        case Kind::Forall:
        case Kind::Exists:
            return false;
        case Kind::Atom:
            return true;
        default:
            return std::all_of(f.parts().begin(), f.parts().end(), is_propositional);
    }
}

bool is_closed(const Formula& f) {
    std::vector<std::string> bound;
    return closed_under(f, bound);
}

Formula normalize_double_negation(const Formula& f) {
    switch (f.kind()) {
        case Kind::Var:
        case Kind::Atom:
        case Kind::Pred:
            return f;
        case Kind::Not: {
            Formula inner = normalize_double_negation(f.child());
            if (inner.kind() == Kind::Not) return inner.child();
            return neg(std::move(inner));
        }
        case Kind::And:
        case Kind::Or: {
            std::vector<Formula> parts;
            parts.reserve(f.parts().size());
            for (const Formula& part : f.parts()) {
                parts.push_back(normalize_double_negation(part));
            }
            return f.kind() == Kind::And ? conj(std::move(parts)) : disj(std::move(parts));
        }
        case Kind::Implies:
            return implies(normalize_double_negation(f.lhs()),
                           normalize_double_negation(f.rhs()));
        case Kind::Equiv:
            return equiv(normalize_double_negation(f.lhs()),
                         normalize_double_negation(f.rhs()));
        case Kind::Forall:
            return forall(f.var(), normalize_double_negation(f.body()));
        case Kind::Exists:
            return exists(f.var(), normalize_double_negation(f.body()));
    }
    return f;
}

std::string serialize(const Formula& f, Syntax syntax) {
    std::string out;
    if (syntax == Syntax::Operator) {
        render_operator(f, -1, out);
    } else {
        render_constructor(f, out);
    }
    return out;
}

}  // namespace la
