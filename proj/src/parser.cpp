#include "la/parser.hpp"

#include <cctype>
#include <cstddef>
#include <optional>
#include <vector>

namespace la {

namespace {

enum class Tok {
    Ident,
    LParen,
    RParen,
    Dot,
    Comma,
    Not,
    And,
    Or,
    Implies,
    Equiv,
    Forall,
    Exists,
    End,
};

struct Token {
    Tok type;
    std::string text;
    std::size_t pos;  // character (code point) offset
};

const char* token_name(Tok t) {
    switch (t) {
        case Tok::Ident: return "identifier";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::Dot: return "'.'";
        case Tok::Comma: return "','";
        case Tok::Not: return "'~'";
        case Tok::And: return "'&'";
        case Tok::Or: return "'|'";
        case Tok::Implies: return "'->'";
        case Tok::Equiv: return "'<->'";
        case Tok::Forall: return "'forall'";
        case Tok::Exists: return "'exists'";
        case Tok::End: return "end of input";
    }
    return "?";
}

class Lexer {
public:
    explicit Lexer(const std::string& text) : s_(text) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_ws();
            if (i_ >= s_.size()) {
                out.push_back({Tok::End, "end of input", chars_});
                return out;
            }
            out.push_back(next());
        }
    }

private:
    void skip_ws() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) {
            ++i_;
            ++chars_;
        }
    }

    bool match(const char* lit) {
        std::size_t n = 0;
        while (lit[n] != '\0') ++n;
        if (s_.compare(i_, n, lit) != 0) return false;
        i_ += n;
        chars_ += count_chars(lit, n);
        return true;
    }

    static std::size_t count_chars(const char* bytes, std::size_t n) {
        std::size_t chars = 0;
        for (std::size_t k = 0; k < n; ++k) {
            if ((static_cast<unsigned char>(bytes[k]) & 0xC0) != 0x80) ++chars;
        }
        return chars;
    }

    Token next() {
        const std::size_t start = chars_;
        const char c = s_[i_];
        auto tok = [&](Tok t, std::string text) { return Token{t, std::move(text), start}; };

        switch (c) {
            case '(': ++i_; ++chars_; return tok(Tok::LParen, "(");
            case ')': ++i_; ++chars_; return tok(Tok::RParen, ")");
            case '.': ++i_; ++chars_; return tok(Tok::Dot, ".");
            case ',': ++i_; ++chars_; return tok(Tok::Comma, ",");
            case '~': ++i_; ++chars_; return tok(Tok::Not, "~");
            case '&': ++i_; ++chars_; return tok(Tok::And, "&");
            case '|': ++i_; ++chars_; return tok(Tok::Or, "|");
            default: break;
        }
        if (match("->")) return tok(Tok::Implies, "->");
        if (match("<->")) return tok(Tok::Equiv, "<->");
        // Unicode aliases.
        if (match("→")) return tok(Tok::Implies, "->");
        if (match("↔")) return tok(Tok::Equiv, "<->");
        if (match("∧")) return tok(Tok::And, "&");
        if (match("∨")) return tok(Tok::Or, "|");
        if (match("¬")) return tok(Tok::Not, "~");
        if (match("∀")) return tok(Tok::Forall, "forall");
        if (match("∃")) return tok(Tok::Exists, "exists");

        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i_;
            while (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) ||
                                     s_[j] == '_')) {
                ++j;
            }
            std::string word = s_.substr(i_, j - i_);
            chars_ += j - i_;
            i_ = j;
            if (word == "forall") return tok(Tok::Forall, word);
            if (word == "exists") return tok(Tok::Exists, word);
            return tok(Tok::Ident, word);
        }

        // Unknown character; report the whole code point.
        std::size_t j = i_ + 1;
        while (j < s_.size() && (static_cast<unsigned char>(s_[j]) & 0xC0) == 0x80) ++j;
        std::string found = s_.substr(i_, j - i_);
        throw ParseError(start, "a token", found);
    }

    const std::string& s_;
    std::size_t i_ = 0;
    std::size_t chars_ = 0;
};

class TokenStream {
public:
    explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    const Token& peek() const { return tokens_[pos_]; }
    Token take() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

    Token expect(Tok type, const char* expected = nullptr) {
        if (peek().type != type) {
            throw ParseError(peek().pos, expected ? expected : token_name(type),
                             peek().text);
        }
        return take();
    }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

// ---- operator syntax -------------------------------------------------------

class OperatorParser {
public:
    explicit OperatorParser(TokenStream& ts) : ts_(ts) {}

    Formula expr() { return parse_equiv(); }

private:
    Formula parse_equiv() {
        Formula left = parse_implies();
        while (ts_.peek().type == Tok::Equiv) {
            ts_.take();
            left = equiv(std::move(left), parse_implies());
        }
        return left;
    }

    Formula parse_implies() {
        Formula left = parse_or();
        if (ts_.peek().type == Tok::Implies) {
            ts_.take();
            return implies(std::move(left), parse_implies());
        }
        return left;
    }

    Formula parse_or() {
        Formula first = parse_and();
        if (ts_.peek().type != Tok::Or) return first;
        std::vector<Formula> parts{std::move(first)};
        while (ts_.peek().type == Tok::Or) {
            ts_.take();
            parts.push_back(parse_and());
        }
        return disj(std::move(parts));
    }

    Formula parse_and() {
        Formula first = parse_unary();
        if (ts_.peek().type != Tok::And) return first;
        std::vector<Formula> parts{std::move(first)};
        while (ts_.peek().type == Tok::And) {
            ts_.take();
            parts.push_back(parse_unary());
        }
        return conj(std::move(parts));
    }

    Formula parse_unary() {
        const Token& t = ts_.peek();
        if (t.type == Tok::Not) {
            ts_.take();
            return neg(parse_unary());
        }
        if (t.type == Tok::Forall || t.type == Tok::Exists) {
            const bool universal = t.type == Tok::Forall;
            ts_.take();
            Token v = ts_.expect(Tok::Ident);
            ts_.expect(Tok::Dot);
            Formula body = expr();  // binds to end of expression
            return universal ? forall(v.text, std::move(body))
                             : exists(v.text, std::move(body));
        }
        return parse_primary();
    }

    Formula parse_primary() {
        const Token& t = ts_.peek();
        if (t.type == Tok::LParen) {
            ts_.take();
            Formula inner = expr();
            ts_.expect(Tok::RParen);
            return inner;
        }
        if (t.type == Tok::Ident) {
            Token name = ts_.take();
            if (ts_.peek().type == Tok::LParen) {
                ts_.take();
                Token arg = ts_.expect(Tok::Ident);
                ts_.expect(Tok::RParen);
                return pred(name.text, arg.text);
            }
            return atom(name.text);
        }
        throw ParseError(t.pos, "a formula", t.text);
    }

    TokenStream& ts_;
};

// ---- constructor syntax ----------------------------------------------------

enum class Ctor { Var, Atom, Pred, Not, And, Or, Implies, Equiv, Forall, Exists };

std::optional<Ctor> lookup_ctor(const std::string& name) {
    if (name == "Var") return Ctor::Var;
    if (name == "Atom") return Ctor::Atom;
    if (name == "Pred") return Ctor::Pred;
    if (name == "Not") return Ctor::Not;
    if (name == "And") return Ctor::And;
    if (name == "Or") return Ctor::Or;
    if (name == "Implies") return Ctor::Implies;
    if (name == "Equiv") return Ctor::Equiv;
    if (name == "Forall") return Ctor::Forall;
    if (name == "Exists") return Ctor::Exists;
    return std::nullopt;
}

class ConstructorParser {
public:
    explicit ConstructorParser(TokenStream& ts) : ts_(ts) {}

    Formula form() {
        Token name = ts_.expect(Tok::Ident, "constructor name");
        auto ctor = lookup_ctor(name.text);
        if (!ctor) throw ParseError(name.pos, "constructor name", name.text);
        ts_.expect(Tok::LParen);
        Formula result = args(*ctor);
        ts_.expect(Tok::RParen);
        return result;
    }

private:
    Formula args(Ctor ctor) {
        switch (ctor) {
            case Ctor::Var: return var(ident());
            case Ctor::Atom: return atom(ident());
            case Ctor::Pred: {
                std::string name = ident();
                ts_.expect(Tok::Comma);
                return pred(std::move(name), ident());
            }
            case Ctor::Not: return neg(form());
            case Ctor::And:
            case Ctor::Or: {
                std::vector<Formula> parts;
                parts.push_back(form());
                ts_.expect(Tok::Comma);
                parts.push_back(form());
                while (ts_.peek().type == Tok::Comma) {
                    ts_.take();
                    parts.push_back(form());
                }
                return ctor == Ctor::And ? conj(std::move(parts)) : disj(std::move(parts));
            }
            case Ctor::Implies:
            case Ctor::Equiv: {
                Formula left = form();
                ts_.expect(Tok::Comma);
                Formula right = form();
                return ctor == Ctor::Implies ? implies(std::move(left), std::move(right))
                                             : equiv(std::move(left), std::move(right));
            }
            case Ctor::Forall:
            case Ctor::Exists: {
                std::string v = ident();
                ts_.expect(Tok::Comma);
                Formula body = form();
                return ctor == Ctor::Forall ? forall(std::move(v), std::move(body))
                                            : exists(std::move(v), std::move(body));
            }
        }
        throw ParseError(ts_.peek().pos, "constructor arguments", ts_.peek().text);
    }

    std::string ident() { return ts_.expect(Tok::Ident).text; }

    TokenStream& ts_;
};

}  // namespace

Formula parse_operator(const std::string& text) {
    TokenStream ts{Lexer(text).run()};
    OperatorParser parser(ts);
    Formula result = parser.expr();
    ts.expect(Tok::End);
    return result;
}

Formula parse_constructor(const std::string& text) {
    TokenStream ts{Lexer(text).run()};
    ConstructorParser parser(ts);
    Formula result = parser.form();
    ts.expect(Tok::End);
    return result;
}

Formula parse_formula(const std::string& text) {
    TokenStream ts{Lexer(text).run()};
    if (ts.peek().type == Tok::Ident && lookup_ctor(ts.peek().text)) {
        Token head = ts.take();
        if (ts.peek().type == Tok::LParen) return parse_constructor(text);
        (void)head;
    }
    return parse_operator(text);
}

}  // namespace la
