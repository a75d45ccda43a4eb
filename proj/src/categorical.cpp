#include "la/categorical.hpp"

#include <cctype>
#include <cstdint>

#include "la/error.hpp"

namespace la {

CategoricalStatement make_statement(CategoricalForm form, std::string subject,
                                    std::string predicate, bool truth) {
    if (!valid_identifier(subject) || !valid_identifier(predicate)) {
        throw Error("InvalidStatement", "terms must be valid identifiers");
    }
    if (subject == predicate) {
        throw Error("InvalidStatement",
                    "subject and predicate must be distinct terms");
    }
    return {form, std::move(subject), std::move(predicate), truth};
}

std::string serialize(const CategoricalStatement& s) {
    std::string out(1, static_cast<char>(s.form));
    out += '(';
    out += s.subject;
    out += ',';
    out += s.predicate;
    out += ')';
    out += s.truth ? "=true" : "=false";
    return out;
}

namespace {

std::size_t skip_ws(const std::string& text, std::size_t i) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    return i;
}

std::string read_identifier(const std::string& text, std::size_t& i) {
    std::size_t start = i;
    while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) ||
                               text[i] == '_')) {
        ++i;
    }
    return text.substr(start, i - start);
}

[[noreturn]] void fail(std::size_t pos, const char* expected,
                       const std::string& text, std::size_t i) {
    std::string found = i < text.size() ? std::string(1, text[i]) : "end of input";
    throw ParseError(pos, expected, found);
}

}  // namespace

bool looks_like_statement(const std::string& text) {
    std::size_t i = skip_ws(text, 0);
    if (i >= text.size()) return false;
    const char c = text[i];
    if (c != 'A' && c != 'E' && c != 'I' && c != 'O') return false;
    i = skip_ws(text, i + 1);
    return i < text.size() && text[i] == '(' && text.find('=') != std::string::npos;
}

CategoricalStatement parse_statement(const std::string& text) {
    std::size_t i = skip_ws(text, 0);
    if (i >= text.size() || (text[i] != 'A' && text[i] != 'E' && text[i] != 'I' &&
                             text[i] != 'O')) {
        fail(i, "one of A, E, I, O", text, i);
    }
    const auto form = static_cast<CategoricalForm>(text[i]);
    i = skip_ws(text, i + 1);
    if (i >= text.size() || text[i] != '(') fail(i, "'('", text, i);
    i = skip_ws(text, i + 1);
    std::string subject = read_identifier(text, i);
    i = skip_ws(text, i);
    if (i >= text.size() || text[i] != ',') fail(i, "','", text, i);
    i = skip_ws(text, i + 1);
    std::string predicate = read_identifier(text, i);
    i = skip_ws(text, i);
    if (i >= text.size() || text[i] != ')') fail(i, "')'", text, i);
    i = skip_ws(text, i + 1);
    if (i >= text.size() || text[i] != '=') fail(i, "'='", text, i);
    i = skip_ws(text, i + 1);
    bool truth;
    if (text.compare(i, 4, "true") == 0) {
        truth = true;
        i += 4;
    } else if (text.compare(i, 5, "false") == 0) {
        truth = false;
        i += 5;
    } else {
        fail(i, "'true' or 'false'", text, i);
    }
    i = skip_ws(text, i);
    if (i != text.size()) fail(i, "end of input", text, i);
    return make_statement(form, std::move(subject), std::move(predicate), truth);
}

Formula to_quantified(const CategoricalStatement& s) {
    const Formula subj = pred(s.subject, "x");
    const Formula pr = pred(s.predicate, "x");
    switch (s.form) {
        case CategoricalForm::A:
            return forall("x", implies(subj, pr));
        case CategoricalForm::E:
            return forall("x", implies(subj, neg(pr)));
        case CategoricalForm::I:
            return exists("x", conj({subj, pr}));
        case CategoricalForm::O:
            return exists("x", conj({subj, neg(pr)}));
    }
    throw Error("InvalidStatement", "unknown categorical form");
}

bool categorical_holds(const CategoricalStatement& s, const FiniteModel& m) {
    return eval_finite_model(to_quantified(s), m) == s.truth;
}

std::vector<FiniteModel> enumerate_models(int max_domain,
                                          const std::vector<std::string>& predicates,
                                          bool existential_import,
                                          const std::string& import_term) {
    if (max_domain < 1 || max_domain > 4) {
        throw Error("DomainTooLarge", "max_domain must be within 1..4, got " +
                                          std::to_string(max_domain));
    }
    std::vector<FiniteModel> models;
    for (int size = 1; size <= max_domain; ++size) {
        const std::uint32_t subsets = 1u << size;
        std::uint64_t assignments = 1;
        for (std::size_t k = 0; k < predicates.size(); ++k) assignments *= subsets;
        for (std::uint64_t code = 0; code < assignments; ++code) {
            FiniteModel m;
            m.domain_size = size;
            std::uint64_t rest = code;
            // Last predicate varies fastest.
            for (auto it = predicates.rbegin(); it != predicates.rend(); ++it) {
                m.extensions[*it] = static_cast<std::uint32_t>(rest % subsets);
                rest /= subsets;
            }
            if (existential_import) {
                auto it = m.extensions.find(import_term);
                if (it == m.extensions.end() || it->second == 0) continue;
            }
            models.push_back(std::move(m));
        }
    }
    return models;
}

}  // namespace la
