#ifndef LA_CATEGORICAL_HPP
#define LA_CATEGORICAL_HPP

#include <string>
#include <vector>

#include "la/formula.hpp"
#include "la/model.hpp"

namespace la {

// The four categorical proposition types. A and E are universal, I and O
// particular; A and I affirmative, E and O negative.
enum class CategoricalForm : char { A = 'A', E = 'E', I = 'I', O = 'O' };

// A categorical proposition over subject/predicate terms plus its asserted
// truth value, e.g. "all S are P" asserted false. The truth flag is what
// makes the square-of-opposition rules total functions on statements.
struct CategoricalStatement {
    CategoricalForm form;
    std::string subject;
    std::string predicate;
    bool truth = true;

    bool operator==(const CategoricalStatement&) const = default;
};

// Throws Error{"InvalidStatement"} when subject == predicate or either term
// is not a valid identifier.
CategoricalStatement make_statement(CategoricalForm form, std::string subject,
                                    std::string predicate, bool truth);

// Wire form "A(S,P)=true".
std::string serialize(const CategoricalStatement& s);
CategoricalStatement parse_statement(const std::string& text);
bool looks_like_statement(const std::string& text);

// Standard quantified readings, ignoring the truth flag:
//   A -> forall x. S(x) -> P(x)      E -> forall x. S(x) -> ~P(x)
//   I -> exists x. S(x) & P(x)       O -> exists x. S(x) & ~P(x)
Formula to_quantified(const CategoricalStatement& s);

// Whether m satisfies the statement including its truth flag, i.e. the
// quantified reading evaluates to s.truth.
bool categorical_holds(const CategoricalStatement& s, const FiniteModel& m);

// Every model with domain size 1..max_domain and every extension assignment
// for the given predicates, in deterministic order (size ascending, then
// extension bits counting up, last predicate fastest). With
// existential_import set, only models where import_term is nonempty.
// Throws Error{"DomainTooLarge"} when max_domain is outside 1..4.
std::vector<FiniteModel> enumerate_models(int max_domain,
                                          const std::vector<std::string>& predicates,
                                          bool existential_import,
                                          const std::string& import_term);

}  // namespace la

#endif
