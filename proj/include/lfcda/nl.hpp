#ifndef LFCDA_NL_HPP
#define LFCDA_NL_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "lfcda/formula.hpp"

namespace lfcda {

struct EmptyPhrase : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Lowercases, strips leading/trailing function words (determiners,
/// auxiliaries, expletives, punctuation), collapses whitespace and applies
/// the fixed suffix lemmatizer to every remaining word. Throws EmptyPhrase
/// when nothing is left.
std::string purify_phrase(const std::string& raw);

/// Glossary form of a phrase key: internal light verbs (get, become) are
/// dropped, so "ground get wet" displays as "ground wet".
std::string display_phrase(const std::string& phrase_key);

/// Deterministic suffix lemmatizer: small irregular map, then -ies/-es/-s,
/// -ied/-ed, -ing with consonant undoubling. No external models.
std::string lemmatize_word(const std::string& word);

/// Byte range of a clause in the source sentence.
struct TextSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct ParseOutcome {
  Formula formula;
  std::map<int, TextSpan> spans;  // var_id -> source clause
};

/// Sentence-splitting triggers, tried in declaration order, first match
/// wins. Clause-level negation ("not A", "A is not ...") is detected when a
/// clause is turned into an atom, so it applies to whole sentences and to
/// the clauses of a split alike.
enum class Trigger {
  IfAndOnlyIf,   // "A if and only if B"
  IfThen,        // "if A then B" / "if A, then B"
  IfComma,       // "if A, B"
  ConsequentIf,  // "B if A"
  Unless,        // "A unless B"  ->  ~B -> A
  EitherOr,      // "either A or B"
  Or,            // "A or B"
  And,           // "A and B"
};

struct TriggerLexicon {
  std::vector<Trigger> splits;
  std::vector<std::string> negators;  // matched as " <negator> " or a leading "not "
  static const TriggerLexicon& standard();
};

/// Formalizes one simple sentence against the shared variable table. A
/// sentence with no trigger becomes a bare atom; purification failures are
/// the only error.
ParseOutcome formalize(const std::string& sentence, VarTable& vt,
                       const TriggerLexicon& lex = TriggerLexicon::standard());

}  // namespace lfcda

#endif
