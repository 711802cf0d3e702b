#include "lfcda/nl.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace lfcda {

namespace {

const std::set<std::string>& stoplist() {
  static const std::set<std::string> words = {
      // determiners
      "a", "an", "the", "this", "that", "these", "those", "some", "any", "every", "each",
      // auxiliaries and copulas
      "is", "are", "was", "were", "be", "been", "being", "am", "do", "does", "did", "will",
      "would", "shall", "should", "can", "could", "may", "might", "must", "has", "have", "had",
      // expletives and connective residue
      "it", "there", "then",
  };
  return words;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool ends_with(const std::string& s, const char* suffix) {
  std::string_view sv = suffix;
  return s.size() >= sv.size() && s.compare(s.size() - sv.size(), sv.size(), sv) == 0;
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

// Undoubles a trailing doubled consonant left by -ed/-ing stripping
// (stopped -> stop) while leaving ll/ss/ff, which commonly end base words.
void undouble(std::string& s) {
  std::size_t n = s.size();
  if (n < 3) return;
  char c = s[n - 1];
  if (s[n - 2] != c || is_vowel(c) || c == 'l' || c == 's' || c == 'f') return;
  s.pop_back();
}

}  // namespace

std::string lemmatize_word(const std::string& word) {
  static const std::map<std::string, std::string> irregular = {
      {"has", "have"},   {"had", "have"},     {"does", "do"},   {"did", "do"},
      {"goes", "go"},    {"went", "go"},      {"going", "go"},  {"gone", "go"},
      {"got", "get"},    {"gotten", "get"},   {"leaves", "leaf"}, {"fell", "fall"},
      {"blew", "blow"},  {"rang", "ring"},    {"ran", "run"},   {"came", "come"},
      {"shone", "shine"}, {"broke", "break"}, {"froze", "freeze"}, {"children", "child"},
      {"men", "man"},    {"women", "woman"},  {"feet", "foot"}, {"mice", "mouse"},
  };
  auto it = irregular.find(word);
  if (it != irregular.end()) return it->second;

  std::string w = word;
  if (ends_with(w, "ies") && w.size() >= 5) {
    w.replace(w.size() - 3, 3, "y");
  } else if (ends_with(w, "sses") || ends_with(w, "shes") || ends_with(w, "ches") ||
             ends_with(w, "xes") || ends_with(w, "zes") || ends_with(w, "oes")) {
    w.erase(w.size() - 2);
  } else if (ends_with(w, "ss") || ends_with(w, "us") || ends_with(w, "is")) {
    // keep
  } else if (ends_with(w, "s") && w.size() >= 3) {
    w.pop_back();
  } else if (ends_with(w, "ied") && w.size() >= 5) {
    w.replace(w.size() - 3, 3, "y");
  } else if (ends_with(w, "ed") && w.size() >= 4) {
    w.erase(w.size() - 2);
    undouble(w);
  } else if (ends_with(w, "ing") && w.size() >= 6) {
    w.erase(w.size() - 3);
    undouble(w);
  }
  return w;
}

std::string purify_phrase(const std::string& raw) {
  std::string text = lower(raw);
  for (char& c : text)
    if (std::ispunct(static_cast<unsigned char>(c))) c = ' ';

  std::vector<std::string> words;
  std::stringstream ss(text);
  std::string w;
  while (ss >> w) words.push_back(w);

  std::size_t b = 0, e = words.size();
  while (b < e && stoplist().count(words[b])) ++b;
  while (e > b && stoplist().count(words[e - 1])) --e;
  if (b == e) throw EmptyPhrase("phrase '" + raw + "' is empty after purification");

  std::string key;
  for (std::size_t i = b; i < e; ++i) {
    if (!key.empty()) key += ' ';
    key += lemmatize_word(words[i]);
  }
  return key;
}

std::string display_phrase(const std::string& phrase_key) {
  static const std::set<std::string> light = {"get", "become"};
  std::stringstream ss(phrase_key);
  std::string w, out;
  while (ss >> w) {
    if (light.count(w)) continue;
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out.empty() ? phrase_key : out;
}

const TriggerLexicon& TriggerLexicon::standard() {
  static const TriggerLexicon lex = {
      {Trigger::IfAndOnlyIf, Trigger::IfThen, Trigger::IfComma, Trigger::ConsequentIf,
       Trigger::Unless, Trigger::EitherOr, Trigger::Or, Trigger::And},
      {"is not", "are not", "was not", "were not", "does not", "do not", "did not",
       "will not", "would not", "cannot", "can not", "must not", "is no", "not"},
  };
  return lex;
}

namespace {

struct Clause {
  std::size_t begin, end;  // byte range in the trimmed sentence
};

struct Splitter {
  const std::string& low;  // lowercased sentence

  // Finds "sep" inside [from, end); returns npos if absent.
  std::size_t find(const std::string& sep, std::size_t from = 0) const { return low.find(sep, from); }

  bool starts_with(const std::string& prefix) const { return low.rfind(prefix, 0) == 0; }
};

// Clause text with surrounding whitespace removed.
Clause trim_clause(const std::string& s, std::size_t b, std::size_t e) {
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return {b, e};
}

}  // namespace

ParseOutcome formalize(const std::string& sentence, VarTable& vt, const TriggerLexicon& lex) {
  // Trim and drop terminal punctuation before matching.
  std::string s = sentence;
  while (!s.empty() && (std::isspace(static_cast<unsigned char>(s.back())) || s.back() == '.' ||
                        s.back() == '!' || s.back() == '?'))
    s.pop_back();
  std::size_t lead = 0;
  while (lead < s.size() && std::isspace(static_cast<unsigned char>(s[lead]))) ++lead;
  s.erase(0, lead);
  if (s.empty()) throw EmptyPhrase("sentence is empty");

  std::string low = lower(s);
  Splitter sp{low};
  ParseOutcome out;

  // Turns a clause into an atom, or a negated atom when a negator matches.
  auto clause_atom = [&](Clause c) -> Formula {
    Clause t = trim_clause(s, c.begin, c.end);
    std::string clause_low = low.substr(t.begin, t.end - t.begin);
    bool negated = false;
    if (clause_low.rfind("not ", 0) == 0) {
      negated = true;
      clause_low.erase(0, 4);
    } else {
      for (const auto& neg : lex.negators) {
        std::size_t at = clause_low.find(" " + neg + " ");
        if (at != std::string::npos) {
          negated = true;
          clause_low.erase(at, neg.size() + 1);  // keep one separating space
          break;
        }
      }
    }
    std::string key = purify_phrase(clause_low);
    int id = vt.map_phrase(key);
    if (!out.spans.count(id)) out.spans[id] = {t.begin, t.end};
    Formula atom = Formula::atom(VarTable::var_name(id));
    return negated ? Formula::negation(atom) : atom;
  };

  // Operands are built left to right in formula order so variable ids
  // allocate deterministically.
  auto binary = [&](Trigger kind, Clause a, Clause b) -> Formula {
    if (kind == Trigger::Unless) {  // "A unless B" reads as: if B does not hold, A
      Formula fb = clause_atom(b);
      Formula fa = clause_atom(a);
      return Formula::implication(Formula::negation(std::move(fb)), std::move(fa));
    }
    Formula fa = clause_atom(a);
    Formula fb = clause_atom(b);
    switch (kind) {
      case Trigger::IfAndOnlyIf: return Formula::biconditional(std::move(fa), std::move(fb));
      case Trigger::EitherOr:
      case Trigger::Or: return Formula::disjunction(std::move(fa), std::move(fb));
      case Trigger::And: return Formula::conjunction(std::move(fa), std::move(fb));
      default: return Formula::implication(std::move(fa), std::move(fb));  // if-variants
    }
  };

  for (Trigger kind : lex.splits) {
    switch (kind) {
      case Trigger::IfAndOnlyIf: {
        std::size_t at = sp.find(" if and only if ");
        if (at == std::string::npos) break;
        out.formula = binary(kind, {0, at}, {at + 16, s.size()});
        return out;
      }
      case Trigger::IfThen: {
        if (!sp.starts_with("if ")) break;
        std::size_t at = sp.find(", then ");
        std::size_t blen = 7;
        if (at == std::string::npos) {
          at = sp.find(" then ");
          blen = 6;
        }
        if (at == std::string::npos) break;
        out.formula = binary(kind, {3, at}, {at + blen, s.size()});
        return out;
      }
      case Trigger::IfComma: {
        if (!sp.starts_with("if ")) break;
        std::size_t at = sp.find(",");
        if (at == std::string::npos) break;
        out.formula = binary(kind, {3, at}, {at + 1, s.size()});
        return out;
      }
      case Trigger::ConsequentIf: {
        std::size_t at = sp.find(" if ");
        if (at == std::string::npos) break;
        out.formula = binary(kind, {at + 4, s.size()}, {0, at});  // antecedent after "if"
        return out;
      }
      case Trigger::Unless: {
        std::size_t at = sp.find(" unless ");
        if (at == std::string::npos) break;
        out.formula = binary(kind, {0, at}, {at + 8, s.size()});
        return out;
      }
      case Trigger::EitherOr: {
        if (!sp.starts_with("either ")) break;
        std::size_t at = sp.find(" or ", 7);
        if (at == std::string::npos) break;
        out.formula = binary(kind, {7, at}, {at + 4, s.size()});
        return out;
      }
      case Trigger::Or: {
        std::size_t at = sp.find(" or ");
        if (at == std::string::npos) break;
        out.formula = binary(kind, {0, at}, {at + 4, s.size()});
        return out;
      }
      case Trigger::And: {
        std::size_t at = sp.find(" and ");
        if (at == std::string::npos) break;
        out.formula = binary(kind, {0, at}, {at + 5, s.size()});
        return out;
      }
    }
  }

  // No trigger: the whole sentence is one (possibly negated) atom.
  out.formula = clause_atom({0, s.size()});
  return out;
}

}  // namespace lfcda
