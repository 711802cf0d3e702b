#ifndef LFCDA_RULES_HPP
#define LFCDA_RULES_HPP

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "lfcda/formula.hpp"

namespace lfcda {

/// A pattern is a formula whose single-uppercase-letter atoms (X, Y, Z, ...)
/// are metavariables matching arbitrary subformulas. A metavariable bound
/// twice must bind structurally equal subtrees.
bool is_metavariable(const Formula& f);
std::set<std::string> metavariables(const Formula& pattern);

enum class RuleKind { Equivalence, Implication };

struct RewriteRule {
  std::string id;    // stable, e.g. "E8"
  std::string name;  // display, e.g. "MaterialImplication"
  RuleKind kind;
  int label;         // 1 correct, 0 deliberately invalid
  Formula lhs, rhs;
};

struct RuleFileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Ordered, immutable-after-construction rule library with an enable mask.
class RuleBase {
 public:
  RuleBase() = default;
  explicit RuleBase(std::vector<RewriteRule> rules);

  const std::vector<RewriteRule>& rules() const { return rules_; }
  std::size_t size() const { return rules_.size(); }

  const RewriteRule* find(const std::string& id) const;

  void disable(const std::string& id);
  void enable(const std::string& id);
  bool enabled(std::size_t index) const { return enabled_[index]; }

  /// Sub-base containing the given ids, in the order given.
  RuleBase subset(const std::vector<std::string>& ids) const;

 private:
  std::vector<RewriteRule> rules_;
  std::vector<bool> enabled_;
};

/// The fixed builtin library: 20 equivalences (E1..E20), 6 valid
/// implications (I1..I6) and 4 deliberately invalid implications (F1..F4).
const RuleBase& builtin_rules();

/// Loads a pipe-separated rule file: id | name | kind | label | lhs | rhs,
/// one rule per line, '#' comments. Rejects duplicate ids and right-hand
/// metavariables absent from the left-hand side.
RuleBase load_rules(const std::string& path);

struct RuleVerdict {
  std::string id;
  int declared_label;
  bool oracle_valid;  // truth-table verdict for the schema
  bool agree;         // declared label matches the verdict
};

struct ValidationReport {
  std::vector<RuleVerdict> verdicts;
  bool ok = true;  // all rules agree
};

/// Audits every rule against the truth-table oracle. Disagreements are
/// reported, not thrown; declared labels stay authoritative at runtime.
ValidationReport validate_rules(const RuleBase& rb);

}  // namespace lfcda

#endif
