#ifndef LFCDA_REWRITE_HPP
#define LFCDA_REWRITE_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lfcda/formula.hpp"
#include "lfcda/rules.hpp"

namespace lfcda {

/// Metavariable name -> bound subformula. Rebinding requires structural
/// equality with the prior binding (non-linear matching).
using Bindings = std::map<std::string, Formula>;

struct UnboundMetavariable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Orientation { Forward, Backward };

const char* orientation_name(Orientation o);

/// One legal single-step rewrite of a whole formula.
struct Rewrite {
  std::string rule_id;
  std::string rule_name;
  RuleKind rule_kind = RuleKind::Equivalence;
  Orientation orientation = Orientation::Forward;
  Position position;
  Formula before, after;          // whole formulas
  Formula sub_before, sub_after;  // the replaced subterm and its image
  int step_label = 1;             // the rule's label
};

/// Bindings making instantiate(pattern, b) == f, or nullopt.
std::optional<Bindings> match_pattern(const Formula& pattern, const Formula& f);

/// Pattern with metavariables substituted; throws UnboundMetavariable if one
/// has no binding.
Formula instantiate(const Formula& pattern, const Bindings& b);

/// Default size cap on rewritten formulas; growing rewrites past it are
/// suppressed.
constexpr std::size_t kDefaultNodeCap = 64;

/// All legal single-step rewrites of f, ordered by preorder position, then
/// rule declaration index, then forward before backward. Equivalence rules
/// apply at every position in both orientations; implication rules (any
/// label) apply forward at the root only. When both orientations of a rule
/// at one position yield the same formula (symmetric schemas such as
/// commutativity) only the forward rewrite is kept; duplicates across rules
/// and positions are retained — deduplication is the explorer's job.
std::vector<Rewrite> applicable_rewrites(const Formula& f, const RuleBase& rb,
                                         std::size_t node_cap = kDefaultNodeCap);

}  // namespace lfcda

#endif
