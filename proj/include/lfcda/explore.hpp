#ifndef LFCDA_EXPLORE_HPP
#define LFCDA_EXPLORE_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lfcda/rewrite.hpp"

namespace lfcda {

struct SearchConfig {
  int d_max = 4;
  std::optional<Formula> target;
  std::set<std::string> disabled_rules;
  std::optional<std::size_t> max_results;  // cap on recorded states; exceeding it truncates
  std::size_t node_cap = kDefaultNodeCap;
};

/// A chain of rewrites from a start formula. The path label is the minimum
/// of its step labels; one invalid step poisons the whole path to 0.
struct DerivationPath {
  Formula start;
  std::vector<Rewrite> steps;

  int label() const;
  const Formula& final() const { return steps.empty() ? start : steps.back().after; }
};

struct ExplorationStats {
  std::uint64_t nodes_expanded = 0;
  std::uint64_t depth_prunes = 0;       // branches cut by the depth bound
  std::uint64_t exhaustion_prunes = 0;  // states with no unvisited successor
  std::uint64_t duplicate_prunes = 0;   // successors already on the current path
  std::uint64_t result_duplicates = 0;  // formulas re-reached on another path
  bool truncated = false;               // max_results stopped the search
};

struct StateEntry {
  Formula formula;
  DerivationPath path;
};

/// Correct state set s1 (label 1) and erroneous state set s2 (label 0),
/// each deduplicated by canonical key, in first-reached order.
struct ExplorationResult {
  std::vector<StateEntry> s1, s2;
  ExplorationStats stats;
};

/// Bounded depth-first enumeration of the rewrite state space. Visited keys
/// are tracked per path (cycle prevention); recording into s1/s2 is guarded
/// by a global seen-set so each canonical formula appears once.
ExplorationResult explore(const Formula& start, const RuleBase& rb, const SearchConfig& cfg);

/// First derivation reaching target, searched depth-first under increasing
/// depth limits up to cfg.d_max, so shorter derivations are found first.
/// Only label-1 rules participate; error rules exist to label negatives,
/// not to prove. Returns nullopt if no derivation exists within the bound.
std::optional<DerivationPath> prove(const Formula& start, const Formula& target, const RuleBase& rb,
                                    const SearchConfig& cfg);

/// Line-delimited serialization of an exploration result (one JSON record
/// per state, canonical formulas).
std::string serialize_result(const ExplorationResult& res);

}  // namespace lfcda

#endif
