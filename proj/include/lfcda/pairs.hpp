#ifndef LFCDA_PAIRS_HPP
#define LFCDA_PAIRS_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lfcda/explore.hpp"

namespace lfcda {

/// One contrastive dataset record before verbalization. The id is a content
/// hash of (canonical a, canonical b, label, relation), stable across runs.
struct SamplePair {
  std::string id;
  int seed_id = 0;
  std::string relation;  // equivalence | implication | chain | corrupted
  int label = 1;
  Formula formula_a, formula_b;
  std::string derivation_text;
};

struct PairStats {
  std::size_t positives = 0;          // before balancing
  std::size_t negatives = 0;          // before balancing
  std::size_t dropped_negatives = 0;  // candidates the oracle found entailed anyway
  std::size_t balanced_away = 0;
};

/// 64-bit FNV-1a, the content hash behind pair ids.
std::uint64_t fnv1a64(std::string_view data);

/// Builds labeled pairs from an exploration of `start`:
///   equivalence  — states reached by equivalence-only paths, both orderings, label 1;
///   implication  — states whose path used an implication rule: forward label 1,
///                  swapped label 0 once the oracle confirms non-entailment;
///   chain        — state pairs (g, h) where h's recorded path passes through g, label 1;
///   corrupted    — error-set states, label 0 after oracle confirmation.
/// The result is balanced to ratio_pos:ratio_neg by seeded downsampling of
/// the larger side; order is deterministic.
std::vector<SamplePair> build_pairs(const ExplorationResult& res, const Formula& start, int seed_id,
                                    std::uint64_t rng_seed, int ratio_pos = 1, int ratio_neg = 1,
                                    PairStats* stats = nullptr);

struct DatasetSplits {
  std::vector<SamplePair> train, dev, test;
};

struct InsufficientPairs : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Seeded disjoint partition into train/dev/test of the requested sizes.
/// Pairs sharing an unordered formula pair never straddle splits, and each
/// split preserves the input's label balance (exact 1:1 within ±1 when the
/// input is balanced). Throws InsufficientPairs when the targets cannot be
/// met.
DatasetSplits split_dataset(const std::vector<SamplePair>& pairs, const std::array<std::size_t, 3>& counts,
                            std::uint64_t seed);

/// Fraction front-end: counts are derived by largest remainder from
/// fractions summing to 1.
DatasetSplits split_dataset(const std::vector<SamplePair>& pairs, const std::array<double, 3>& fractions,
                            std::uint64_t seed);

/// One pre-verbalization JSONL record: {id, seed_id, relation, label,
/// formula_a, formula_b, derivation_text}, formulas in canonical syntax.
std::string symbolic_record(const SamplePair& p);

}  // namespace lfcda

#endif
