#include "lfcda/pairs.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "json.hpp"
#include "lfcda/semantics.hpp"
#include "lfcda/trace.hpp"

namespace lfcda {

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) out[i] = digits[v & 0xf];
  return out;
}

std::string pair_id(const Formula& a, const Formula& b, int label, const std::string& relation) {
  std::string data = print_formula(a);
  data += '\x1f';
  data += print_formula(b);
  data += '\x1f';
  data += static_cast<char>('0' + label);
  data += '\x1f';
  data += relation;
  return hex64(fnv1a64(data));
}

SamplePair make_pair(int seed_id, const std::string& relation, int label, Formula a, Formula b,
                     std::string derivation) {
  SamplePair p;
  p.id = pair_id(a, b, label, relation);
  p.seed_id = seed_id;
  p.relation = relation;
  p.label = label;
  p.formula_a = std::move(a);
  p.formula_b = std::move(b);
  p.derivation_text = std::move(derivation);
  return p;
}

// uniform in [0, n) from the standard-specified mt19937_64 stream; avoids
// std::uniform_int_distribution, whose mapping is implementation-defined.
std::size_t below(std::mt19937_64& g, std::size_t n) { return static_cast<std::size_t>(g() % n); }

void det_shuffle(std::vector<std::size_t>& v, std::mt19937_64& g) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(g, i)]);
}

// Keeps `keep` elements of the index list, chosen by seeded shuffle, returned
// in ascending order.
std::vector<std::size_t> sample_indices(std::vector<std::size_t> pool, std::size_t keep, std::mt19937_64& g) {
  det_shuffle(pool, g);
  pool.resize(keep);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

std::vector<SamplePair> build_pairs(const ExplorationResult& res, const Formula& start, int seed_id,
                                    std::uint64_t rng_seed, int ratio_pos, int ratio_neg, PairStats* stats) {
  PairStats local;
  PairStats& st = stats ? *stats : local;
  std::vector<SamplePair> out;
  std::string start_key = print_formula(start);

  std::set<std::string> s1_keys;
  for (const auto& e : res.s1) s1_keys.insert(print_formula(e.formula));

  // Equivalence relation: bidirectionally symmetric, both orderings valid.
  for (const auto& e : res.s1) {
    bool equivalence_only = true;
    for (const auto& step : e.path.steps)
      if (step.rule_kind != RuleKind::Equivalence) equivalence_only = false;
    if (!equivalence_only) continue;
    std::string trace = format_path(e.path);
    out.push_back(make_pair(seed_id, "equivalence", 1, start, e.formula, trace));
    out.push_back(make_pair(seed_id, "equivalence", 1, e.formula, start, trace));
  }

  // Implication relation: unidirectional; the swapped ordering is a natural
  // negative once the oracle confirms it really is non-entailed.
  for (const auto& e : res.s1) {
    bool has_implication = false;
    for (const auto& step : e.path.steps)
      if (step.rule_kind == RuleKind::Implication) has_implication = true;
    if (!has_implication) continue;
    std::string trace = format_path(e.path);
    out.push_back(make_pair(seed_id, "implication", 1, start, e.formula, trace));
    if (!entails(e.formula, start))
      out.push_back(make_pair(seed_id, "implication", 0, e.formula, start, trace));
    else
      ++st.dropped_negatives;
  }

  // Combined derivation: states linked along one recorded path form
  // multi-step chains (g, h) with the connecting suffix as evidence. A
  // chain whose suffix used an implication rule is unidirectional, so its
  // swap is a further natural negative.
  std::set<std::pair<std::string, std::string>> chain_seen;
  for (const auto& h : res.s1) {
    std::string h_key = print_formula(h.formula);
    for (std::size_t k = 1; k < h.path.steps.size(); ++k) {
      const Formula& mid = h.path.steps[k - 1].after;
      std::string mid_key = print_formula(mid);
      if (mid_key == start_key || mid_key == h_key || !s1_keys.count(mid_key)) continue;
      if (!chain_seen.emplace(mid_key, h_key).second) continue;
      DerivationPath suffix{mid, {h.path.steps.begin() + static_cast<std::ptrdiff_t>(k), h.path.steps.end()}};
      std::string trace = format_path(suffix);
      out.push_back(make_pair(seed_id, "chain", 1, mid, h.formula, trace));
      bool suffix_implication = false;
      for (const auto& step : suffix.steps)
        if (step.rule_kind == RuleKind::Implication) suffix_implication = true;
      if (!suffix_implication) continue;
      if (!entails(h.formula, mid))
        out.push_back(make_pair(seed_id, "chain", 0, h.formula, mid, trace));
      else
        ++st.dropped_negatives;
    }
  }

  // Error-set states become corrupted negatives, paired with the start and
  // with every correct state their path ran through, unless an error rule
  // accidentally produced a valid conclusion.
  std::set<std::pair<std::string, std::string>> corrupt_seen;
  for (const auto& e : res.s2) {
    std::string e_key = print_formula(e.formula);
    if (entails(start, e.formula)) {
      ++st.dropped_negatives;
    } else if (corrupt_seen.emplace(start_key, e_key).second) {
      out.push_back(make_pair(seed_id, "corrupted", 0, start, e.formula, format_path(e.path)));
    }
    for (std::size_t k = 1; k < e.path.steps.size(); ++k) {
      const Formula& mid = e.path.steps[k - 1].after;
      std::string mid_key = print_formula(mid);
      if (mid_key == start_key || mid_key == e_key || !s1_keys.count(mid_key)) continue;
      if (!corrupt_seen.emplace(mid_key, e_key).second) continue;
      if (entails(mid, e.formula)) {
        ++st.dropped_negatives;
        continue;
      }
      DerivationPath suffix{mid, {e.path.steps.begin() + static_cast<std::ptrdiff_t>(k), e.path.steps.end()}};
      out.push_back(make_pair(seed_id, "corrupted", 0, mid, e.formula, format_path(suffix)));
    }
  }

  std::vector<std::size_t> pos_idx, neg_idx;
  for (std::size_t i = 0; i < out.size(); ++i) (out[i].label == 1 ? pos_idx : neg_idx).push_back(i);
  st.positives = pos_idx.size();
  st.negatives = neg_idx.size();

  std::size_t units = std::min(pos_idx.size() / static_cast<std::size_t>(ratio_pos),
                               neg_idx.size() / static_cast<std::size_t>(ratio_neg));
  std::size_t keep_pos = units * static_cast<std::size_t>(ratio_pos);
  std::size_t keep_neg = units * static_cast<std::size_t>(ratio_neg);
  st.balanced_away = (pos_idx.size() - keep_pos) + (neg_idx.size() - keep_neg);

  std::mt19937_64 rng(rng_seed);
  std::vector<bool> keep(out.size(), false);
  for (std::size_t i : sample_indices(std::move(pos_idx), keep_pos, rng)) keep[i] = true;
  for (std::size_t i : sample_indices(std::move(neg_idx), keep_neg, rng)) keep[i] = true;

  std::vector<SamplePair> kept;
  kept.reserve(keep_pos + keep_neg);
  for (std::size_t i = 0; i < out.size(); ++i)
    if (keep[i]) kept.push_back(std::move(out[i]));
  return kept;
}

namespace {

struct Group {
  std::vector<std::size_t> members;
  std::size_t pos = 0, neg = 0;
};

struct Bucket {
  std::size_t pos_left = 0, neg_left = 0;
  std::vector<std::size_t> picked;
};

// Largest-remainder apportionment of `total` into parts proportional to
// weights, capped per part.
std::array<std::size_t, 3> apportion(const std::array<std::size_t, 3>& caps, std::size_t have,
                                     const std::array<std::size_t, 3>& totals) {
  std::size_t grand = totals[0] + totals[1] + totals[2];
  std::array<std::size_t, 3> out{0, 0, 0};
  if (grand == 0) return out;
  std::array<double, 3> ideal{};
  for (int i = 0; i < 3; ++i) ideal[i] = static_cast<double>(totals[i]) * static_cast<double>(have) / static_cast<double>(grand);
  std::size_t used = 0;
  for (int i = 0; i < 3; ++i) {
    out[i] = std::min(caps[i], static_cast<std::size_t>(ideal[i]));
    used += out[i];
  }
  // hand out the remainder by largest fractional part, never past a cap
  while (true) {
    int best = -1;
    double best_frac = -1.0;
    for (int i = 0; i < 3; ++i) {
      if (out[i] >= caps[i]) continue;
      double frac = ideal[i] - static_cast<double>(out[i]);
      if (frac > best_frac) {
        best_frac = frac;
        best = i;
      }
    }
    if (best < 0 || used >= have || best_frac <= 0.0) break;
    ++out[best];
    ++used;
  }
  return out;
}

}  // namespace

DatasetSplits split_dataset(const std::vector<SamplePair>& pairs, const std::array<std::size_t, 3>& counts,
                            std::uint64_t seed) {
  std::size_t want = counts[0] + counts[1] + counts[2];
  if (want > pairs.size())
    throw InsufficientPairs("requested " + std::to_string(want) + " pairs but only " +
                            std::to_string(pairs.size()) + " available");
  if (want == 0) return {};

  std::size_t total_pos = 0, total_neg = 0;
  for (const auto& p : pairs) (p.label == 1 ? total_pos : total_neg)++;

  // Per-split, per-label targets proportional to the input's label mix, so a
  // balanced input stays balanced within every split.
  std::size_t pos_budget = (want * total_pos + pairs.size() / 2) / pairs.size();
  if (want > pos_budget + total_neg) pos_budget = want - total_neg;  // not enough negatives
  if (pos_budget > total_pos) pos_budget = total_pos;
  std::array<std::size_t, 3> pos_target = apportion(counts, pos_budget, counts);
  std::array<std::size_t, 3> neg_target{};
  for (int i = 0; i < 3; ++i) {
    if (pos_target[i] > counts[i]) pos_target[i] = counts[i];
    neg_target[i] = counts[i] - pos_target[i];
  }
  std::size_t neg_want = neg_target[0] + neg_target[1] + neg_target[2];
  if (pos_target[0] + pos_target[1] + pos_target[2] > total_pos || neg_want > total_neg)
    throw InsufficientPairs("label mix cannot satisfy the requested split sizes");

  // Group by unordered formula pair so no pair of texts straddles splits.
  std::map<std::string, std::size_t> group_of;
  std::vector<Group> groups;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    std::string a = print_formula(pairs[i].formula_a);
    std::string b = print_formula(pairs[i].formula_b);
    std::string key = a <= b ? a + '\x1f' + b : b + '\x1f' + a;
    auto [it, fresh] = group_of.emplace(key, groups.size());
    if (fresh) groups.push_back({});
    Group& g = groups[it->second];
    g.members.push_back(i);
    (pairs[i].label == 1 ? g.pos : g.neg)++;
  }

  std::vector<std::size_t> order(groups.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng() % i]);

  std::array<Bucket, 3> buckets;
  for (int i = 0; i < 3; ++i) buckets[i] = {pos_target[i], neg_target[i], {}};

  for (std::size_t gi : order) {
    const Group& g = groups[gi];
    int best = -1;
    std::size_t best_room = 0;
    for (int i = 0; i < 3; ++i) {
      if (g.pos > buckets[i].pos_left || g.neg > buckets[i].neg_left) continue;
      std::size_t room = buckets[i].pos_left + buckets[i].neg_left;
      if (best < 0 || room > best_room) {
        best = i;
        best_room = room;
      }
    }
    if (best < 0) continue;  // leftover group, dropped
    buckets[best].pos_left -= g.pos;
    buckets[best].neg_left -= g.neg;
    for (std::size_t m : g.members) buckets[best].picked.push_back(m);
  }

  for (int i = 0; i < 3; ++i)
    if (buckets[i].pos_left + buckets[i].neg_left > 0)
      throw InsufficientPairs("could not fill split " + std::to_string(i) + "; short by " +
                              std::to_string(buckets[i].pos_left + buckets[i].neg_left) + " pairs");

  DatasetSplits out;
  auto gather = [&](Bucket& b) {
    std::sort(b.picked.begin(), b.picked.end());
    std::vector<SamplePair> v;
    v.reserve(b.picked.size());
    for (std::size_t i : b.picked) v.push_back(pairs[i]);
    return v;
  };
  out.train = gather(buckets[0]);
  out.dev = gather(buckets[1]);
  out.test = gather(buckets[2]);
  return out;
}

std::string symbolic_record(const SamplePair& p) {
  nlohmann::ordered_json rec;
  rec["id"] = p.id;
  rec["seed_id"] = p.seed_id;
  rec["relation"] = p.relation;
  rec["label"] = p.label;
  rec["formula_a"] = print_formula(p.formula_a);
  rec["formula_b"] = print_formula(p.formula_b);
  rec["derivation_text"] = p.derivation_text;
  return rec.dump();
}

DatasetSplits split_dataset(const std::vector<SamplePair>& pairs, const std::array<double, 3>& fractions,
                            std::uint64_t seed) {
  double sum = fractions[0] + fractions[1] + fractions[2];
  if (sum < 0.999 || sum > 1.001) throw InsufficientPairs("split fractions must sum to 1");
  std::size_t n = pairs.size();
  std::array<std::size_t, 3> counts{};
  std::size_t used = 0;
  std::array<double, 3> rem{};
  for (int i = 0; i < 3; ++i) {
    double ideal = fractions[i] * static_cast<double>(n);
    counts[i] = static_cast<std::size_t>(ideal);
    rem[i] = ideal - static_cast<double>(counts[i]);
    used += counts[i];
  }
  while (used < n) {
    int best = 0;
    for (int i = 1; i < 3; ++i)
      if (rem[i] > rem[best]) best = i;
    ++counts[best];
    rem[best] = -1.0;
    ++used;
  }
  return split_dataset(pairs, counts, seed);
}

}  // namespace lfcda
