#include "lfcda/explore.hpp"

#include <algorithm>

#include "json.hpp"

namespace lfcda {

int DerivationPath::label() const {
  int l = 1;
  for (const auto& s : steps) l = std::min(l, s.step_label);
  return l;
}

namespace {

RuleBase effective_rules(const RuleBase& rb, const SearchConfig& cfg, bool proving) {
  std::vector<RewriteRule> out;
  for (std::size_t i = 0; i < rb.size(); ++i) {
    if (!rb.enabled(i)) continue;
    const RewriteRule& r = rb.rules()[i];
    if (cfg.disabled_rules.count(r.id)) continue;
    if (proving && r.label == 0) continue;
    out.push_back(r);
  }
  return RuleBase(std::move(out));
}

struct Explorer {
  const RuleBase& rules;
  const SearchConfig& cfg;
  ExplorationResult res;
  std::set<std::string> path_visited;  // canonical keys on the current path
  std::set<std::string> recorded;      // canonical keys already in s1 or s2
  std::vector<Rewrite> path;           // steps from the start to the current state
  Formula start;

  bool at_capacity() const {
    return cfg.max_results && res.s1.size() + res.s2.size() >= *cfg.max_results;
  }

  // Depth-first expansion; label is min over the steps taken so far.
  void expand(const Formula& s, int depth, int label) {
    if (depth >= cfg.d_max) {
      ++res.stats.depth_prunes;
      return;
    }
    ++res.stats.nodes_expanded;
    std::vector<Rewrite> successors = applicable_rewrites(s, rules, cfg.node_cap);
    bool any_new = false;
    for (Rewrite& step : successors) {
      if (at_capacity()) {
        res.stats.truncated = true;
        return;
      }
      std::string key = print_formula(step.after);
      if (path_visited.count(key)) {
        ++res.stats.duplicate_prunes;
        continue;
      }
      any_new = true;
      int next_label = std::min(label, step.step_label);
      Formula after = step.after;
      path.push_back(std::move(step));
      if (recorded.insert(key).second) {
        StateEntry entry{after, DerivationPath{start, path}};
        (next_label == 1 ? res.s1 : res.s2).push_back(std::move(entry));
      } else {
        ++res.stats.result_duplicates;
      }
      path_visited.insert(key);
      expand(after, depth + 1, next_label);
      path_visited.erase(key);
      path.pop_back();
    }
    if (!any_new) ++res.stats.exhaustion_prunes;
  }
};

}  // namespace

ExplorationResult explore(const Formula& start, const RuleBase& rb, const SearchConfig& cfg) {
  RuleBase rules = effective_rules(rb, cfg, false);
  Explorer ex{rules, cfg, {}, {}, {}, {}, start};
  ex.path_visited.insert(print_formula(start));
  ex.expand(start, 0, 1);
  return std::move(ex.res);
}

namespace {

struct Prover {
  const RuleBase& rules;
  const SearchConfig& cfg;
  std::string target_key;
  std::set<std::string> path_visited;
  std::vector<Rewrite> path;

  bool dfs(const Formula& s, int depth, int limit) {
    if (depth >= limit) return false;
    for (Rewrite& step : applicable_rewrites(s, rules, cfg.node_cap)) {
      std::string key = print_formula(step.after);
      if (path_visited.count(key)) continue;
      Formula after = step.after;
      path.push_back(std::move(step));
      if (key == target_key) return true;
      path_visited.insert(key);
      if (dfs(after, depth + 1, limit)) return true;
      path_visited.erase(key);
      path.pop_back();
    }
    return false;
  }
};

}  // namespace

std::optional<DerivationPath> prove(const Formula& start, const Formula& target, const RuleBase& rb,
                                    const SearchConfig& cfg) {
  std::string start_key = print_formula(start);
  std::string target_key = print_formula(target);
  if (start_key == target_key) return DerivationPath{start, {}};
  RuleBase proving_rules = effective_rules(rb, cfg, true);
  // Iterative deepening keeps the leftmost-first expansion order of each
  // depth-limited pass while finding short derivations before long ones.
  for (int limit = 1; limit <= cfg.d_max; ++limit) {
    Prover p{proving_rules, cfg, target_key, {start_key}, {}};
    if (p.dfs(start, 0, limit)) return DerivationPath{start, std::move(p.path)};
  }
  return std::nullopt;
}

std::string serialize_result(const ExplorationResult& res) {
  std::string out;
  auto emit = [&](const StateEntry& e, int label) {
    nlohmann::ordered_json rec;
    rec["formula"] = print_formula(e.formula);
    rec["label"] = label;
    rec["depth"] = e.path.steps.size();
    nlohmann::ordered_json steps = nlohmann::ordered_json::array();
    for (const auto& s : e.path.steps) {
      nlohmann::ordered_json step;
      step["rule_id"] = s.rule_id;
      step["orientation"] = orientation_name(s.orientation);
      step["position"] = s.position;
      step["sub_before"] = print_formula(s.sub_before);
      step["sub_after"] = print_formula(s.sub_after);
      steps.push_back(std::move(step));
    }
    rec["path"] = std::move(steps);
    out += rec.dump();
    out += '\n';
  };
  for (const auto& e : res.s1) emit(e, 1);
  for (const auto& e : res.s2) emit(e, 0);
  return out;
}

}  // namespace lfcda
