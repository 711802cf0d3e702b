#include "lfcda/rewrite.hpp"

namespace lfcda {

const char* orientation_name(Orientation o) {
  return o == Orientation::Forward ? "forward" : "backward";
}

namespace {

bool match_rec(const Formula& p, const Formula& f, Bindings& b) {
  if (is_metavariable(p)) {
    auto it = b.find(p.name());
    if (it != b.end()) return it->second == f;
    b.emplace(p.name(), f);
    return true;
  }
  if (p.kind() != f.kind()) return false;
  if (p.is_atom()) return p.name() == f.name();
  for (int i = 0; i < p.arity(); ++i)
    if (!match_rec(p.child(i), f.child(i), b)) return false;
  return true;
}

}  // namespace

std::optional<Bindings> match_pattern(const Formula& pattern, const Formula& f) {
  Bindings b;
  if (match_rec(pattern, f, b)) return b;
  return std::nullopt;
}

Formula instantiate(const Formula& pattern, const Bindings& b) {
  if (is_metavariable(pattern)) {
    auto it = b.find(pattern.name());
    if (it == b.end()) throw UnboundMetavariable("no binding for metavariable " + pattern.name());
    return it->second;
  }
  switch (pattern.kind()) {
    case Kind::Atom:
    case Kind::Top:
    case Kind::Bot: return pattern;
    case Kind::Not: return Formula::negation(instantiate(pattern.left(), b));
    case Kind::And: return Formula::conjunction(instantiate(pattern.left(), b), instantiate(pattern.right(), b));
    case Kind::Or: return Formula::disjunction(instantiate(pattern.left(), b), instantiate(pattern.right(), b));
    case Kind::Implies: return Formula::implication(instantiate(pattern.left(), b), instantiate(pattern.right(), b));
    default: return Formula::biconditional(instantiate(pattern.left(), b), instantiate(pattern.right(), b));
  }
}

namespace {

// Applies one oriented rule at one position, if its source side matches and
// the target side is fully determined by the match.
std::optional<Rewrite> try_apply(const Formula& whole, const Position& pos, const Formula& sub,
                                 const RewriteRule& rule, Orientation o, std::size_t node_cap) {
  const Formula& from = o == Orientation::Forward ? rule.lhs : rule.rhs;
  const Formula& to = o == Orientation::Forward ? rule.rhs : rule.lhs;
  auto b = match_pattern(from, sub);
  if (!b) return std::nullopt;
  for (const auto& mv : metavariables(to))
    if (!b->count(mv)) return std::nullopt;  // target not determined, e.g. E12 backward
  Formula sub_after = instantiate(to, *b);
  Formula after = replace_at(whole, pos, sub_after);
  if (after.size() > node_cap) return std::nullopt;
  Rewrite r;
  r.rule_id = rule.id;
  r.rule_name = rule.name;
  r.rule_kind = rule.kind;
  r.orientation = o;
  r.position = pos;
  r.before = whole;
  r.after = std::move(after);
  r.sub_before = sub;
  r.sub_after = std::move(sub_after);
  r.step_label = rule.label;
  return r;
}

}  // namespace

std::vector<Rewrite> applicable_rewrites(const Formula& f, const RuleBase& rb, std::size_t node_cap) {
  std::vector<Rewrite> out;
  for (const Position& pos : preorder_positions(f)) {
    Formula sub = subformula_at(f, pos);
    for (std::size_t i = 0; i < rb.size(); ++i) {
      if (!rb.enabled(i)) continue;
      const RewriteRule& rule = rb.rules()[i];
      if (rule.kind == RuleKind::Implication) {
        if (!pos.empty()) continue;  // entailment is unsound under arbitrary contexts
        if (auto r = try_apply(f, pos, sub, rule, Orientation::Forward, node_cap)) out.push_back(std::move(*r));
        continue;
      }
      auto fwd = try_apply(f, pos, sub, rule, Orientation::Forward, node_cap);
      auto bwd = try_apply(f, pos, sub, rule, Orientation::Backward, node_cap);
      if (fwd && bwd && fwd->after == bwd->after) bwd.reset();  // symmetric schema, same result
      if (fwd) out.push_back(std::move(*fwd));
      if (bwd) out.push_back(std::move(*bwd));
    }
  }
  return out;
}

}  // namespace lfcda
