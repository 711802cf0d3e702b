#include "lfcda/semantics.hpp"

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace lfcda {

bool evaluate(const Formula& f, const Assignment& a) {
  switch (f.kind()) {
    case Kind::Atom: {
      auto it = a.find(f.name());
      if (it == a.end()) throw MissingVariable("no value for variable '" + f.name() + "'");
      return it->second;
    }
    case Kind::Top: return true;
    case Kind::Bot: return false;
    case Kind::Not: return !evaluate(f.left(), a);
    case Kind::And: return evaluate(f.left(), a) && evaluate(f.right(), a);
    case Kind::Or: return evaluate(f.left(), a) || evaluate(f.right(), a);
    case Kind::Implies: return !evaluate(f.left(), a) || evaluate(f.right(), a);
    default: return evaluate(f.left(), a) == evaluate(f.right(), a);
  }
}

namespace {

// Evaluation against a bitmask of variable values, avoiding per-row maps.
bool eval_bits(const Formula& f, const std::unordered_map<std::string, int>& index, std::uint32_t mask) {
  switch (f.kind()) {
    case Kind::Atom: return (mask >> index.at(f.name())) & 1u;
    case Kind::Top: return true;
    case Kind::Bot: return false;
    case Kind::Not: return !eval_bits(f.left(), index, mask);
    case Kind::And: return eval_bits(f.left(), index, mask) && eval_bits(f.right(), index, mask);
    case Kind::Or: return eval_bits(f.left(), index, mask) || eval_bits(f.right(), index, mask);
    case Kind::Implies: return !eval_bits(f.left(), index, mask) || eval_bits(f.right(), index, mask);
    default: return eval_bits(f.left(), index, mask) == eval_bits(f.right(), index, mask);
  }
}

std::unordered_map<std::string, int> combined_index(const Formula& f, const Formula& g) {
  std::set<std::string> vars = atoms(f);
  vars.merge(atoms(g));
  if (vars.size() > static_cast<std::size_t>(kMaxOracleVariables))
    throw TooManyVariables("formula pair uses " + std::to_string(vars.size()) + " variables, cap is " +
                           std::to_string(kMaxOracleVariables));
  std::unordered_map<std::string, int> index;
  int i = 0;
  for (const auto& v : vars) index.emplace(v, i++);
  return index;
}

}  // namespace

bool entails(const Formula& premise, const Formula& conclusion) {
  auto index = combined_index(premise, conclusion);
  std::uint32_t rows = 1u << index.size();
  for (std::uint32_t mask = 0; mask < rows; ++mask)
    if (eval_bits(premise, index, mask) && !eval_bits(conclusion, index, mask)) return false;
  return true;
}

bool equivalent(const Formula& f, const Formula& g) {
  auto index = combined_index(f, g);
  std::uint32_t rows = 1u << index.size();
  for (std::uint32_t mask = 0; mask < rows; ++mask)
    if (eval_bits(f, index, mask) != eval_bits(g, index, mask)) return false;
  return true;
}

}  // namespace lfcda
