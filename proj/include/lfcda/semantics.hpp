#ifndef LFCDA_SEMANTICS_HPP
#define LFCDA_SEMANTICS_HPP

#include <map>
#include <stdexcept>
#include <string>

#include "lfcda/formula.hpp"

namespace lfcda {

/// Total truth assignment over the atoms a formula is evaluated against.
using Assignment = std::map<std::string, bool>;

struct MissingVariable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TooManyVariables : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exhaustive enumeration is deliberate: this module is the trusted oracle,
/// so it stays a plain truth table with a hard variable cap.
constexpr int kMaxOracleVariables = 20;

bool evaluate(const Formula& f, const Assignment& a);

/// True iff every assignment satisfying premise satisfies conclusion,
/// checked over all 2^n assignments of the combined atom set.
bool entails(const Formula& premise, const Formula& conclusion);

/// entails(f, g) && entails(g, f).
bool equivalent(const Formula& f, const Formula& g);

}  // namespace lfcda

#endif
