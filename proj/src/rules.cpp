#include "lfcda/rules.hpp"

#include <fstream>
#include <sstream>

#include "lfcda/semantics.hpp"

namespace lfcda {

bool is_metavariable(const Formula& f) {
  return f.is_atom() && f.name().size() == 1 && f.name()[0] >= 'A' && f.name()[0] <= 'Z';
}

std::set<std::string> metavariables(const Formula& pattern) {
  std::set<std::string> out;
  auto walk = [&](auto&& self, const Formula& g) -> void {
    if (is_metavariable(g)) {
      out.insert(g.name());
      return;
    }
    for (int i = 0; i < g.arity(); ++i) self(self, g.child(i));
  };
  walk(walk, pattern);
  return out;
}

RuleBase::RuleBase(std::vector<RewriteRule> rules) : rules_(std::move(rules)), enabled_(rules_.size(), true) {
  std::set<std::string> ids;
  for (const auto& r : rules_) {
    if (!ids.insert(r.id).second) throw RuleFileError("duplicate rule id '" + r.id + "'");
    for (const auto& mv : metavariables(r.rhs))
      if (!metavariables(r.lhs).count(mv))
        throw RuleFileError("rule '" + r.id + "': free metavariable " + mv + " on right-hand side");
  }
}

const RewriteRule* RuleBase::find(const std::string& id) const {
  for (const auto& r : rules_)
    if (r.id == id) return &r;
  return nullptr;
}

void RuleBase::disable(const std::string& id) {
  for (std::size_t i = 0; i < rules_.size(); ++i)
    if (rules_[i].id == id) enabled_[i] = false;
}

void RuleBase::enable(const std::string& id) {
  for (std::size_t i = 0; i < rules_.size(); ++i)
    if (rules_[i].id == id) enabled_[i] = true;
}

RuleBase RuleBase::subset(const std::vector<std::string>& ids) const {
  std::vector<RewriteRule> out;
  for (const auto& id : ids) {
    const RewriteRule* r = find(id);
    if (r == nullptr) throw RuleFileError("unknown rule id '" + id + "'");
    out.push_back(*r);
  }
  return RuleBase(std::move(out));
}

namespace {

struct RuleSpec {
  const char* id;
  const char* name;
  RuleKind kind;
  int label;
  const char* lhs;
  const char* rhs;
};

constexpr RuleKind EQ = RuleKind::Equivalence;
constexpr RuleKind IM = RuleKind::Implication;

const RuleSpec kBuiltins[] = {
    {"E1", "DoubleNegation", EQ, 1, "~~X", "X"},
    {"E2", "AndCommutativity", EQ, 1, "X & Y", "Y & X"},
    {"E3", "OrCommutativity", EQ, 1, "X | Y", "Y | X"},
    {"E4", "AndAssociativity", EQ, 1, "(X & Y) & Z", "X & (Y & Z)"},
    {"E5", "OrAssociativity", EQ, 1, "(X | Y) | Z", "X | (Y | Z)"},
    {"E6", "DeMorganAnd", EQ, 1, "~(X & Y)", "~X | ~Y"},
    {"E7", "DeMorganOr", EQ, 1, "~(X | Y)", "~X & ~Y"},
    {"E8", "MaterialImplication", EQ, 1, "X -> Y", "~X | Y"},
    {"E9", "Contraposition", EQ, 1, "X -> Y", "~Y -> ~X"},
    {"E10", "AndOverOrDistribution", EQ, 1, "X & (Y | Z)", "(X & Y) | (X & Z)"},
    {"E11", "OrOverAndDistribution", EQ, 1, "X | (Y & Z)", "(X | Y) & (X | Z)"},
    {"E12", "Contradiction", EQ, 1, "X & ~X", "F"},
    {"E13", "ExcludedMiddle", EQ, 1, "X | ~X", "T"},
    {"E14", "AndIdentity", EQ, 1, "X & T", "X"},
    {"E15", "OrIdentity", EQ, 1, "X | F", "X"},
    {"E16", "AndAnnihilation", EQ, 1, "X & F", "F"},
    {"E17", "OrAnnihilation", EQ, 1, "X | T", "T"},
    {"E18", "IffDefinition", EQ, 1, "X <-> Y", "(X -> Y) & (Y -> X)"},
    {"E19", "AndIdempotence", EQ, 1, "X & X", "X"},
    {"E20", "OrIdempotence", EQ, 1, "X | X", "X"},
    {"I1", "ModusPonens", IM, 1, "(X -> Y) & X", "Y"},
    {"I2", "ModusTollens", IM, 1, "(X -> Y) & ~Y", "~X"},
    {"I3", "HypotheticalSyllogism", IM, 1, "(X -> Y) & (Y -> Z)", "X -> Z"},
    {"I4", "DisjunctiveSyllogism", IM, 1, "(X | Y) & ~X", "Y"},
    {"I5", "SimplificationLeft", IM, 1, "X & Y", "X"},
    {"I6", "SimplificationRight", IM, 1, "X & Y", "Y"},
    {"F1", "ConverseError", IM, 0, "X -> Y", "Y -> X"},
    {"F2", "AffirmingConsequent", IM, 0, "(X -> Y) & Y", "X"},
    {"F3", "DenyingAntecedent", IM, 0, "(X -> Y) & ~X", "~Y"},
    {"F4", "FalseDeMorgan", IM, 0, "~(X & Y)", "~X & ~Y"},
};

RuleBase make_builtins() {
  std::vector<RewriteRule> rules;
  rules.reserve(std::size(kBuiltins));
  for (const auto& s : kBuiltins)
    rules.push_back({s.id, s.name, s.kind, s.label, parse_formula(s.lhs), parse_formula(s.rhs)});
  return RuleBase(std::move(rules));
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

const RuleBase& builtin_rules() {
  static const RuleBase rb = make_builtins();
  return rb;
}

RuleBase load_rules(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw RuleFileError("cannot open rule file '" + path + "'");
  std::vector<RewriteRule> rules;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    // "::"-separated so formulas may contain the '|' operator freely
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
      std::size_t sep = t.find("::", pos);
      if (sep == std::string::npos) {
        fields.push_back(trim(t.substr(pos)));
        break;
      }
      fields.push_back(trim(t.substr(pos, sep - pos)));
      pos = sep + 2;
    }
    if (fields.size() != 6)
      throw RuleFileError(path + ":" + std::to_string(lineno) + ": expected 6 '::'-separated fields, got " +
                          std::to_string(fields.size()));
    RewriteRule r;
    r.id = fields[0];
    r.name = fields[1];
    if (fields[2] == "equivalence") r.kind = RuleKind::Equivalence;
    else if (fields[2] == "implication") r.kind = RuleKind::Implication;
    else throw RuleFileError(path + ":" + std::to_string(lineno) + ": kind must be 'equivalence' or 'implication'");
    if (fields[3] == "0") r.label = 0;
    else if (fields[3] == "1") r.label = 1;
    else throw RuleFileError(path + ":" + std::to_string(lineno) + ": label must be 0 or 1");
    try {
      r.lhs = parse_formula(fields[4]);
      r.rhs = parse_formula(fields[5]);
    } catch (const ParseError& e) {
      throw RuleFileError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    rules.push_back(std::move(r));
  }
  try {
    return RuleBase(std::move(rules));
  } catch (const RuleFileError& e) {
    throw RuleFileError(path + ": " + e.what());
  }
}

ValidationReport validate_rules(const RuleBase& rb) {
  // A schema is valid iff its generic instance over the metavariables read
  // as plain atoms is valid: substitution preserves propositional validity.
  ValidationReport report;
  for (const auto& r : rb.rules()) {
    bool valid = r.kind == RuleKind::Equivalence ? equivalent(r.lhs, r.rhs) : entails(r.lhs, r.rhs);
    bool agree = (r.label == 1) == valid;
    report.verdicts.push_back({r.id, r.label, valid, agree});
    if (!agree) report.ok = false;
  }
  return report;
}

}  // namespace lfcda
