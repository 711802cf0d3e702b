#ifndef LFCDA_FORMULA_HPP
#define LFCDA_FORMULA_HPP

#include <cstddef>
#include <functional>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lfcda {

enum class Kind { Atom, Top, Bot, Not, And, Or, Implies, Iff };

/// Immutable propositional formula. Nodes are shared on copy and never
/// mutated after construction; every transformation builds a new tree.
class Formula {
 public:
  /// Default-constructed formulas are the constant T.
  Formula();

  static Formula atom(std::string name);
  static Formula top();
  static Formula bot();
  static Formula negation(Formula f);
  static Formula conjunction(Formula l, Formula r);
  static Formula disjunction(Formula l, Formula r);
  static Formula implication(Formula l, Formula r);
  static Formula biconditional(Formula l, Formula r);

  Kind kind() const;
  bool is_atom() const { return kind() == Kind::Atom; }
  bool is_constant() const { return kind() == Kind::Top || kind() == Kind::Bot; }

  /// Atom name; only meaningful for Kind::Atom.
  const std::string& name() const;

  /// Number of children: 0 for atoms and constants, 1 for Not, 2 otherwise.
  int arity() const;

  /// Child 0 is the left (or only) child, child 1 the right.
  const Formula& child(int i) const;
  const Formula& left() const { return child(0); }
  const Formula& right() const { return child(1); }

  /// Total node count of the tree.
  std::size_t size() const;

  friend bool operator==(const Formula& a, const Formula& b) { return equal(a.node_.get(), b.node_.get()); }
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

 private:
  struct Node;

  explicit Formula(std::nullptr_t) {}  // empty slot inside Node
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula make_binary(Kind k, Formula l, Formula r);
  static bool equal(const Node* a, const Node* b);

  std::shared_ptr<const Node> node_;
};

struct Formula::Node {
  Kind kind;
  std::string name;  // Atom only
  Formula lhs, rhs;  // unary uses lhs; leaves use neither
  std::size_t size = 1;
  explicit Node(Kind k) : kind(k), lhs(nullptr), rhs(nullptr) {}
  Node(Kind k, std::string n) : kind(k), name(std::move(n)), lhs(nullptr), rhs(nullptr) {}
  Node(Kind k, Formula l, Formula r) : kind(k), lhs(std::move(l)), rhs(std::move(r)) {}
};

inline Kind Formula::kind() const { return node_->kind; }
inline const std::string& Formula::name() const { return node_->name; }
inline std::size_t Formula::size() const { return node_->size; }

/// Path of child indices from the root; empty = root.
using Position = std::vector<int>;

enum class PrintStyle { Canonical, Pretty };

struct ParseError : std::runtime_error {
  std::size_t offset;  // byte offset into the input
  ParseError(std::size_t off, const std::string& what) : std::runtime_error(what), offset(off) {}
};

struct InvalidPosition : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses the ASCII formula grammar: atoms [a-zA-Z_][a-zA-Z0-9_]*,
/// ~ & | -> <->, T and F constants, parentheses. Precedence tightest
/// first: ~, &, |, ->, <->; -> and <-> associate right, & and | left.
Formula parse_formula(std::string_view text);

/// Canonical = fully parenthesized (used as dedup key), Pretty = minimal
/// parentheses (used in traces).
std::string print_formula(const Formula& f, PrintStyle style = PrintStyle::Canonical);

/// Printing with a display substitution for atom names (e.g. Greek glossary
/// names); the result is for humans and need not re-parse.
std::string print_formula(const Formula& f, PrintStyle style,
                          const std::function<std::string(const std::string&)>& atom_display);

Formula subformula_at(const Formula& f, const Position& p);

/// New tree equal to f except the subtree at p is g; f itself is unchanged.
Formula replace_at(const Formula& f, const Position& p, Formula g);

/// All positions in root-left-right order; length equals node count.
std::vector<Position> preorder_positions(const Formula& f);

/// Distinct atom names occurring in f.
std::set<std::string> atoms(const Formula& f);

/// Bijective phrase-key <-> variable-id table, insertion ordered.
class VarTable {
 public:
  /// Returns the existing id for the phrase or allocates the next one.
  int map_phrase(const std::string& phrase_key);

  /// Id for a phrase already in the table, or -1.
  int find(const std::string& phrase_key) const;

  const std::string& phrase(int id) const;
  int size() const { return static_cast<int>(phrases_.size()); }

  /// ASCII atom name used inside formulas: a..z then p27, p28, ...
  static std::string var_name(int id);

  /// Greek display name used in glossaries and traces: α..θ then p9, p10, ...
  static std::string display_name(int id);

  /// Inverse of var_name; -1 if the name is not of that shape.
  static int id_of_var_name(const std::string& name);

 private:
  std::vector<std::string> phrases_;
};

}  // namespace lfcda

#endif
