#include "lfcda/formula.hpp"

#include <cctype>

namespace lfcda {

namespace {

bool valid_atom_name(const std::string& s) {
  if (s.empty() || s == "T" || s == "F") return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

}  // namespace

Formula::Formula() { *this = top(); }

Formula Formula::atom(std::string name) {
  if (!valid_atom_name(name))
    throw std::invalid_argument("invalid atom name: '" + name + "'");
  return Formula(std::make_shared<const Node>(Kind::Atom, std::move(name)));
}

Formula Formula::top() {
  static const Formula t{std::make_shared<const Node>(Kind::Top)};
  return t;
}

Formula Formula::bot() {
  static const Formula f{std::make_shared<const Node>(Kind::Bot)};
  return f;
}

Formula Formula::negation(Formula f) {
  auto n = std::make_shared<Node>(Kind::Not, std::move(f), Formula(nullptr));
  n->size = 1 + n->lhs.size();
  return Formula(std::shared_ptr<const Node>(std::move(n)));
}

Formula Formula::make_binary(Kind k, Formula l, Formula r) {
  auto n = std::make_shared<Node>(k, std::move(l), std::move(r));
  n->size = 1 + n->lhs.size() + n->rhs.size();
  return Formula(std::shared_ptr<const Node>(std::move(n)));
}

Formula Formula::conjunction(Formula l, Formula r) { return make_binary(Kind::And, std::move(l), std::move(r)); }
Formula Formula::disjunction(Formula l, Formula r) { return make_binary(Kind::Or, std::move(l), std::move(r)); }
Formula Formula::implication(Formula l, Formula r) { return make_binary(Kind::Implies, std::move(l), std::move(r)); }
Formula Formula::biconditional(Formula l, Formula r) { return make_binary(Kind::Iff, std::move(l), std::move(r)); }

int Formula::arity() const {
  switch (node_->kind) {
    case Kind::Atom:
    case Kind::Top:
    case Kind::Bot: return 0;
    case Kind::Not: return 1;
    default: return 2;
  }
}

const Formula& Formula::child(int i) const {
  if (i < 0 || i >= arity()) throw InvalidPosition("child index out of range");
  return i == 0 ? node_->lhs : node_->rhs;
}

bool Formula::equal(const Node* a, const Node* b) {
  if (a == b) return true;
  if (a == nullptr || b == nullptr) return false;
  if (a->kind != b->kind || a->size != b->size) return false;
  if (a->kind == Kind::Atom) return a->name == b->name;
  return equal(a->lhs.node_.get(), b->lhs.node_.get()) && equal(a->rhs.node_.get(), b->rhs.node_.get());
}

// ---------------------------------------------------------------- parsing

namespace {

enum class Tok { Atom, Top, Bot, Not, And, Or, Implies, Iff, LParen, RParen, End };

struct Lexer {
  std::string_view in;
  std::size_t pos = 0;
  Tok tok = Tok::End;
  std::string text;         // atom spelling
  std::size_t tok_off = 0;  // byte offset of the current token

  explicit Lexer(std::string_view s) : in(s) { advance(); }

  [[noreturn]] static void fail(std::size_t off, const std::string& msg) {
    throw ParseError(off, "syntax error at byte " + std::to_string(off) + ": " + msg);
  }

  void advance() {
    while (pos < in.size() && std::isspace(static_cast<unsigned char>(in[pos]))) ++pos;
    tok_off = pos;
    if (pos >= in.size()) {
      tok = Tok::End;
      return;
    }
    char c = in[pos];
    if (c == '(') { tok = Tok::LParen; ++pos; return; }
    if (c == ')') { tok = Tok::RParen; ++pos; return; }
    if (c == '~') { tok = Tok::Not; ++pos; return; }
    if (c == '&') { tok = Tok::And; ++pos; return; }
    if (c == '|') { tok = Tok::Or; ++pos; return; }
    if (c == '-') {
      if (pos + 1 < in.size() && in[pos + 1] == '>') { tok = Tok::Implies; pos += 2; return; }
      fail(pos, "expected '->'");
    }
    if (c == '<') {
      if (pos + 2 < in.size() && in[pos + 1] == '-' && in[pos + 2] == '>') { tok = Tok::Iff; pos += 3; return; }
      fail(pos, "expected '<->'");
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos;
      while (pos < in.size() && (std::isalnum(static_cast<unsigned char>(in[pos])) || in[pos] == '_')) ++pos;
      text = std::string(in.substr(start, pos - start));
      if (text == "T") tok = Tok::Top;
      else if (text == "F") tok = Tok::Bot;
      else tok = Tok::Atom;
      return;
    }
    fail(pos, std::string("unexpected character '") + c + "'; expected one of atom, 'T', 'F', '~', '('");
  }
};

struct Parser {
  Lexer lx;
  explicit Parser(std::string_view s) : lx(s) {}

  Formula parse() {
    Formula f = iff();
    if (lx.tok != Tok::End)
      Lexer::fail(lx.tok_off, "expected end of input or binary operator");
    return f;
  }

  Formula iff() {
    Formula l = imp();
    if (lx.tok == Tok::Iff) {
      lx.advance();
      return Formula::biconditional(std::move(l), iff());  // right associative
    }
    return l;
  }

  Formula imp() {
    Formula l = disj();
    if (lx.tok == Tok::Implies) {
      lx.advance();
      return Formula::implication(std::move(l), imp());  // right associative
    }
    return l;
  }

  Formula disj() {
    Formula l = conj();
    while (lx.tok == Tok::Or) {
      lx.advance();
      l = Formula::disjunction(std::move(l), conj());
    }
    return l;
  }

  Formula conj() {
    Formula l = unary();
    while (lx.tok == Tok::And) {
      lx.advance();
      l = Formula::conjunction(std::move(l), unary());
    }
    return l;
  }

  Formula unary() {
    if (lx.tok == Tok::Not) {
      lx.advance();
      return Formula::negation(unary());
    }
    return primary();
  }

  Formula primary() {
    switch (lx.tok) {
      case Tok::Atom: {
        Formula f = Formula::atom(lx.text);
        lx.advance();
        return f;
      }
      case Tok::Top: lx.advance(); return Formula::top();
      case Tok::Bot: lx.advance(); return Formula::bot();
      case Tok::LParen: {
        lx.advance();
        Formula f = iff();
        if (lx.tok != Tok::RParen) Lexer::fail(lx.tok_off, "expected ')'");
        lx.advance();
        return f;
      }
      default:
        Lexer::fail(lx.tok_off, "expected one of atom, 'T', 'F', '~', '('");
    }
  }
};

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(text).parse(); }

// --------------------------------------------------------------- printing

namespace {

const char* op_token(Kind k) {
  switch (k) {
    case Kind::And: return "&";
    case Kind::Or: return "|";
    case Kind::Implies: return "->";
    case Kind::Iff: return "<->";
    default: return "";
  }
}

// Higher binds tighter. Each binary operator gets its own level, so equal
// precedence implies equal kind.
int prec(Kind k) {
  switch (k) {
    case Kind::Iff: return 1;
    case Kind::Implies: return 2;
    case Kind::Or: return 3;
    case Kind::And: return 4;
    case Kind::Not: return 5;
    default: return 6;
  }
}

bool right_assoc(Kind k) { return k == Kind::Implies || k == Kind::Iff; }

using AtomDisplay = std::function<std::string(const std::string&)>;

void emit_atom(const Formula& f, std::string& out, const AtomDisplay* disp) {
  out += disp ? (*disp)(f.name()) : f.name();
}

void print_canonical(const Formula& f, std::string& out, const AtomDisplay* disp) {
  switch (f.kind()) {
    case Kind::Atom: emit_atom(f, out, disp); return;
    case Kind::Top: out += 'T'; return;
    case Kind::Bot: out += 'F'; return;
    case Kind::Not:
      out += '~';
      print_canonical(f.left(), out, disp);
      return;
    default:
      out += '(';
      print_canonical(f.left(), out, disp);
      out += ' ';
      out += op_token(f.kind());
      out += ' ';
      print_canonical(f.right(), out, disp);
      out += ')';
      return;
  }
}

void print_pretty(const Formula& f, std::string& out, const AtomDisplay* disp) {
  switch (f.kind()) {
    case Kind::Atom: emit_atom(f, out, disp); return;
    case Kind::Top: out += 'T'; return;
    case Kind::Bot: out += 'F'; return;
    case Kind::Not: {
      bool paren = prec(f.left().kind()) < prec(Kind::Not);
      out += '~';
      if (paren) out += '(';
      print_pretty(f.left(), out, disp);
      if (paren) out += ')';
      return;
    }
    default: {
      Kind k = f.kind();
      bool lp = prec(f.left().kind()) < prec(k) || (prec(f.left().kind()) == prec(k) && right_assoc(k));
      bool rp = prec(f.right().kind()) < prec(k) || (prec(f.right().kind()) == prec(k) && !right_assoc(k));
      if (lp) out += '(';
      print_pretty(f.left(), out, disp);
      if (lp) out += ')';
      out += ' ';
      out += op_token(k);
      out += ' ';
      if (rp) out += '(';
      print_pretty(f.right(), out, disp);
      if (rp) out += ')';
      return;
    }
  }
}

std::string print_impl(const Formula& f, PrintStyle style, const AtomDisplay* disp) {
  std::string out;
  out.reserve(f.size() * 4);
  if (style == PrintStyle::Canonical)
    print_canonical(f, out, disp);
  else
    print_pretty(f, out, disp);
  return out;
}

}  // namespace

std::string print_formula(const Formula& f, PrintStyle style) { return print_impl(f, style, nullptr); }

std::string print_formula(const Formula& f, PrintStyle style,
                          const std::function<std::string(const std::string&)>& atom_display) {
  return print_impl(f, style, &atom_display);
}

// -------------------------------------------------------------- positions

Formula subformula_at(const Formula& f, const Position& p) {
  Formula cur = f;
  for (int i : p) {
    if (i < 0 || i >= cur.arity())
      throw InvalidPosition("invalid position for formula " + print_formula(f));
    cur = cur.child(i);
  }
  return cur;
}

static Formula replace_rec(const Formula& whole, const Formula& cur, const Position& p, std::size_t depth,
                           const Formula& g) {
  if (depth == p.size()) return g;
  int i = p[depth];
  if (i < 0 || i >= cur.arity())
    throw InvalidPosition("invalid position for formula " + print_formula(whole));
  Formula replaced = replace_rec(whole, cur.child(i), p, depth + 1, g);
  switch (cur.kind()) {
    case Kind::Not: return Formula::negation(std::move(replaced));
    case Kind::And:
      return i == 0 ? Formula::conjunction(std::move(replaced), cur.right())
                    : Formula::conjunction(cur.left(), std::move(replaced));
    case Kind::Or:
      return i == 0 ? Formula::disjunction(std::move(replaced), cur.right())
                    : Formula::disjunction(cur.left(), std::move(replaced));
    case Kind::Implies:
      return i == 0 ? Formula::implication(std::move(replaced), cur.right())
                    : Formula::implication(cur.left(), std::move(replaced));
    default:
      return i == 0 ? Formula::biconditional(std::move(replaced), cur.right())
                    : Formula::biconditional(cur.left(), std::move(replaced));
  }
}

Formula replace_at(const Formula& f, const Position& p, Formula g) {
  return replace_rec(f, f, p, 0, g);
}

std::vector<Position> preorder_positions(const Formula& f) {
  std::vector<Position> out;
  out.reserve(f.size());
  Position cur;
  auto walk = [&](auto&& self, const Formula& g) -> void {
    out.push_back(cur);
    for (int i = 0; i < g.arity(); ++i) {
      cur.push_back(i);
      self(self, g.child(i));
      cur.pop_back();
    }
  };
  walk(walk, f);
  return out;
}

std::set<std::string> atoms(const Formula& f) {
  std::set<std::string> out;
  auto walk = [&](auto&& self, const Formula& g) -> void {
    if (g.is_atom()) {
      out.insert(g.name());
      return;
    }
    for (int i = 0; i < g.arity(); ++i) self(self, g.child(i));
  };
  walk(walk, f);
  return out;
}

// --------------------------------------------------------------- VarTable

int VarTable::map_phrase(const std::string& phrase_key) {
  int id = find(phrase_key);
  if (id >= 0) return id;
  phrases_.push_back(phrase_key);
  return static_cast<int>(phrases_.size()) - 1;
}

int VarTable::find(const std::string& phrase_key) const {
  for (std::size_t i = 0; i < phrases_.size(); ++i)
    if (phrases_[i] == phrase_key) return static_cast<int>(i);
  return -1;
}

const std::string& VarTable::phrase(int id) const {
  if (id < 0 || id >= size()) throw std::out_of_range("no such variable id: " + std::to_string(id));
  return phrases_[static_cast<std::size_t>(id)];
}

std::string VarTable::var_name(int id) {
  if (id >= 0 && id < 26) return std::string(1, static_cast<char>('a' + id));
  return "p" + std::to_string(id + 1);
}

std::string VarTable::display_name(int id) {
  static const char* greek[] = {"α", "β", "γ", "δ",
                                "ε", "ζ", "η", "θ"};
  if (id >= 0 && id < 8) return greek[id];
  return "p" + std::to_string(id + 1);
}

int VarTable::id_of_var_name(const std::string& name) {
  if (name.size() == 1 && name[0] >= 'a' && name[0] <= 'z') return name[0] - 'a';
  if (name.size() > 1 && name[0] == 'p') {
    for (std::size_t i = 1; i < name.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(name[i]))) return -1;
    long v = std::stol(name.substr(1));
    if (v >= 27) return static_cast<int>(v - 1);
  }
  return -1;
}

}  // namespace lfcda
