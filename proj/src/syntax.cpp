#include "causalteam/syntax.hpp"

#include <cctype>
#include <map>
#include <sstream>

namespace ct {

namespace {

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

FormulaPtr make(FormulaNode n) { return std::make_shared<const Formula>(std::move(n)); }

}  // namespace

bool same(const FormulaPtr& a, const FormulaPtr& b) {
  if (!a || !b) return !a && !b;
  return a == b || *a == *b;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node().index() != b.node().index()) return false;
  return std::visit(
      overloaded{
          [&](const node::Eq& x) { auto& y = *b.as<node::Eq>(); return x.var == y.var && x.value == y.value; },
          [&](const node::Neq& x) { auto& y = *b.as<node::Neq>(); return x.var == y.var && x.value == y.value; },
          [&](const node::Dep& x) {
            auto& y = *b.as<node::Dep>();
            return x.determinants == y.determinants && x.dependent == y.dependent;
          },
          [&](const node::NDep& x) {
            auto& y = *b.as<node::NDep>();
            return x.determinants == y.determinants && x.dependent == y.dependent;
          },
          [&](const node::MargIndep& x) {
            auto& y = *b.as<node::MargIndep>();
            return x.left == y.left && x.right == y.right;
          },
          [&](const node::DualNeg& x) { return same(x.body, b.as<node::DualNeg>()->body); },
          [&](const node::And& x) {
            auto& y = *b.as<node::And>();
            return same(x.left, y.left) && same(x.right, y.right);
          },
          [&](const node::TensorOr& x) {
            auto& y = *b.as<node::TensorOr>();
            return same(x.left, y.left) && same(x.right, y.right);
          },
          [&](const node::IntuitOr& x) {
            auto& y = *b.as<node::IntuitOr>();
            return same(x.left, y.left) && same(x.right, y.right);
          },
          [&](const node::Selective& x) {
            auto& y = *b.as<node::Selective>();
            return same(x.antecedent, y.antecedent) && same(x.consequent, y.consequent);
          },
          [&](const node::Counterfactual& x) {
            auto& y = *b.as<node::Counterfactual>();
            return x.antecedent == y.antecedent && same(x.consequent, y.consequent);
          },
          [&](const node::ProbCmp& x) {
            auto& y = *b.as<node::ProbCmp>();
            return same(x.event, y.event) && x.rel == y.rel && x.constant == y.constant &&
                   same(x.other, y.other);
          },
      },
      a.node());
}

// ---- builders -------------------------------------------------------------

FormulaPtr eq(std::string var, Atom value) { return make(node::Eq{std::move(var), std::move(value)}); }
FormulaPtr neq(std::string var, Atom value) { return make(node::Neq{std::move(var), std::move(value)}); }
FormulaPtr dep(std::vector<std::string> xs, std::string y) { return make(node::Dep{std::move(xs), std::move(y)}); }
FormulaPtr ndep(std::vector<std::string> xs, std::string y) { return make(node::NDep{std::move(xs), std::move(y)}); }
FormulaPtr indep(std::string x, std::string y) { return make(node::MargIndep{std::move(x), std::move(y)}); }

FormulaPtr dual_neg(FormulaPtr f) {
  if (auto p = f->as<node::ProbCmp>()) {
    node::ProbCmp q = *p;
    switch (p->rel) {
      case node::Rel::Le: q.rel = node::Rel::Gt; break;
      case node::Rel::Ge: q.rel = node::Rel::Lt; break;
      case node::Rel::Lt: q.rel = node::Rel::Ge; break;
      case node::Rel::Gt: q.rel = node::Rel::Le; break;
    }
    return make(q);
  }
  if (!is_flat(*f)) throw Error(ErrorKind::SyntaxError, "'!' needs a flat body: " + to_string(*f));
  return make(node::DualNeg{std::move(f)});
}

FormulaPtr conj(FormulaPtr a, FormulaPtr b) { return make(node::And{std::move(a), std::move(b)}); }
FormulaPtr tensor_or(FormulaPtr a, FormulaPtr b) { return make(node::TensorOr{std::move(a), std::move(b)}); }
FormulaPtr intuit_or(FormulaPtr a, FormulaPtr b) { return make(node::IntuitOr{std::move(a), std::move(b)}); }

FormulaPtr selective(FormulaPtr antecedent, FormulaPtr consequent) {
  if (!is_classical(*antecedent))
    throw Error(ErrorKind::AntecedentNotClassical, to_string(*antecedent));
  return make(node::Selective{std::move(antecedent), std::move(consequent)});
}

FormulaPtr counterfactual(std::vector<Binding> antecedent, FormulaPtr consequent) {
  if (antecedent.empty()) throw Error(ErrorKind::AntecedentNotConjunctionOfEq, "empty antecedent");
  return make(node::Counterfactual{std::move(antecedent), std::move(consequent)});
}

FormulaPtr prob_cmp(FormulaPtr event, node::Rel rel, Rational c) {
  if (c < 0 || c > 1) throw Error(ErrorKind::SyntaxError, "probability constant outside [0,1]");
  if (!in_fragment(*event, Fragment::CO)) throw Error(ErrorKind::NotInCO, to_string(*event));
  return make(node::ProbCmp{std::move(event), rel, c, nullptr});
}

FormulaPtr prob_cmp(FormulaPtr event, node::Rel rel, FormulaPtr other) {
  if (!in_fragment(*event, Fragment::CO)) throw Error(ErrorKind::NotInCO, to_string(*event));
  if (!in_fragment(*other, Fragment::CO)) throw Error(ErrorKind::NotInCO, to_string(*other));
  return make(node::ProbCmp{std::move(event), rel, Rational(0), std::move(other)});
}

FormulaPtr prob_eq(FormulaPtr event, Rational c) {
  return conj(prob_cmp(event, node::Rel::Le, c), prob_cmp(event, node::Rel::Ge, c));
}

namespace {
template <class F>
FormulaPtr fold(const std::vector<FormulaPtr>& fs, F f) {
  if (fs.empty()) throw std::invalid_argument("empty fold");
  FormulaPtr acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = f(acc, fs[i]);
  return acc;
}
}  // namespace

FormulaPtr conj_all(const std::vector<FormulaPtr>& fs) { return fold(fs, conj); }
FormulaPtr tensor_or_all(const std::vector<FormulaPtr>& fs) { return fold(fs, tensor_or); }
FormulaPtr intuit_or_all(const std::vector<FormulaPtr>& fs) { return fold(fs, intuit_or); }

// ---- fragments ------------------------------------------------------------

const char* to_string(Fragment f) {
  switch (f) {
    case Fragment::C: return "C";
    case Fragment::C_u: return "C_u";
    case Fragment::C_neg: return "C_neg";
    case Fragment::CO: return "CO";
    case Fragment::CO_neg: return "CO_neg";
    case Fragment::CD: return "CD";
    case Fragment::P: return "P";
    case Fragment::PC: return "PC";
    case Fragment::PO: return "PO";
    case Fragment::PCD: return "PCD";
    case Fragment::Extended: return "extended";
  }
  return "?";
}

namespace {

struct Allow {
  bool neg = false, sel = false, cf = false, dep = false, prob = false, intuit = false;
  bool nested_cf = true;
};

Allow allowance(Fragment f) {
  Allow a;
  switch (f) {
    case Fragment::C: a.cf = true; break;
    case Fragment::C_u: a.cf = a.neg = true; a.nested_cf = false; break;
    case Fragment::C_neg: a.cf = a.neg = true; break;
    case Fragment::CO: a.cf = a.sel = true; break;
    case Fragment::CO_neg: a.cf = a.sel = a.neg = true; break;
    case Fragment::CD: a.cf = a.sel = a.dep = true; break;
    case Fragment::P: a.prob = a.intuit = true; break;
    case Fragment::PC: a.prob = a.intuit = a.cf = true; break;
    case Fragment::PO: a.prob = a.intuit = a.sel = true; break;
    case Fragment::PCD: a.prob = a.intuit = a.sel = a.cf = true; break;
    case Fragment::Extended: break;
  }
  return a;
}

bool admits(const Formula& f, const Allow& a, bool inside_cf) {
  return std::visit(
      overloaded{
          [](const node::Eq&) { return true; },
          [](const node::Neq&) { return true; },
          [&](const node::Dep&) { return a.dep; },
          [](const node::NDep&) { return false; },
          [](const node::MargIndep&) { return false; },
          [&](const node::DualNeg& n) { return a.neg && admits(*n.body, a, inside_cf); },
          [&](const node::And& n) { return admits(*n.left, a, inside_cf) && admits(*n.right, a, inside_cf); },
          [&](const node::TensorOr& n) {
            return admits(*n.left, a, inside_cf) && admits(*n.right, a, inside_cf);
          },
          [&](const node::IntuitOr& n) {
            return a.intuit && admits(*n.left, a, inside_cf) && admits(*n.right, a, inside_cf);
          },
          [&](const node::Selective& n) {
            return a.sel && admits(*n.antecedent, a, inside_cf) && admits(*n.consequent, a, inside_cf);
          },
          [&](const node::Counterfactual& n) {
            if (!a.cf || (inside_cf && !a.nested_cf)) return false;
            return admits(*n.consequent, a, true);
          },
          [&](const node::ProbCmp&) { return a.prob; },
      },
      f.node());
}

}  // namespace

bool in_fragment(const Formula& f, Fragment frag) {
  if (frag == Fragment::Extended) return true;
  return admits(f, allowance(frag), false);
}

Fragment classify(const Formula& f) {
  for (Fragment fr : {Fragment::C, Fragment::C_u, Fragment::C_neg, Fragment::CO, Fragment::CO_neg,
                      Fragment::CD, Fragment::P, Fragment::PC, Fragment::PO, Fragment::PCD})
    if (in_fragment(f, fr)) return fr;
  return Fragment::Extended;
}

bool is_classical(const Formula& f) {
  if (f.is<node::Eq>() || f.is<node::Neq>()) return true;
  if (auto n = f.as<node::And>()) return is_classical(*n->left) && is_classical(*n->right);
  if (auto n = f.as<node::TensorOr>()) return is_classical(*n->left) && is_classical(*n->right);
  return false;
}

bool is_flat(const Formula& f) { return in_fragment(f, Fragment::CO_neg); }

bool is_downward_closed(const Formula& f) {
  return std::visit(
      overloaded{
          [](const node::Eq&) { return true; },
          [](const node::Neq&) { return true; },
          [](const node::Dep&) { return true; },
          [](const node::NDep&) { return false; },
          [](const node::MargIndep&) { return false; },
          [](const node::DualNeg&) { return true; },
          [](const node::And& n) { return is_downward_closed(*n.left) && is_downward_closed(*n.right); },
          [](const node::TensorOr& n) { return is_downward_closed(*n.left) && is_downward_closed(*n.right); },
          [](const node::IntuitOr& n) { return is_downward_closed(*n.left) && is_downward_closed(*n.right); },
          [](const node::Selective& n) { return is_downward_closed(*n.consequent); },
          [](const node::Counterfactual& n) { return is_downward_closed(*n.consequent); },
          [](const node::ProbCmp&) { return false; },
      },
      f.node());
}

bool mentions_probability(const Formula& f) {
  return std::visit(
      overloaded{
          [](const node::DualNeg& n) { return mentions_probability(*n.body); },
          [](const node::And& n) { return mentions_probability(*n.left) || mentions_probability(*n.right); },
          [](const node::TensorOr& n) { return mentions_probability(*n.left) || mentions_probability(*n.right); },
          [](const node::IntuitOr& n) { return mentions_probability(*n.left) || mentions_probability(*n.right); },
          [](const node::Selective& n) { return mentions_probability(*n.consequent); },
          [](const node::Counterfactual& n) { return mentions_probability(*n.consequent); },
          [](const node::ProbCmp&) { return true; },
          [](const auto&) { return false; },
      },
      f.node());
}

namespace {
void collect(const Formula& f, VarSet& out) {
  std::visit(overloaded{
                 [&](const node::Eq& n) { out.insert(n.var); },
                 [&](const node::Neq& n) { out.insert(n.var); },
                 [&](const node::Dep& n) {
                   out.insert(n.determinants.begin(), n.determinants.end());
                   out.insert(n.dependent);
                 },
                 [&](const node::NDep& n) {
                   out.insert(n.determinants.begin(), n.determinants.end());
                   out.insert(n.dependent);
                 },
                 [&](const node::MargIndep& n) { out.insert(n.left); out.insert(n.right); },
                 [&](const node::DualNeg& n) { collect(*n.body, out); },
                 [&](const node::And& n) { collect(*n.left, out); collect(*n.right, out); },
                 [&](const node::TensorOr& n) { collect(*n.left, out); collect(*n.right, out); },
                 [&](const node::IntuitOr& n) { collect(*n.left, out); collect(*n.right, out); },
                 [&](const node::Selective& n) { collect(*n.antecedent, out); collect(*n.consequent, out); },
                 [&](const node::Counterfactual& n) {
                   for (auto& b : n.antecedent) out.insert(b.var);
                   collect(*n.consequent, out);
                 },
                 [&](const node::ProbCmp& n) {
                   collect(*n.event, out);
                   if (n.other) collect(*n.other, out);
                 },
             },
             f.node());
}
}  // namespace

VarSet variables(const Formula& f) {
  VarSet s;
  collect(f, s);
  return s;
}

bool consistent(const std::vector<Binding>& bs) {
  std::map<std::string, Atom> seen;
  for (const auto& b : bs) {
    auto [it, fresh] = seen.emplace(b.var, b.value);
    if (!fresh && !(it->second == b.value)) return false;
  }
  return true;
}

FormulaPtr complement(const FormulaPtr& f) {
  if (!in_fragment(*f, Fragment::CO)) throw Error(ErrorKind::NotInCO, to_string(*f));
  return std::visit(
      overloaded{
          [](const node::Eq& n) { return neq(n.var, n.value); },
          [](const node::Neq& n) { return eq(n.var, n.value); },
          [](const node::And& n) { return tensor_or(complement(n.left), complement(n.right)); },
          [](const node::TensorOr& n) { return conj(complement(n.left), complement(n.right)); },
          [](const node::Selective& n) { return conj(n.antecedent, complement(n.consequent)); },
          [](const node::Counterfactual& n) {
            // An inconsistent antecedent makes the counterfactual true everywhere,
            // so its complement must be a contradiction.
            if (!consistent(n.antecedent)) {
              const Binding& b = n.antecedent.front();
              return conj(eq(b.var, b.value), neq(b.var, b.value));
            }
            return counterfactual(n.antecedent, complement(n.consequent));
          },
          [&](const auto&) -> FormulaPtr { throw Error(ErrorKind::NotInCO, to_string(*f)); },
      },
      f->node());
}

// ---- printing -------------------------------------------------------------

namespace {

const char* kKeywords[] = {"do", "dep", "ndep", "indep", "Pr"};

bool bare_token(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')) return false;
  for (const char* k : kKeywords)
    if (s == k) return false;
  return true;
}

std::string print_atom(const Atom& a) {
  if (a.is_int() || bare_token(a.as_string())) return a.to_string();
  std::string out = "\"";
  for (char c : a.as_string()) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

int level(const Formula& f) {
  if (f.is<node::And>()) return 4;
  if (f.is<node::TensorOr>()) return 3;
  if (f.is<node::IntuitOr>()) return 2;
  if (f.is<node::Selective>() || f.is<node::Counterfactual>()) return 1;
  return 5;
}

void print(const Formula& f, int min_level, std::ostream& os);

void print_rel(node::Rel r, std::ostream& os) {
  switch (r) {
    case node::Rel::Le: os << " <= "; break;
    case node::Rel::Ge: os << " >= "; break;
    case node::Rel::Lt: os << " < "; break;
    case node::Rel::Gt: os << " > "; break;
  }
}

void print_names(const std::vector<std::string>& xs, std::ostream& os) {
  for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << xs[i];
}

void print_body(const Formula& f, std::ostream& os) {
  std::visit(overloaded{
                 [&](const node::Eq& n) { os << n.var << '=' << print_atom(n.value); },
                 [&](const node::Neq& n) { os << n.var << "!=" << print_atom(n.value); },
                 [&](const node::Dep& n) {
                   os << "dep(";
                   print_names(n.determinants, os);
                   os << ';' << n.dependent << ')';
                 },
                 [&](const node::NDep& n) {
                   os << "ndep(";
                   print_names(n.determinants, os);
                   os << ';' << n.dependent << ')';
                 },
                 [&](const node::MargIndep& n) { os << "indep(" << n.left << ',' << n.right << ')'; },
                 [&](const node::DualNeg& n) { os << '!'; print(*n.body, 5, os); },
                 [&](const node::And& n) { print(*n.left, 4, os); os << " & "; print(*n.right, 5, os); },
                 [&](const node::TensorOr& n) { print(*n.left, 3, os); os << " | "; print(*n.right, 4, os); },
                 [&](const node::IntuitOr& n) { print(*n.left, 2, os); os << " ++ "; print(*n.right, 3, os); },
                 [&](const node::Selective& n) {
                   print(*n.antecedent, 2, os);
                   os << " => ";
                   print(*n.consequent, 1, os);
                 },
                 [&](const node::Counterfactual& n) {
                   os << "do ";
                   for (std::size_t i = 0; i < n.antecedent.size(); ++i)
                     os << (i ? " & " : "") << n.antecedent[i].var << '=' << print_atom(n.antecedent[i].value);
                   os << " []-> ";
                   print(*n.consequent, 1, os);
                 },
                 [&](const node::ProbCmp& n) {
                   os << "Pr(";
                   print(*n.event, 1, os);
                   os << ')';
                   print_rel(n.rel, os);
                   if (n.other) {
                     os << "Pr(";
                     print(*n.other, 1, os);
                     os << ')';
                   } else {
                     os << to_string(n.constant);
                   }
                 },
             },
             f.node());
}

void print(const Formula& f, int min_level, std::ostream& os) {
  bool paren = level(f) < min_level;
  if (paren) os << '(';
  print_body(f, os);
  if (paren) os << ')';
}

}  // namespace

std::string to_string(const Formula& f) {
  std::ostringstream os;
  print(f, 1, os);
  return os.str();
}

// ---- parsing --------------------------------------------------------------

namespace {

enum class Tok { Ident, Int, Decimal, String, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;  // 0-based offset
};

std::vector<Token> lex(const std::string& s) {
  static const char* syms[] = {"[]->", "++", "=>", "!=", "<=", ">=", "(", ")", ",", ";",
                               "&",    "|",  "!",  "=",  "<",  ">",  "/"};
  std::vector<Token> out;
  std::size_t i = 0;
  auto fail = [&](std::size_t at, const std::string& msg) {
    throw Error(ErrorKind::SyntaxError, "column " + std::to_string(at + 1) + ": " + msg);
  };
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isalpha(c) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' || s[i] == '\''))
        ++i;
      out.push_back({Tok::Ident, s.substr(start, i - start), start});
      continue;
    }
    if (std::isdigit(c) || (c == '-' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      ++i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      Tok kind = Tok::Int;
      if (i < s.size() && s[i] == '.') {
        ++i;
        if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) fail(i, "malformed decimal");
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        kind = Tok::Decimal;
      }
      out.push_back({kind, s.substr(start, i - start), start});
      continue;
    }
    if (c == '"') {
      std::string text;
      ++i;
      while (i < s.size() && s[i] != '"') {
        if (s[i] == '\\' && i + 1 < s.size()) ++i;
        text += s[i++];
      }
      if (i >= s.size()) fail(start, "unterminated string");
      ++i;
      out.push_back({Tok::String, text, start});
      continue;
    }
    bool matched = false;
    for (const char* sym : syms) {
      std::string t(sym);
      if (s.compare(i, t.size(), t) == 0) {
        out.push_back({Tok::Sym, t, i});
        i += t.size();
        matched = true;
        break;
      }
    }
    if (!matched) fail(i, std::string("unexpected character '") + s[i] + "'");
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

bool is_keyword(const std::string& s) {
  for (const char* k : kKeywords)
    if (s == k) return true;
  return false;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(lex(text)) {}

  FormulaPtr formula() {
    FormulaPtr f = impl();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return f;
  }

  std::vector<Binding> bindings_only() {
    auto bs = bindings();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'", ErrorKind::AntecedentNotConjunctionOfEq);
    return bs;
  }

 private:
  std::vector<Token> toks_;
  std::size_t at_ = 0;

  const Token& peek() const { return toks_[at_]; }
  bool sym(const char* s) const { return peek().kind == Tok::Sym && peek().text == s; }
  bool kw(const char* s) const { return peek().kind == Tok::Ident && peek().text == s; }
  bool accept(const char* s) {
    if (!sym(s)) return false;
    ++at_;
    return true;
  }

  [[noreturn]] void fail(const std::string& msg, ErrorKind k = ErrorKind::SyntaxError,
                         std::size_t pos = std::string::npos) const {
    if (pos == std::string::npos) pos = peek().pos;
    throw Error(k, "column " + std::to_string(pos + 1) + ": " + msg);
  }

  void expect(const char* s) {
    if (!accept(s)) fail(std::string("expected '") + s + "'");
  }

  std::string ident() {
    if (peek().kind != Tok::Ident || is_keyword(peek().text)) fail("expected a variable name");
    return toks_[at_++].text;
  }

  Atom value() {
    const Token& t = peek();
    if (t.kind == Tok::Int) {
      ++at_;
      return Atom(static_cast<std::int64_t>(std::stoll(t.text)));
    }
    if (t.kind == Tok::String || (t.kind == Tok::Ident && !is_keyword(t.text))) {
      ++at_;
      return Atom(t.text);
    }
    fail("expected a value");
  }

  template <class F>
  FormulaPtr guarded(std::size_t pos, F build) {
    try {
      return build();
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::SyntaxError && std::string(e.what()).find("column") != std::string::npos)
        throw;
      std::string what = e.what();
      auto colon = what.find(": ");
      fail(colon == std::string::npos ? what : what.substr(colon + 2), e.kind(), pos);
    }
  }

  FormulaPtr impl() {
    if (kw("do")) return do_clause();
    std::size_t start = peek().pos;
    FormulaPtr left = intuit();
    if (accept("=>")) {
      FormulaPtr right = impl();
      return guarded(start, [&] { return selective(left, right); });
    }
    return left;
  }

  std::vector<Binding> bindings() {
    std::vector<Binding> bs;
    do {
      std::string var = ident();
      if (!sym("=")) fail("counterfactual antecedent must be a conjunction of X=x", ErrorKind::AntecedentNotConjunctionOfEq);
      ++at_;
      bs.push_back({var, value()});
    } while (accept("&") || accept(","));
    return bs;
  }

  FormulaPtr do_clause() {
    ++at_;  // 'do'
    auto bs = bindings();
    if (!accept("[]->"))
      fail("counterfactual antecedent must be a conjunction of X=x", ErrorKind::AntecedentNotConjunctionOfEq);
    FormulaPtr body = impl();
    return counterfactual(std::move(bs), body);
  }

  FormulaPtr intuit() {
    FormulaPtr l = tensor();
    while (accept("++")) l = intuit_or(l, tensor());
    return l;
  }

  FormulaPtr tensor() {
    FormulaPtr l = conjunction();
    while (accept("|")) l = tensor_or(l, conjunction());
    return l;
  }

  FormulaPtr conjunction() {
    FormulaPtr l = unary();
    while (accept("&")) l = conj(l, unary());
    return l;
  }

  FormulaPtr unary() {
    std::size_t start = peek().pos;
    if (accept("!")) {
      FormulaPtr body = unary();
      return guarded(start, [&] { return dual_neg(body); });
    }
    if (kw("do")) return do_clause();
    return primary();
  }

  std::vector<std::string> names_until(const char* stop) {
    std::vector<std::string> xs;
    if (sym(stop)) return xs;
    xs.push_back(ident());
    while (accept(",")) xs.push_back(ident());
    return xs;
  }

  Rational constant() {
    const Token& t = peek();
    std::size_t pos = t.pos;
    Rational r;
    if (t.kind == Tok::Int) {
      ++at_;
      std::int64_t num = std::stoll(t.text);
      std::int64_t den = 1;
      if (accept("/")) {
        if (peek().kind != Tok::Int) fail("expected a denominator");
        den = std::stoll(toks_[at_++].text);
        if (den == 0) fail("zero denominator", ErrorKind::SyntaxError, pos);
      }
      r = Rational(num, den);
    } else if (t.kind == Tok::Decimal) {
      ++at_;
      auto dot = t.text.find('.');
      std::string digits = t.text.substr(0, dot) + t.text.substr(dot + 1);
      std::int64_t den = 1;
      for (std::size_t k = dot + 1; k < t.text.size(); ++k) den *= 10;
      r = Rational(std::stoll(digits), den);
    } else {
      fail("expected a probability constant");
    }
    if (r < 0 || r > 1) fail("probability constant outside [0,1]", ErrorKind::SyntaxError, pos);
    return r;
  }

  FormulaPtr prob_event() {
    expect("(");
    FormulaPtr f = impl();
    expect(")");
    return f;
  }

  FormulaPtr primary() {
    std::size_t start = peek().pos;
    if (accept("(")) {
      FormulaPtr f = impl();
      expect(")");
      return f;
    }
    if (kw("dep") || kw("ndep")) {
      bool positive = peek().text == "dep";
      ++at_;
      expect("(");
      auto xs = names_until(";");
      expect(";");
      std::string y = ident();
      expect(")");
      return positive ? dep(xs, y) : ndep(xs, y);
    }
    if (kw("indep")) {
      ++at_;
      expect("(");
      std::string x = ident();
      expect(",");
      std::string y = ident();
      expect(")");
      return indep(x, y);
    }
    if (kw("Pr")) {
      ++at_;
      FormulaPtr event = prob_event();
      node::Rel rel;
      bool equal = false;
      if (accept("<=")) rel = node::Rel::Le;
      else if (accept(">=")) rel = node::Rel::Ge;
      else if (accept("<")) rel = node::Rel::Lt;
      else if (accept(">")) rel = node::Rel::Gt;
      else if (accept("=")) { rel = node::Rel::Le; equal = true; }
      else fail("expected a comparison after Pr(...)");
      if (kw("Pr")) {
        ++at_;
        FormulaPtr other = prob_event();
        return guarded(start, [&] {
          if (!equal) return prob_cmp(event, rel, other);
          return conj(prob_cmp(event, node::Rel::Le, other), prob_cmp(event, node::Rel::Ge, other));
        });
      }
      Rational c = constant();
      return guarded(start, [&] { return equal ? prob_eq(event, c) : prob_cmp(event, rel, c); });
    }
    std::string var = ident();
    if (accept("=")) return eq(var, value());
    if (accept("!=")) return neq(var, value());
    fail("expected '=' or '!=' after " + var);
  }
};

}  // namespace

FormulaPtr parse_formula(const std::string& text) { return Parser(text).formula(); }

std::vector<Binding> parse_bindings(const std::string& text) { return Parser(text).bindings_only(); }

std::vector<FormulaPtr> parse_formula_file(const std::string& text) {
  std::vector<FormulaPtr> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse_formula(line));
    } catch (const Error& e) {
      throw Error(e.kind(), "line " + std::to_string(lineno) + ", " +
                                std::string(e.what()).substr(std::string(to_string(e.kind())).size() + 2));
    }
  }
  return out;
}

}  // namespace ct
