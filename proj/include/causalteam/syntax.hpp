#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "causalteam/graph.hpp"
#include "causalteam/rational.hpp"
#include "causalteam/value.hpp"

namespace ct {

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Binding {
  std::string var;
  Atom value;
  friend bool operator==(const Binding&, const Binding&) = default;
};

namespace node {
struct Eq { std::string var; Atom value; };
struct Neq { std::string var; Atom value; };
struct Dep { std::vector<std::string> determinants; std::string dependent; };
struct NDep { std::vector<std::string> determinants; std::string dependent; };
struct MargIndep { std::string left, right; };
struct DualNeg { FormulaPtr body; };
struct And { FormulaPtr left, right; };
struct TensorOr { FormulaPtr left, right; };
struct IntuitOr { FormulaPtr left, right; };
struct Selective { FormulaPtr antecedent, consequent; };
struct Counterfactual { std::vector<Binding> antecedent; FormulaPtr consequent; };
enum class Rel { Le, Ge, Lt, Gt };
struct ProbCmp {
  FormulaPtr event;
  Rel rel;
  Rational constant;   // used when other is null
  FormulaPtr other;    // Pr(event) rel Pr(other)
};
}  // namespace node

using FormulaNode = std::variant<node::Eq, node::Neq, node::Dep, node::NDep, node::MargIndep,
                                 node::DualNeg, node::And, node::TensorOr, node::IntuitOr,
                                 node::Selective, node::Counterfactual, node::ProbCmp>;

class Formula {
 public:
  explicit Formula(FormulaNode n) : node_(std::move(n)) {}
  const FormulaNode& node() const { return node_; }
  template <class T> const T* as() const { return std::get_if<T>(&node_); }
  template <class T> bool is() const { return std::holds_alternative<T>(node_); }

 private:
  FormulaNode node_;
};

bool operator==(const Formula& a, const Formula& b);
bool same(const FormulaPtr& a, const FormulaPtr& b);

// Builders.
FormulaPtr eq(std::string var, Atom value);
FormulaPtr neq(std::string var, Atom value);
FormulaPtr dep(std::vector<std::string> xs, std::string y);
FormulaPtr ndep(std::vector<std::string> xs, std::string y);
FormulaPtr indep(std::string x, std::string y);
FormulaPtr dual_neg(FormulaPtr f);  // flips probability atoms; rejects non-flat bodies
FormulaPtr conj(FormulaPtr a, FormulaPtr b);
FormulaPtr tensor_or(FormulaPtr a, FormulaPtr b);
FormulaPtr intuit_or(FormulaPtr a, FormulaPtr b);
FormulaPtr selective(FormulaPtr antecedent, FormulaPtr consequent);
FormulaPtr counterfactual(std::vector<Binding> antecedent, FormulaPtr consequent);
FormulaPtr prob_cmp(FormulaPtr event, node::Rel rel, Rational c);
FormulaPtr prob_cmp(FormulaPtr event, node::Rel rel, FormulaPtr other);
FormulaPtr prob_eq(FormulaPtr event, Rational c);  // Pr <= c & Pr >= c
// Folds; an empty list is rejected.
FormulaPtr conj_all(const std::vector<FormulaPtr>& fs);
FormulaPtr tensor_or_all(const std::vector<FormulaPtr>& fs);
FormulaPtr intuit_or_all(const std::vector<FormulaPtr>& fs);

enum class Fragment { C, C_u, C_neg, CO, CO_neg, CD, P, PC, PO, PCD, Extended };
const char* to_string(Fragment f);

bool in_fragment(const Formula& f, Fragment frag);
Fragment classify(const Formula& f);

bool is_classical(const Formula& f);        // Eq, Neq, &, |
bool is_flat(const Formula& f);             // CO_neg
bool is_downward_closed(const Formula& f);  // syntactic sufficient condition
bool mentions_probability(const Formula& f);
VarSet variables(const Formula& f);

// Antecedent of a counterfactual is inconsistent when it binds one variable to two values.
bool consistent(const std::vector<Binding>& bs);

// Complement of a CO formula; throws NotInCO otherwise.
FormulaPtr complement(const FormulaPtr& f);

std::string to_string(const Formula& f);
inline std::string to_string(const FormulaPtr& f) { return to_string(*f); }

FormulaPtr parse_formula(const std::string& text);
std::vector<Binding> parse_bindings(const std::string& text);  // "X=1, Y=2" or "X=1 & Y=2"
// One formula per line; blank lines and '#' comments are skipped.
std::vector<FormulaPtr> parse_formula_file(const std::string& text);

}  // namespace ct
