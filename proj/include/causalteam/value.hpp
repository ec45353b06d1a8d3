#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace ct {

enum class ErrorKind {
  SchemaError,
  CyclicGraph,
  ConditionBViolation,
  ConditionCViolation,
  RangeViolation,
  UnknownVariable,
  InconsistentSpec,
  SyntaxError,
  AntecedentNotClassical,
  AntecedentNotConjunctionOfEq,
  FormalTermEncountered,
  TeamTooLargeForSplit,
  UnsupportedConnective,
  NotSupportedShape,
  NotInCO,
  EmptyTeam,
  ZeroCondition,
  NotParametric,
  DomainTooLarge,
  SearchSpaceTooLarge,
  UnknownLaw,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// A concrete range element: an integer or a bare token.
class Atom {
 public:
  Atom() : v_(std::int64_t{0}) {}
  Atom(std::int64_t i) : v_(i) {}
  Atom(int i) : v_(std::int64_t{i}) {}
  Atom(std::string s) : v_(std::move(s)) {}
  Atom(const char* s) : v_(std::string(s)) {}

  bool is_int() const { return std::holds_alternative<std::int64_t>(v_); }
  std::int64_t as_int() const { return std::get<std::int64_t>(v_); }
  const std::string& as_string() const { return std::get<std::string>(v_); }

  std::string to_string() const;

  friend bool operator==(const Atom&, const Atom&) = default;
  friend std::strong_ordering operator<=>(const Atom& a, const Atom& b);

 private:
  std::variant<std::int64_t, std::string> v_;
};

struct Term;

// Either a proper atom or a formal term f_Z(args) left behind by a failed
// function lookup during an intervention.
class Value {
 public:
  Value() = default;
  Value(Atom a) : v_(std::move(a)) {}
  Value(std::int64_t i) : v_(Atom(i)) {}
  Value(int i) : v_(Atom(i)) {}
  Value(std::shared_ptr<const Term> t) : v_(std::move(t)) {}

  static Value term(std::string symbol, std::vector<Value> args);

  bool is_proper() const { return std::holds_alternative<Atom>(v_); }
  const Atom& atom() const { return std::get<Atom>(v_); }
  const Term& as_term() const { return *std::get<std::shared_ptr<const Term>>(v_); }

  std::string to_string() const;

  friend bool operator==(const Value& a, const Value& b);
  friend std::strong_ordering operator<=>(const Value& a, const Value& b);

 private:
  std::variant<Atom, std::shared_ptr<const Term>> v_;
};

struct Term {
  std::string symbol;
  std::vector<Value> args;
};

using Row = std::vector<Value>;

bool all_proper(const std::vector<Value>& vs);
std::string to_string(const std::vector<Value>& vs);

}  // namespace ct
