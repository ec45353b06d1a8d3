#include "causalteam/value.hpp"

#include <sstream>

namespace ct {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::CyclicGraph: return "CyclicGraph";
    case ErrorKind::ConditionBViolation: return "ConditionBViolation";
    case ErrorKind::ConditionCViolation: return "ConditionCViolation";
    case ErrorKind::RangeViolation: return "RangeViolation";
    case ErrorKind::UnknownVariable: return "UnknownVariable";
    case ErrorKind::InconsistentSpec: return "InconsistentSpec";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::AntecedentNotClassical: return "AntecedentNotClassical";
    case ErrorKind::AntecedentNotConjunctionOfEq: return "AntecedentNotConjunctionOfEq";
    case ErrorKind::FormalTermEncountered: return "FormalTermEncountered";
    case ErrorKind::TeamTooLargeForSplit: return "TeamTooLargeForSplit";
    case ErrorKind::UnsupportedConnective: return "UnsupportedConnective";
    case ErrorKind::NotSupportedShape: return "NotSupportedShape";
    case ErrorKind::NotInCO: return "NotInCO";
    case ErrorKind::EmptyTeam: return "EmptyTeam";
    case ErrorKind::ZeroCondition: return "ZeroCondition";
    case ErrorKind::NotParametric: return "NotParametric";
    case ErrorKind::DomainTooLarge: return "DomainTooLarge";
    case ErrorKind::SearchSpaceTooLarge: return "SearchSpaceTooLarge";
    case ErrorKind::UnknownLaw: return "UnknownLaw";
  }
  return "Error";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

std::string Atom::to_string() const {
  if (is_int()) return std::to_string(as_int());
  return as_string();
}

// ints sort before tokens
std::strong_ordering operator<=>(const Atom& a, const Atom& b) {
  if (a.v_.index() != b.v_.index()) return a.v_.index() <=> b.v_.index();
  if (a.is_int()) return a.as_int() <=> b.as_int();
  return a.as_string().compare(b.as_string()) <=> 0;
}

Value Value::term(std::string symbol, std::vector<Value> args) {
  return Value(std::make_shared<const Term>(Term{std::move(symbol), std::move(args)}));
}

std::string Value::to_string() const {
  if (is_proper()) return atom().to_string();
  const Term& t = as_term();
  return t.symbol + "(" + ct::to_string(t.args) + ")";
}

bool operator==(const Value& a, const Value& b) {
  return (a <=> b) == std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const Value& a, const Value& b) {
  if (a.is_proper() != b.is_proper()) return a.is_proper() ? std::strong_ordering::less
                                                           : std::strong_ordering::greater;
  if (a.is_proper()) return a.atom() <=> b.atom();
  const Term& x = a.as_term();
  const Term& y = b.as_term();
  if (&x == &y) return std::strong_ordering::equal;
  if (auto c = x.symbol.compare(y.symbol) <=> 0; c != 0) return c;
  return x.args <=> y.args;
}

bool all_proper(const std::vector<Value>& vs) {
  for (const auto& v : vs)
    if (!v.is_proper()) return false;
  return true;
}

std::string to_string(const std::vector<Value>& vs) {
  std::ostringstream os;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) os << ',';
    os << vs[i].to_string();
  }
  return os.str();
}

}  // namespace ct
