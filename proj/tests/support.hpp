#pragma once

#include <doctest.h>

#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "causalteam/model.hpp"
#include "causalteam/semantics.hpp"
#include "causalteam/syntax.hpp"

namespace ct::test {

inline std::string data_path(const std::string& name) { return std::string(CT_DATA_DIR) + "/" + name; }

inline CausalTeam load(const std::string& name) { return load_team_file(data_path(name)); }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE_MESSAGE(in.good(), "cannot open " << path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline bool sat(const CausalTeam& t, const std::string& formula, const EvalOptions& o = {}) {
  return satisfies(t, *parse_formula(formula), o).satisfied;
}

inline ErrorKind error_kind(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an ct::Error");
  return ErrorKind::SchemaError;
}

}  // namespace ct::test
