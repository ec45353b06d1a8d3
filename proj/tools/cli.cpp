#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <sstream>

#include "causalteam/causality.hpp"
#include "causalteam/intervene.hpp"
#include "causalteam/laws.hpp"
#include "causalteam/prob.hpp"
#include "causalteam/semantics.hpp"

namespace ct::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::SchemaError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string yes(bool b) { return b ? "yes" : "no"; }

int cmd_validate(const std::string& file, std::ostream& out) {
  CausalTeam t = load_team_file(file);
  out << "VALID\n";
  out << "variables=" << t.domain().size() << " rows=" << t.rows().distinct() << " total=" << t.rows().total()
      << " mode=" << (t.mode() == Mode::Multi ? "multi" : "set") << " parametric=" << yes(t.is_parametric()) << '\n';
  return 0;
}

int cmd_show(const std::string& file, bool json, bool closure, std::ostream& out) {
  CausalTeam t = load_team_file(file);
  if (closure) t = explicit_closure(t);
  out << (json ? to_json(t) : to_table(t));
  return 0;
}

std::pair<std::string, bool> verdict(const CausalTeam& t, const Formula& f, const std::string& mode) {
  if (mode == "standard") {
    bool b = satisfies(t, f).satisfied;
    return {b ? "SAT" : "UNSAT", b};
  }
  if (mode == "falsifiable") {
    bool b = satisfies_falsifiable(t, f);
    return {b ? "FALSIFIABLE" : "NOT-FALSIFIABLE", b};
  }
  bool b = satisfies_admissible(t, f);
  return {b ? "ADMISSIBLE" : "NOT-ADMISSIBLE", b};
}

int cmd_check(const std::string& file, const std::string& formula, const std::string& formulas_file,
              const std::string& mode, std::ostream& out) {
  CausalTeam t = load_team_file(file);
  if (!formulas_file.empty()) {
    bool all = true;
    for (const auto& f : parse_formula_file(read_file(formulas_file))) {
      auto [word, ok] = verdict(t, *f, mode);
      out << word << ' ' << to_string(*f) << '\n';
      all = all && ok;
    }
    return all ? 0 : 1;
  }
  if (formula.empty()) throw CLI::ValidationError("check", "a FORMULA or --formulas is required");
  auto f = parse_formula(formula);
  auto [word, ok] = verdict(t, *f, mode);
  out << word << '\n';
  out << "fragment " << to_string(classify(*f)) << '\n';
  return ok ? 0 : 1;
}

int cmd_intervene(const std::string& file, const std::string& spec, const std::string& out_file, std::ostream& out) {
  CausalTeam t = do_intervention(load_team_file(file), parse_bindings(spec));
  if (out_file.empty()) {
    out << to_json(t);
    return 0;
  }
  std::ofstream o(out_file);
  if (!o) throw Error(ErrorKind::SchemaError, "cannot write " + out_file);
  o << to_json(t);
  out << to_table(t);
  return 0;
}

int cmd_prob(const std::string& file, const std::string& formula, const std::string& cond, const std::string& given,
             bool decimal, std::ostream& out) {
  CausalTeam t = load_team_file(file);
  Probability p;
  if (!given.empty()) {
    std::string event = cond.empty() ? formula : cond;
    if (event.empty()) throw CLI::ValidationError("prob", "--given needs --cond or a FORMULA");
    p = conditional_probability(t, *parse_formula(event), *parse_formula(given));
  } else {
    std::string event = formula.empty() ? cond : formula;
    if (event.empty()) throw CLI::ValidationError("prob", "a FORMULA or --cond is required");
    p = probability_of(t, *parse_formula(event));
  }
  out << "Pr=" << (decimal ? to_decimal(p.value()) : p.to_string()) << '\n';
  return 0;
}

int cmd_cause(const std::string& file, const std::string& kind, const std::string& x, const std::string& y,
              std::ostream& out) {
  CausalTeam t = load_team_file(file);
  CauseKind k = parse_cause_kind(kind);
  auto w = find_cause(k, t, x, y);
  if (!w) {
    out << "NO " << to_string(k) << ' ' << x << "->" << y << '\n';
    return 1;
  }
  out << to_string(*w) << '\n';
  return 0;
}

int cmd_markov(const std::string& file, const std::string& which, std::ostream& out) {
  CausalTeam t = load_team_file(file);
  MarkovReport r = which == "axiom" ? check_markov_axiom(t) : check_markov_condition(t);
  out << (r.holds ? "HOLDS" : "FAILS") << '\n';
  if (r.witness) out << "witness " << to_string(*r.witness) << '\n';
  return r.holds ? 0 : 1;
}

int cmd_laws(const std::vector<std::string>& ids, std::size_t trials, std::uint64_t seed, std::ostream& out) {
  LawOptions o;
  o.trials = trials;
  o.seed = seed;
  std::vector<std::string> selected = ids;
  if (selected.empty())
    for (const auto& l : law_registry()) selected.push_back(l.id);
  bool all = true;
  for (const auto& id : selected) {
    LawReport r = check_law(id, o);
    out << summary_line(r) << '\n';
    if (!r.ok()) out << r.witness << '\n';
    all = all && r.ok();
  }
  return all ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Causal team model checker"};
  app.require_subcommand(1);
  int status = 0;

  std::string file, formula, formulas_file, mode = "standard", spec, out_file, cond, given, kind, x, y, which;
  bool decimal = false, json = false, closure = false;
  std::vector<std::string> law_ids;
  std::size_t trials = 200;
  std::uint64_t seed = LawOptions{}.seed;

  auto* validate = app.add_subcommand("validate", "Load and validate a team file");
  validate->add_option("FILE", file)->required();
  validate->callback([&] { status = cmd_validate(file, out); });

  auto* show = app.add_subcommand("show", "Print a team as a table");
  show->add_option("FILE", file)->required();
  show->add_flag("--json", json, "Print canonical JSON instead");
  show->add_flag("--closure", closure, "Print the explicit closure");
  show->callback([&] { status = cmd_show(file, json, closure, out); });

  auto* check = app.add_subcommand("check", "Evaluate a formula on a team");
  check->add_option("FILE", file)->required();
  check->add_option("FORMULA", formula);
  check->add_option("--formulas", formulas_file, "One formula per line");
  check->add_option("--mode", mode)->check(CLI::IsMember({"standard", "falsifiable", "admissible"}));
  check->callback([&] { status = cmd_check(file, formula, formulas_file, mode, out); });

  auto* intervene = app.add_subcommand("intervene", "Apply do(X=x) and write the resulting team");
  intervene->add_option("FILE", file)->required();
  intervene->add_option("--do", spec, "Bindings such as \"X=1, Y=2\"")->required();
  intervene->add_option("OUT", out_file, "Output JSON file; stdout when omitted");
  intervene->callback([&] { status = cmd_intervene(file, spec, out_file, out); });

  auto* prob = app.add_subcommand("prob", "Exact probability of a CO formula");
  prob->add_option("FILE", file)->required();
  prob->add_option("FORMULA", formula);
  prob->add_option("--cond", cond, "Event of a conditional probability");
  prob->add_option("--given", given, "Condition of a conditional probability");
  prob->add_flag("--decimal", decimal, "Print six decimal digits");
  prob->callback([&] { status = cmd_prob(file, formula, cond, given, decimal, out); });

  auto* cause = app.add_subcommand("cause", "Search for a causal witness");
  cause->add_option("FILE", file)->required();
  cause->add_option("KIND", kind, "DC, TC, PDC, PTC or CC")->required();
  cause->add_option("X", x)->required();
  cause->add_option("Y", y)->required();
  cause->callback([&] { status = cmd_cause(file, kind, x, y, out); });

  auto* markov = app.add_subcommand("markov", "Check the Markov axiom scheme or condition");
  markov->add_option("FILE", file)->required();
  markov->add_option("WHICH", which)->required()->check(CLI::IsMember({"axiom", "condition"}));
  markov->callback([&] { status = cmd_markov(file, which, out); });

  auto* laws = app.add_subcommand("laws", "Run the law harness");
  laws->add_option("--law", law_ids, "Law id; repeatable. All laws when omitted");
  laws->add_option("--trials", trials);
  laws->add_option("--seed", seed);
  laws->callback([&] { status = cmd_laws(law_ids, trials, seed, out); });

  std::vector<std::string> argv_store{"causalteam"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return status;
}

}  // namespace ct::cli
