#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "weakrel/analyzer.hpp"
#include "weakrel/oracle.hpp"

namespace {

std::string read_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw weakrel::domain_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_commas(const std::string &s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty())
    out.push_back(cur);
  return out;
}

struct analyze_args {
  std::string file;
  std::string domain, order, universe, format = "text";
  std::size_t max_disjuncts = 32;
  std::size_t budget = 20000;
  bool disjunctive_merge = false;
};

int run_analyze(const analyze_args &a) {
  weakrel::program_overrides ov;
  if (!a.domain.empty())
    ov.domain_name = a.domain;
  if (!a.order.empty())
    ov.order_spec = a.order;
  if (!a.universe.empty())
    ov.universe_values = split_commas(a.universe);
  weakrel::analysis_options opts;
  opts.max_disjuncts = a.max_disjuncts;
  opts.max_node_updates = a.budget;
  opts.disjunctive_merge = a.disjunctive_merge;

  auto result = weakrel::analyze_source(read_file(a.file), ov, opts);
  std::cout << (a.format == "json" ? weakrel::report_json(result)
                                   : weakrel::report_text(result));
  return 0;
}

struct oracle_args {
  std::string domain = "const2";
  std::string universe, order, vars, formula, conj;
  std::string window, alphabet;
  std::size_t maxlen = 4;
  bool sat_only = false;
};

int run_oracle(const oracle_args &a) {
  using namespace weakrel;
  variable_universe vars(split_commas(a.vars));
  if (a.domain == "const2") {
    value_universe atoms(split_commas(a.universe));
    const_domain dom(atoms);
    const_formula f = parse_const_formula(a.formula, vars, atoms);
    auto models = gamma_enumerate(dom, decompose(dom, vars, dom.to_value(f)), vars.all_vars());
    if (a.sat_only) {
      std::cout << (models.empty() ? "UNSAT" : "SAT") << "\n";
      return 0;
    }
    std::cout << models.size() << " model(s)\n";
    for (const auto &m : models) {
      for (var_id v : vars.all_vars().vars())
        std::cout << vars.name(v) << "=" << atoms.atom_name(m.at(v)) << " ";
      std::cout << "\n";
    }
    return 0;
  }
  auto p = make_poset(a.order);
  directed_conj c = parse_directed_conj(a.conj, vars, *p);
  oracle::finite_carrier u;
  if (p->name() == "int") {
    if (!a.window.empty()) {
      auto parts = split_commas(a.window);
      if (parts.size() != 2)
        throw domain_error("--window takes lo,hi");
      u = oracle::finite_carrier::int_window(std::stoll(parts[0]), std::stoll(parts[1]));
    } else {
      u = oracle::adequate_int_window(c, *p);
    }
  } else if (p->name() == "subset") {
    u = oracle::finite_carrier::all_subsets(split_commas(
        a.order.substr(a.order.find_first_of(":(") + 1)).size());
  } else if (p->name() == "multiset") {
    std::int64_t max_mult = 2;
    for (const auto &d : c.occurring_constants(*p))
      for (auto m : std::get<std::vector<std::int64_t>>(d))
        max_mult = std::max(max_mult, m + 1);
    u = oracle::finite_carrier::multisets_up_to(
        split_commas(a.order.substr(a.order.find_first_of(":(") + 1)).size(), max_mult);
  } else {
    std::string alphabet = a.alphabet;
    if (alphabet.empty()) {
      for (const auto &d : c.occurring_constants(*p))
        alphabet += std::get<std::string>(d);
      if (alphabet.empty())
        alphabet = "ab";
    }
    std::size_t maxlen = a.maxlen;
    for (const auto &d : c.occurring_constants(*p))
      maxlen = std::max(maxlen, std::get<std::string>(d).size() + 2);
    u = oracle::finite_carrier::strings_up_to(alphabet, maxlen);
  }
  auto models = oracle::enumerate_models(*p, c, c.vars(), u);
  if (a.sat_only) {
    std::cout << (models.empty() ? "UNSAT" : "SAT") << "\n";
    return 0;
  }
  std::cout << models.size() << " model(s)\n";
  for (const auto &m : models) {
    for (const auto &[v, d] : m)
      std::cout << vars.name(v) << "=" << p->print(d) << " ";
    std::cout << "\n";
  }
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"weakly relational abstract interpreter"};
  app.require_subcommand(1);

  analyze_args aa;
  auto *analyze = app.add_subcommand("analyze", "analyze a program file");
  analyze->add_option("file", aa.file, "program file")->required();
  analyze->add_option("--domain", aa.domain, "const2 | directed | directed-disj");
  analyze->add_option("--order", aa.order,
                      "subset:a,b,c | int | multiset:a,b | prefix | substring | scattered");
  analyze->add_option("--universe", aa.universe, "const2 value universe, comma separated");
  analyze->add_option("--format", aa.format, "text | json")
      ->check(CLI::IsMember({"text", "json"}));
  analyze->add_option("--max-disjuncts", aa.max_disjuncts, "per-cluster disjunct cap");
  analyze->add_option("--budget", aa.budget, "node update budget");
  analyze->add_flag("--disjunctive-merge", aa.disjunctive_merge,
                    "retain disjunctions at merge points (directed-disj)");

  oracle_args oa;
  auto *orc = app.add_subcommand("oracle", "brute-force model enumeration");
  orc->group(""); // hidden
  orc->add_option("--domain", oa.domain, "const2 | directed");
  orc->add_option("--universe", oa.universe, "const2 value universe");
  orc->add_option("--order", oa.order, "order spec for directed");
  orc->add_option("--vars", oa.vars, "comma-separated variables")->required();
  orc->add_option("--formula", oa.formula, "const2 formula");
  orc->add_option("--conj", oa.conj, "directed conjunction");
  orc->add_option("--window", oa.window, "integer window lo,hi");
  orc->add_option("--alphabet", oa.alphabet, "string alphabet");
  orc->add_option("--maxlen", oa.maxlen, "string length bound");
  orc->add_flag("--sat-only", oa.sat_only, "print SAT/UNSAT only");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*analyze)
      return run_analyze(aa);
    return run_oracle(oa);
  } catch (const weakrel::budget_exhausted_error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
