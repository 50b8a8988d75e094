#pragma once

#include <map>

#include "weakrel/const_domain.hpp"
#include "weakrel/directed.hpp"
#include "weakrel/disjunctive.hpp"

namespace weakrel {
namespace oracle {

// Finite carrier for brute-force model enumeration over a partial order:
// either all elements of an explicit poset, an integer window, all strings up
// to a length bound, all subsets, or all multisets up to a multiplicity bound.
struct finite_carrier {
  std::vector<pvalue> elements;

  static finite_carrier explicit_elements(const poset &p);
  static finite_carrier int_window(std::int64_t lo, std::int64_t hi);
  static finite_carrier strings_up_to(const std::string &alphabet, std::size_t max_len);
  static finite_carrier all_subsets(std::size_t universe_size);
  static finite_carrier multisets_up_to(std::size_t universe_size, std::int64_t max_mult);
};

// A window that is adequate for conjunctions whose constants lie in [lo, hi]:
// satisfiability over the integers equals satisfiability over [lo-1, hi+1],
// because clamping any model into the window preserves every atom.
finite_carrier adequate_int_window(const directed_conj &c, const poset &p);

using model = std::map<var_id, pvalue>;

bool satisfies(const poset &p, const directed_conj &c, const model &m);
bool satisfies(const poset &p, const disj_value &v, const model &m);

// Exactly the satisfying assignments of vars over the carrier; guarded.
std::vector<model> enumerate_models(const poset &p, const directed_conj &c, const var_set &vars,
                                    const finite_carrier &u);
std::vector<model> enumerate_models(const poset &p, const disj_value &v, const var_set &vars,
                                    const finite_carrier &u);

bool check_implies(const poset &p, const directed_conj &lhs, const directed_conj &rhs,
                   const var_set &vars, const finite_carrier &u);
bool check_equiv(const poset &p, const directed_conj &lhs, const directed_conj &rhs,
                 const var_set &vars, const finite_carrier &u);

// Satisfiability over a finite carrier by candidate propagation plus
// backtracking; handles instances whose full assignment space is too large to
// enumerate.
bool satisfiable_over(const poset &p, const directed_conj &c, const var_set &vars,
                      const finite_carrier &u);

// Undirected graph without self-loops.
struct graph {
  std::size_t vertices = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  graph(std::size_t vertices, std::vector<std::pair<std::size_t, std::size_t>> edges);
};

bool three_colorable(const graph &g);

// Per-edge clauses over U = {a,b,c}; satisfiable iff the graph is
// 3-colorable. Variables are indexed by vertex.
two_clause_cnf coloring_to_const(const graph &g);

// Poset-and-conjunction encoding of 3-colorability: per vertex a family of
// three color elements fenced by two dedicated bottom elements, per edge a
// variable that must dominate both endpoints and stay below two dedicated top
// elements reachable only through differently-colored pairs. The conjunction
// is satisfiable over the constructed order iff the graph is 3-colorable.
struct directed_reduction {
  std::unique_ptr<poset> order;
  variable_universe vars;
  directed_conj conj;
};
directed_reduction coloring_to_directed(const graph &g);

// Constants-side model enumeration for collections (wraps gamma_enumerate).
std::set<sigma> const_models(const const_domain &dom, const collection<const_domain> &c,
                             const var_set &vars);

} // namespace oracle
} // namespace weakrel
