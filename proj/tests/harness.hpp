#pragma once

#include <random>

#include "weakrel/const_domain.hpp"
#include "weakrel/disjunctive.hpp"
#include "weakrel/normalization.hpp"

namespace wt {

using namespace weakrel;

// Random table over a random sub-support of vars; density is the row keep
// probability.
inline const_value random_table(std::mt19937 &rng, const const_domain &dom, const var_set &vars,
                                double density = 0.5) {
  std::vector<var_id> support;
  for (var_id v : vars.vars())
    if (rng() % 2)
      support.push_back(v);
  const std::uint32_t base = static_cast<std::uint32_t>(dom.atoms().atom_count());
  std::size_t total = 1;
  for (std::size_t i = 0; i < support.size(); ++i)
    total *= base;
  std::vector<std::uint32_t> rows;
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (std::size_t code = 0; code < total; ++code)
    if (coin(rng) < density)
      rows.push_back(static_cast<std::uint32_t>(code));
  return const_value::from_rows(base, std::move(support), std::move(rows));
}

// Random table whose support stays inside a cluster.
inline const_value random_cluster_table(std::mt19937 &rng, const const_domain &dom,
                                        const cluster &p, double density = 0.5) {
  return random_table(rng, dom, p.vars(), density);
}

inline collection<const_domain> random_const_collection(std::mt19937 &rng,
                                                        const const_domain &dom,
                                                        const variable_universe &universe,
                                                        double density = 0.6) {
  collection<const_domain> c;
  c.universe = &universe;
  for (const cluster &p : clusters(universe))
    c.parts.push_back(random_cluster_table(rng, dom, p, density));
  return c;
}

// The four restriction axioms, checked exactly for one value and two sets.
template <typename D>
void check_restriction_axioms(const D &dom, const variable_universe &universe,
                              const typename D::value_type &r, const var_set &y1,
                              const var_set &y2) {
  var_set all = universe.all_vars();
  REQUIRE(dom.equal(dom.restrict_to(r, all), r));
  auto empty_r = dom.restrict_to(r, var_set{});
  if (dom.is_bottom(r))
    REQUIRE(dom.is_bottom(empty_r));
  else
    REQUIRE(dom.equal(empty_r, dom.top()));
  var_set small = y1.intersect(y2);
  REQUIRE(dom.leq(dom.restrict_to(r, y2), dom.restrict_to(r, small)));
  REQUIRE(dom.equal(dom.restrict_to(dom.restrict_to(r, y1), y2),
                    dom.restrict_to(r, y1.intersect(y2))));
}

inline var_set random_var_subset(std::mt19937 &rng, const variable_universe &universe) {
  std::vector<var_id> vs;
  for (var_id v : universe.all_vars().vars())
    if (rng() % 2)
      vs.push_back(v);
  return var_set(std::move(vs));
}

// Random directed conjunction from pools of constants and variables.
inline directed_conj random_conj(std::mt19937 &rng, const poset &p,
                                 const std::vector<pvalue> &consts, const var_set &vars,
                                 std::size_t max_atoms = 4) {
  std::vector<directed_atom> atoms;
  const auto &vs = vars.vars();
  std::size_t n = rng() % (max_atoms + 1);
  for (std::size_t i = 0; i < n; ++i) {
    var_id x = vs[rng() % vs.size()];
    switch (rng() % 3) {
    case 0:
      atoms.push_back(directed_atom::lower(consts[rng() % consts.size()], x));
      break;
    case 1:
      atoms.push_back(directed_atom::upper(x, consts[rng() % consts.size()]));
      break;
    default: {
      var_id y = vs[rng() % vs.size()];
      if (x != y)
        atoms.push_back(directed_atom::var_le(x, y));
      break;
    }
    }
  }
  sort_atoms(p, atoms);
  return directed_conj::of(std::move(atoms));
}

} // namespace wt
