#include <doctest.h>

#include "harness.hpp"

using namespace weakrel;
using namespace wt;

namespace {

struct fixture {
  variable_universe vars{{"x", "y", "z"}};
  value_universe atoms{{"a", "b"}};
  const_domain dom{atoms};

  const_value val(const std::string &text) const {
    return dom.to_value(parse_const_formula(text, vars, atoms));
  }
  iteration_budget budget() const { return default_budget(vars.size(), atoms.atom_count()); }
};

// The per-edge three-clause coloring constraints over {a,b,c} as a pair table.
const_value edge_constraint(const const_domain &dom, const variable_universe &vars, var_id i,
                            var_id j) {
  auto f = parse_const_formula("(" + vars.name(i) + " in {b,c} or " + vars.name(j) +
                                   " in {b,c}) and (" + vars.name(i) + " in {a,c} or " +
                                   vars.name(j) + " in {a,c}) and (" + vars.name(i) +
                                   " in {a,b} or " + vars.name(j) + " in {a,b})",
                               vars, dom.atoms());
  return dom.to_value(f);
}

} // namespace

TEST_CASE("the all-top collection is stable") {
  fixture fx;
  CHECK(is_stable(fx.dom, decomposed_top(fx.dom, fx.vars)));
}

TEST_CASE("an unpropagated chain is not stable") {
  fixture fx;
  collection<const_domain> c = decomposed_top(fx.dom, fx.vars);
  c.part(0, 2) = fx.val("x in {a} and z in {a}");
  c.part(2, 1) = fx.val("z in {a} and y in {a}");
  CHECK_FALSE(is_stable(fx.dom, c));
}

TEST_CASE("decompose outputs are stable") {
  fixture fx;
  std::mt19937 rng(41);
  for (int i = 0; i < 50; ++i) {
    auto r = random_table(rng, fx.dom, fx.vars.all_vars());
    CHECK(is_stable(fx.dom, decompose(fx.dom, fx.vars, r)));
  }
}

TEST_CASE("kleene_normalize returns stable inputs unchanged") {
  fixture fx;
  std::mt19937 rng(42);
  auto r = decompose(fx.dom, fx.vars, random_table(rng, fx.dom, fx.vars.all_vars()));
  normalize_stats st;
  auto out = kleene_normalize(fx.dom, r, fx.budget(), &st);
  CHECK(equal2(fx.dom, out.get(), r));
  CHECK(st.updates == 0);
}

TEST_CASE("kleene_normalize closes the copy chain") {
  fixture fx;
  collection<const_domain> c = decomposed_top(fx.dom, fx.vars);
  c.part(0, 2) = fx.val("(x in {a} and z in {a}) or (x in {b} and z in {b})");
  c.part(2, 1) = fx.val("(z in {a} and y in {a}) or (z in {b} and y in {b})");
  auto out = kleene_normalize(fx.dom, c, fx.budget());
  CHECK(out.part(0, 1) == fx.val("(x in {a} and y in {a}) or (x in {b} and y in {b})"));
  CHECK(is_stable(fx.dom, out.get()));
  // gamma route: the pair part must cover the exact restriction of the meet
  auto exact = fx.dom.restrict_to(meet_of_parts(fx.dom, c), var_set{0, 1});
  CHECK(fx.dom.leq(exact, out.part(0, 1)));
}

TEST_CASE("the complete four-vertex coloring collection keeps its three-disjunct form") {
  variable_universe vars({"x1", "x2", "x3", "x4"});
  value_universe atoms({"a", "b", "c"});
  const_domain dom(atoms);
  collection<const_domain> c = decomposed_top(dom, vars);
  for (var_id i = 0; i < 4; ++i)
    for (var_id j = i + 1; j < 4; ++j)
      c.part(i, j) = edge_constraint(dom, vars, i, j);

  auto out = kleene_normalize(dom, c, const_collection_budget(c));
  CHECK(is_stable(dom, out.get()));
  auto expected = dom.to_value(parse_const_formula(
      "(x1 in {a} and x2 in {b,c}) or (x1 in {b} and x2 in {a,c}) or (x1 in {c} and x2 in {a,b})",
      vars, atoms));
  CHECK(out.part(0, 1) == expected);
  for (var_id i = 0; i < 4; ++i) {
    CHECK_FALSE(out.part(i, i).is_bottom());
    CHECK(out.part(i, i) ==
          dom.to_value(parse_const_formula(vars.name(i) + " in {a,b,c}", vars, atoms)));
    for (var_id j = i + 1; j < 4; ++j)
      CHECK_FALSE(out.part(i, j).is_bottom());
  }
}

TEST_CASE("abstract_join is neutral on bottom and stable without re-normalization") {
  fixture fx;
  std::mt19937 rng(43);
  auto r = kleene_normalize(fx.dom, random_const_collection(rng, fx.dom, fx.vars), fx.budget());
  auto b = stable_bottom(fx.dom, fx.vars);
  CHECK(abstract_equal(fx.dom, abstract_join(fx.dom, r, b), r));
}

TEST_CASE("abstract_join of two normalized singletons") {
  fixture fx;
  auto r1 = decompose_stable(fx.dom, fx.vars, fx.val("x in {a} and y in {a}"));
  auto r2 = decompose_stable(fx.dom, fx.vars, fx.val("x in {b} and y in {b}"));
  auto j = abstract_join(fx.dom, r1, r2);
  CHECK(j.part(0, 1) == fx.val("(x in {a} and y in {a}) or (x in {b} and y in {b})"));
  CHECK(j.part(0, 0) == fx.val("x in {a,b}"));
  CHECK(j.part(1, 1) == fx.val("y in {a,b}"));
  CHECK(is_stable(fx.dom, j.get()));
  CHECK(abstract_leq(fx.dom, r1, j));
  CHECK(abstract_leq(fx.dom, r2, j));
}

TEST_CASE("join and restriction of stable collections stay stable; meets re-normalize") {
  fixture fx;
  std::mt19937 rng(44);
  for (int i = 0; i < 300; ++i) {
    auto r1 = kleene_normalize(fx.dom, random_const_collection(rng, fx.dom, fx.vars), fx.budget());
    auto r2 = kleene_normalize(fx.dom, random_const_collection(rng, fx.dom, fx.vars), fx.budget());
    CHECK(is_stable(fx.dom, abstract_join(fx.dom, r1, r2).get()));
    CHECK(is_stable(fx.dom, abstract_restrict(fx.dom, r1, random_var_subset(rng, fx.vars)).get()));
  }
}

TEST_CASE("abstract_restrict examples") {
  fixture fx;
  std::mt19937 rng(45);
  auto r = kleene_normalize(fx.dom, random_const_collection(rng, fx.dom, fx.vars), fx.budget());
  CHECK(abstract_equal(fx.dom, abstract_restrict(fx.dom, r, fx.vars.all_vars()), r));

  auto nonbot = decompose_stable(fx.dom, fx.vars, fx.val("x in {a}"));
  auto e = abstract_restrict(fx.dom, nonbot, var_set{});
  for (const auto &p : e.parts())
    CHECK(p.is_top());

  // chain result restricted to {x,y} keeps the pair part and tops out z
  collection<const_domain> c = decomposed_top(fx.dom, fx.vars);
  c.part(0, 2) = fx.val("(x in {a} and z in {a}) or (x in {b} and z in {b})");
  c.part(2, 1) = fx.val("(z in {a} and y in {a}) or (z in {b} and y in {b})");
  auto chain = kleene_normalize(fx.dom, c, fx.budget());
  auto proj = abstract_restrict(fx.dom, chain, var_set{0, 1});
  CHECK(proj.part(0, 1) == chain.part(0, 1));
  CHECK(proj.part(2, 2).is_top());
  CHECK(proj.part(0, 2) == fx.dom.restrict_to(chain.part(0, 2), var_set{0}));
}

TEST_CASE("abstract_meet examples") {
  fixture fx;
  std::mt19937 rng(46);
  auto r = kleene_normalize(fx.dom, random_const_collection(rng, fx.dom, fx.vars), fx.budget());
  CHECK(abstract_equal(fx.dom, abstract_meet(fx.dom, r, stable_top(fx.dom, fx.vars), fx.budget()), r));

  auto a = decompose_stable(fx.dom, fx.vars, fx.val("x in {a}"));
  auto b = decompose_stable(fx.dom, fx.vars, fx.val("x in {b}"));
  auto bot = abstract_meet(fx.dom, a, b, fx.budget());
  for (const auto &p : bot.parts())
    CHECK(p.is_bottom());

  // meets of copy-chain values re-tighten the transitive pair
  auto xy = decompose_stable(fx.dom, fx.vars,
                             fx.val("(x in {a} and y in {a}) or (x in {b} and y in {b})"));
  auto yz = decompose_stable(fx.dom, fx.vars,
                             fx.val("(y in {a} and z in {a}) or (y in {b} and z in {b})"));
  auto met = abstract_meet(fx.dom, xy, yz, fx.budget());
  CHECK(met.part(0, 2) == fx.val("(x in {a} and z in {a}) or (x in {b} and z in {b})"));
  auto exact = fx.dom.meet(meet_of_parts(fx.dom, xy.get()), meet_of_parts(fx.dom, yz.get()));
  auto lhs = gamma_enumerate(fx.dom, met, fx.vars.all_vars());
  auto rhs = gamma_enumerate(fx.dom, decompose(fx.dom, fx.vars, exact), fx.vars.all_vars());
  CHECK(lhs == rhs);
}

TEST_CASE("bottom propagates to every component") {
  fixture fx;
  std::mt19937 rng(47);
  for (int i = 0; i < 50; ++i) {
    auto c = random_const_collection(rng, fx.dom, fx.vars);
    c.parts[rng() % c.parts.size()] = fx.dom.bottom();
    auto out = kleene_normalize(fx.dom, c, fx.budget());
    for (const auto &p : out.parts())
      CHECK(p.is_bottom());
  }
}

TEST_CASE("normalization is sound and within the update bound on random collections") {
  std::mt19937 rng(48);
  for (int i = 0; i < 300; ++i) {
    std::size_t n_vars = 2 + rng() % 3;   // up to 4
    std::size_t n_values = 2 + rng() % 2; // up to 3
    std::vector<std::string> vnames, anames;
    for (std::size_t v = 0; v < n_vars; ++v)
      vnames.push_back("v" + std::to_string(v));
    for (std::size_t a = 0; a < n_values; ++a)
      anames.push_back(std::string(1, static_cast<char>('a' + a)));
    variable_universe vars(vnames);
    value_universe atoms(anames);
    const_domain dom(atoms);
    auto c = random_const_collection(rng, dom, vars, 0.7);

    normalize_stats st;
    auto out = kleene_normalize(dom, c, const_collection_budget(c), &st);
    CHECK(is_stable(dom, out.get()));

    std::size_t m = occurring_atom_count(c);
    std::size_t n_clusters = n_vars * (n_vars + 1) / 2;
    CHECK(st.updates <= n_clusters * (m * m + 1));

    auto meet_all = meet_of_parts(dom, c);
    auto cs = clusters(vars);
    for (std::size_t k = 0; k < cs.size(); ++k)
      CHECK(dom.leq(dom.restrict_to(meet_all, cs[k].vars()), out.parts()[k]));
  }
}

TEST_CASE("budget exhaustion raises the documented error") {
  fixture fx;
  collection<const_domain> c = decomposed_top(fx.dom, fx.vars);
  c.part(0, 2) = fx.val("(x in {a} and z in {a}) or (x in {b} and z in {b})");
  c.part(2, 1) = fx.val("(z in {a} and y in {a}) or (z in {b} and y in {b})");
  CHECK_THROWS_WITH_AS(kleene_normalize(fx.dom, c, iteration_budget(1, 1)),
                       "iteration budget exceeded", budget_exhausted_error);
}

TEST_CASE("budget fields must be positive") {
  CHECK_THROWS_AS(iteration_budget(0, 5), domain_error);
  CHECK_THROWS_AS(iteration_budget(5, 0), domain_error);
}
