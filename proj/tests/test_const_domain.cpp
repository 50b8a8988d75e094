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
  decomposed<const_domain> dec(const std::string &text) const {
    return decompose(dom, vars, val(text));
  }
};

std::uint64_t mask(std::initializer_list<const char *> names, const value_universe &u) {
  std::uint64_t m = 0;
  for (const char *n : names)
    m |= std::uint64_t(1) << u.atom_index(n);
  return m;
}

// Independent route for table restriction: the DNF-based procedure on a
// formula rendering of the value.
const_value restrict_via_dnf(const const_domain &dom, const variable_universe &vars,
                             const const_value &v, const var_set &ys) {
  auto f = parse_const_formula(dom.render(v, vars), vars, dom.atoms());
  return dom.to_value(restrict_formula(f, ys));
}

} // namespace

TEST_CASE("restriction axioms hold on random values") {
  fixture fx;
  std::mt19937 rng(21);
  for (int i = 0; i < 200; ++i) {
    auto v = random_table(rng, fx.dom, fx.vars.all_vars());
    check_restriction_axioms(fx.dom, fx.vars, v, random_var_subset(rng, fx.vars),
                             random_var_subset(rng, fx.vars));
  }
}

TEST_CASE("table restriction agrees with the DNF-based procedure") {
  fixture fx;
  std::mt19937 rng(22);
  for (int i = 0; i < 200; ++i) {
    auto v = random_table(rng, fx.dom, fx.vars.all_vars());
    auto ys = random_var_subset(rng, fx.vars);
    if (v.is_bottom())
      continue; // a bottom renders as `bot`, whose DNF is empty either way
    CHECK(fx.dom.restrict_to(v, ys) == restrict_via_dnf(fx.dom, fx.vars, v, ys));
  }
}

TEST_CASE("decompose of top and bottom") {
  fixture fx;
  auto t = decompose(fx.dom, fx.vars, fx.dom.top());
  auto b = decompose(fx.dom, fx.vars, fx.dom.bottom());
  for (const auto &p : t.parts)
    CHECK(p.is_top());
  for (const auto &p : b.parts)
    CHECK(p.is_bottom());
}

TEST_CASE("decompose of a two-variable constraint") {
  fixture fx;
  auto d = fx.dec("x in {a} and y in {b}");
  CHECK(d.part(0, 0) == fx.val("x in {a}"));
  CHECK(d.part(1, 1) == fx.val("y in {b}"));
  CHECK(d.part(2, 2).is_top());
  CHECK(d.part(0, 1) == fx.val("x in {a} and y in {b}"));
  CHECK(d.part(0, 2) == fx.val("x in {a}"));
  CHECK(d.part(1, 2) == fx.val("y in {b}"));
}

TEST_CASE("bottom is neutral for the clusterwise join") {
  fixture fx;
  std::mt19937 rng(23);
  auto r = decompose(fx.dom, fx.vars, random_table(rng, fx.dom, fx.vars.all_vars()));
  auto b = decomposed_bottom(fx.dom, fx.vars);
  CHECK(equal2(fx.dom, join2(fx.dom, r, b), r));
}

TEST_CASE("clusterwise join collapses the three-way disjunction to top") {
  variable_universe vars({"x", "y", "z"});
  value_universe atoms({"a", "b", "c"});
  const_domain dom(atoms);
  auto r1 = decompose(dom, vars, dom.to_value(parse_const_formula("x in {a}", vars, atoms)));
  auto r2 = decompose(
      dom, vars, dom.to_value(parse_const_formula("y in {b} or z in {c}", vars, atoms)));
  auto j = join2(dom, r1, r2);
  for (const auto &p : j.parts)
    CHECK(p.is_top());
  CHECK(meet_of_parts(dom, j).is_top());
}

TEST_CASE("clusterwise join keeps the pairwise disjunction") {
  fixture fx;
  auto j = join2(fx.dom, fx.dec("x in {a} and y in {a}"), fx.dec("x in {b} and y in {b}"));
  CHECK(j.part(0, 1) == fx.val("(x in {a} and y in {a}) or (x in {b} and y in {b})"));
}

TEST_CASE("restrict2 examples") {
  fixture fx;
  std::mt19937 rng(24);
  auto r = decompose(fx.dom, fx.vars, random_table(rng, fx.dom, fx.vars.all_vars()));
  CHECK(equal2(fx.dom, restrict2(fx.dom, r, fx.vars.all_vars()), r));

  auto d = fx.dec("x in {a} and y in {b}");
  CHECK(restrict2(fx.dom, d, var_set{0}).part(0, 1) == fx.val("x in {a}"));

  auto nonbot = fx.dec("x in {a}");
  auto e = restrict2(fx.dom, nonbot, var_set{});
  for (const auto &p : e.parts)
    CHECK(p.is_top());
}

TEST_CASE("restrict2 is idempotent and antitone") {
  fixture fx;
  std::mt19937 rng(25);
  for (int i = 0; i < 100; ++i) {
    auto r = decompose(fx.dom, fx.vars, random_table(rng, fx.dom, fx.vars.all_vars()));
    auto y1 = random_var_subset(rng, fx.vars);
    auto y2 = random_var_subset(rng, fx.vars);
    auto once = restrict2(fx.dom, r, y1);
    CHECK(equal2(fx.dom, restrict2(fx.dom, once, y1), once));
    if (y1.subset_of(y2))
      CHECK(leq2(fx.dom, restrict2(fx.dom, r, y2), restrict2(fx.dom, r, y1)));
  }
}

TEST_CASE("meet2 examples") {
  fixture fx;
  std::mt19937 rng(26);
  auto r = decompose(fx.dom, fx.vars, random_table(rng, fx.dom, fx.vars.all_vars()));
  CHECK(equal2(fx.dom, meet2(fx.dom, r, decomposed_top(fx.dom, fx.vars)), r));

  variable_universe vars({"x"});
  value_universe atoms({"a", "b", "c"});
  const_domain dom(atoms);
  auto v1 = decompose(dom, vars, dom.to_value(parse_const_formula("x in {a,b}", vars, atoms)));
  auto v2 = decompose(dom, vars, dom.to_value(parse_const_formula("x in {b,c}", vars, atoms)));
  CHECK(meet2(dom, v1, v2).part(0, 0) ==
        dom.to_value(parse_const_formula("x in {b}", vars, atoms)));

  auto w1 = decompose(dom, vars, dom.to_value(parse_const_formula("x in {a}", vars, atoms)));
  auto w2 = decompose(dom, vars, dom.to_value(parse_const_formula("x in {b}", vars, atoms)));
  CHECK(meet2(dom, w1, w2).part(0, 0).is_bottom());
}

TEST_CASE("universe mismatch is a hard error") {
  fixture fx;
  variable_universe other({"x", "y"});
  auto a = decomposed_top(fx.dom, fx.vars);
  auto b = decomposed_top(fx.dom, other);
  CHECK_THROWS_AS(join2(fx.dom, a, b), domain_error);
}

TEST_CASE("meets of cluster values decompose back to themselves") {
  // Exhaustive gamma check at three variables, two values: the meet of random
  // per-cluster tables is recovered by restriction to every cluster.
  fixture fx;
  std::mt19937 rng(27);
  for (int i = 0; i < 150; ++i) {
    auto c = random_const_collection(rng, fx.dom, fx.vars);
    auto r = meet_of_parts(fx.dom, c);
    auto d = decompose(fx.dom, fx.vars, r);
    CHECK(fx.dom.equal(meet_of_parts(fx.dom, d), r));
    auto lhs = gamma_enumerate(fx.dom, d, fx.vars.all_vars());
    auto rhs = gamma_enumerate(fx.dom, decompose(fx.dom, fx.vars, r), fx.vars.all_vars());
    CHECK(lhs == rhs);
    // every decomposed part is the exact restriction
    auto cs = clusters(fx.vars);
    for (std::size_t k = 0; k < cs.size(); ++k)
      CHECK(d.parts[k] == fx.dom.restrict_to(r, cs[k].vars()));
  }
}

TEST_CASE("the clusterwise-join law holds for tables") {
  fixture fx;
  std::mt19937 rng(28);
  for (int i = 0; i < 200; ++i) {
    auto r1 = random_table(rng, fx.dom, fx.vars.all_vars());
    auto r2 = random_table(rng, fx.dom, fx.vars.all_vars());
    CHECK(check_clusterwise_join_law(fx.dom, fx.vars, r1, r2));
  }
}

TEST_CASE("join2 is the least upper bound among decomposed values") {
  variable_universe vars({"x", "y"});
  value_universe atoms({"a", "b"});
  const_domain dom(atoms);
  // enumerate all decomposed values over two variables
  std::vector<decomposed<const_domain>> all;
  const std::uint32_t base = 3; // a, b, @other
  for (std::uint32_t sx = 0; sx < 8; ++sx)
    for (std::uint32_t sy = 0; sy < 8; ++sy)
      for (std::uint32_t pxy = 0; pxy < 512; ++pxy) {
        auto rows_of = [](std::uint32_t mask, std::uint32_t) {
          std::vector<std::uint32_t> rows;
          for (std::uint32_t r = 0; r < 32; ++r)
            if ((mask >> r) & 1)
              rows.push_back(r);
          return rows;
        };
        collection<const_domain> c;
        c.universe = &vars;
        c.parts.push_back(const_value::from_rows(base, {0}, rows_of(sx, 3)));
        c.parts.push_back(const_value::from_rows(base, {1}, rows_of(sy, 3)));
        c.parts.push_back(const_value::from_rows(base, {0, 1}, rows_of(pxy, 9)));
        all.push_back(c);
      }
  std::mt19937 rng(29);
  for (int i = 0; i < 20; ++i) {
    const auto &r1 = all[rng() % all.size()];
    const auto &r2 = all[rng() % all.size()];
    auto j = join2(dom, r1, r2);
    CHECK(leq2(dom, r1, j));
    CHECK(leq2(dom, r2, j));
    for (const auto &u : all)
      if (leq2(dom, r1, u) && leq2(dom, r2, u))
        CHECK(leq2(dom, j, u));
  }
}

TEST_CASE("sat_exact basics") {
  value_universe atoms({"a", "b", "c"});
  const_domain dom(atoms);
  two_clause_cnf empty;
  CHECK(sat_exact(empty, dom, var_set{0, 1}));

  two_clause_cnf bot;
  bot.bottom = true;
  CHECK_FALSE(sat_exact(bot, dom, var_set{0}));
}

TEST_CASE("sat_exact agrees with DNF expansion on random instances") {
  std::mt19937 rng(30);
  for (int i = 0; i < 500; ++i) {
    std::size_t n_vars = 2 + rng() % 3;       // up to 4
    std::size_t n_values = 2 + rng() % 2;     // up to 3
    std::vector<std::string> names;
    for (std::size_t v = 0; v < n_values; ++v)
      names.push_back(std::string(1, static_cast<char>('a' + v)));
    value_universe atoms(names);
    const_domain dom(atoms);
    two_clause_cnf cnf;
    std::size_t n_clauses = rng() % 6;
    for (std::size_t k = 0; k < n_clauses; ++k) {
      cnf_clause cl;
      var_id x = rng() % n_vars;
      cl.props.push_back({x, rng() % (std::uint64_t(1) << atoms.atom_count())});
      if (rng() % 2) {
        var_id y = rng() % n_vars;
        if (y != x)
          cl.props.push_back({y, rng() % (std::uint64_t(1) << atoms.atom_count())});
      }
      cnf.clauses.push_back(std::move(cl));
    }
    std::vector<var_id> vs(n_vars);
    for (std::size_t v = 0; v < n_vars; ++v)
      vs[v] = static_cast<var_id>(v);
    var_set vars(vs);

    // independent route: expand the conjunction of clauses to DNF, pruning
    // conjunctions with an empty intersected proposition
    std::vector<std::map<var_id, std::uint64_t>> dnf{{}};
    for (const auto &cl : cnf.clauses) {
      std::vector<std::map<var_id, std::uint64_t>> next;
      for (const auto &conj : dnf)
        for (const auto &pr : cl.props) {
          auto merged = conj;
          auto it = merged.find(pr.var);
          if (it == merged.end())
            merged[pr.var] = pr.atoms;
          else
            it->second &= pr.atoms;
          next.push_back(std::move(merged));
        }
      dnf = std::move(next);
    }
    bool dnf_nonempty = false;
    for (const auto &conj : dnf) {
      bool alive = true;
      for (const auto &[v, mask] : conj)
        if ((mask & atoms.full_mask()) == 0)
          alive = false;
      if (alive)
        dnf_nonempty = true;
    }
    CHECK(sat_exact(cnf, dom, vars) == dnf_nonempty);
  }
}

TEST_CASE("triangle coloring constraints are satisfiable, the complete graph is not") {
  value_universe atoms({"a", "b", "c"});
  const_domain dom(atoms);
  auto clause_set = [&](const std::vector<std::pair<var_id, var_id>> &edges) {
    two_clause_cnf cnf;
    std::uint64_t not_a = mask({"b", "c"}, atoms), not_b = mask({"a", "c"}, atoms),
                  not_c = mask({"a", "b"}, atoms);
    for (auto [i, j] : edges)
      for (std::uint64_t m : {not_a, not_b, not_c})
        cnf.clauses.push_back({{{i, m}, {j, m}}});
    return cnf;
  };
  auto triangle = clause_set({{0, 1}, {0, 2}, {1, 2}});
  CHECK(sat_exact(triangle, dom, var_set{0, 1, 2}));
  auto k4 = clause_set({{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  CHECK_FALSE(sat_exact(k4, dom, var_set{0, 1, 2, 3}));
}

TEST_CASE("gamma_enumerate basics") {
  fixture fx;
  CHECK(gamma_enumerate(fx.dom, decomposed_bottom(fx.dom, fx.vars), fx.vars.all_vars()).empty());

  variable_universe one({"x"});
  auto tops = gamma_enumerate(fx.dom, decomposed_top(fx.dom, one), one.all_vars());
  CHECK(tops.size() == 3); // a, b, @other

  auto models = gamma_enumerate(fx.dom, fx.dec("x in {a} and y in {b}"), fx.vars.all_vars());
  CHECK(models.size() == 3); // z ranges freely
  for (const auto &m : models) {
    CHECK(m.at(0) == fx.atoms.atom_index("a"));
    CHECK(m.at(1) == fx.atoms.atom_index("b"));
  }
}
