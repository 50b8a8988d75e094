#include <doctest.h>

#include <random>

#include "weakrel/const_domain.hpp"

using namespace weakrel;

namespace {

value_universe abcd() { return value_universe({"a", "b", "c", "d"}); }

std::uint64_t mask_of(const value_universe &u, std::initializer_list<const char *> names) {
  std::uint64_t m = 0;
  for (const char *n : names)
    m |= std::uint64_t(1) << u.atom_index(n);
  return m;
}

const_formula random_formula(std::mt19937 &rng, const value_universe &u, int depth) {
  if (depth == 0 || rng() % 3 == 0) {
    var_id v = rng() % 3;
    std::uint64_t mask = rng() % (std::uint64_t(1) << u.atom_count());
    return const_formula::prop(v, mask);
  }
  std::vector<const_formula> cs;
  std::size_t n = 2 + rng() % 2;
  for (std::size_t i = 0; i < n; ++i)
    cs.push_back(random_formula(rng, u, depth - 1));
  return rng() % 2 ? const_formula::conj(std::move(cs)) : const_formula::disj(std::move(cs));
}

} // namespace

TEST_CASE("eval follows the three semantic equations") {
  value_universe u = abcd();
  sigma s(3);
  s.bind(0, u.atom_index("a"));
  s.bind(1, u.atom_index("d"));
  s.bind(2, u.atom_index("c"));

  CHECK(eval(const_formula::top(), s));
  CHECK_FALSE(eval(const_formula::bot(), s));

  sigma sc(1);
  sc.bind(0, u.atom_index("c"));
  CHECK_FALSE(eval(const_formula::prop(0, mask_of(u, {"a", "b"})), sc));

  // (x in {a}) and (y in {b} or z in {c})
  auto f = const_formula::conj(
      {const_formula::prop(0, mask_of(u, {"a"})),
       const_formula::disj({const_formula::prop(1, mask_of(u, {"b"})),
                            const_formula::prop(2, mask_of(u, {"c"}))})});
  CHECK(eval(f, s));
}

TEST_CASE("eval rejects unbound variables") {
  sigma s(2);
  s.bind(0, 0);
  CHECK_THROWS_AS(eval(const_formula::prop(1, 1), s), domain_error);
}

TEST_CASE("restrict_formula drops dead conjunctions and foreign propositions") {
  value_universe u({"a", "b"});
  const_domain dom(u);
  // (x in {a} and y in {}) or (x in {b})  restricted to {x}  ==  x in {b}
  auto f = const_formula::disj(
      {const_formula::conj({const_formula::prop(0, mask_of(u, {"a"})), const_formula::prop(1, 0)}),
       const_formula::prop(0, mask_of(u, {"b"}))});
  auto r = restrict_formula(f, var_set{0});
  CHECK(dom.to_value(r) == dom.to_value(const_formula::prop(0, mask_of(u, {"b"}))));

  // (x in {a} and y in {b}) restricted to {y}  ==  y in {b}
  auto g = const_formula::conj(
      {const_formula::prop(0, mask_of(u, {"a"})), const_formula::prop(1, mask_of(u, {"b"}))});
  CHECK(dom.to_value(restrict_formula(g, var_set{1})) ==
        dom.to_value(const_formula::prop(1, mask_of(u, {"b"}))));
}

TEST_CASE("restrict_formula to the formula's own variables is the identity") {
  value_universe u({"a", "b"});
  const_domain dom(u);
  std::mt19937 rng(11);
  for (int i = 0; i < 100; ++i) {
    auto f = random_formula(rng, u, 3);
    CHECK(dom.to_value(restrict_formula(f, formula_vars(f))) == dom.to_value(f));
  }
}

TEST_CASE("restrict_formula distributes over disjunction") {
  value_universe u({"a", "b"});
  const_domain dom(u);
  std::mt19937 rng(12);
  for (int i = 0; i < 200; ++i) {
    auto f1 = random_formula(rng, u, 2);
    auto f2 = random_formula(rng, u, 2);
    var_set y;
    for (var_id v = 0; v < 3; ++v)
      if (rng() % 2)
        y = y.unite(var_set{v});
    auto lhs = restrict_formula(const_formula::disj({f1, f2}), y);
    auto rhs = const_formula::disj({restrict_formula(f1, y), restrict_formula(f2, y)});
    CHECK(dom.to_value(lhs) == dom.to_value(rhs));
  }
}

TEST_CASE("formula text syntax round-trips") {
  variable_universe vars({"x", "y", "z"});
  value_universe u({"a", "b"});
  const_domain dom(u);
  for (const char *text : {"x in {a,b}", "bot", "top", "(x in {a} and y in {b}) or z in {@other}",
                           "x in {}"}) {
    auto f = parse_const_formula(text, vars, u);
    auto again = parse_const_formula(format_const_formula(f, vars, u), vars, u);
    CHECK(dom.to_value(f) == dom.to_value(again));
  }
  CHECK_THROWS_AS(parse_const_formula("x in {q}", vars, u), domain_error);
  CHECK_THROWS_AS(parse_const_formula("w in {a}", vars, u), domain_error);
  CHECK_THROWS_AS(parse_const_formula("x in {a} or", vars, u), parse_error);
}

TEST_CASE("pair normal form of bottom is empty") {
  value_universe u({"a", "b"});
  const_domain dom(u);
  auto pn = pair_normal(dom, const_formula::bot(), cluster(0, 1));
  CHECK(pn.tuples.empty());
}

TEST_CASE("pair normal form enumerates satisfying pairs") {
  value_universe u({"a", "b"});
  const_domain dom(u);
  std::uint32_t a = u.atom_index("a"), b = u.atom_index("b"), o = u.bullet();

  // (x in {a,b}) and (y in {a})
  auto f = const_formula::conj(
      {const_formula::prop(0, mask_of(u, {"a", "b"})), const_formula::prop(1, mask_of(u, {"a"}))});
  auto pn = pair_normal(dom, f, cluster(0, 1));
  CHECK(pn.tuples == std::vector<std::vector<std::uint32_t>>{{a, a}, {b, a}});

  // (x in {a}) or (y in {b}): the reserved atom participates as an ordinary
  // value, so the pairs over {a,b} are joined by the @other rows.
  auto g = const_formula::disj(
      {const_formula::prop(0, mask_of(u, {"a"})), const_formula::prop(1, mask_of(u, {"b"}))});
  auto pg = pair_normal(dom, g, cluster(0, 1));
  std::vector<std::vector<std::uint32_t>> plain, bullet_rows;
  for (const auto &t : pg.tuples)
    (t[0] == o || t[1] == o ? bullet_rows : plain).push_back(t);
  CHECK(plain == std::vector<std::vector<std::uint32_t>>{{a, a}, {a, b}, {b, b}});
  CHECK(bullet_rows == std::vector<std::vector<std::uint32_t>>{{a, o}, {o, b}});
}

TEST_CASE("pair normal form is canonical for cluster formulas") {
  value_universe u({"a", "b"});
  const_domain dom(u);
  variable_universe vars({"x", "y"});
  std::mt19937 rng(13);
  for (int i = 0; i < 200; ++i) {
    auto f1 = random_formula(rng, u, 2);
    auto f2 = random_formula(rng, u, 2);
    // restrict both to the cluster so pair_normal applies
    auto g1 = restrict_formula(f1, var_set{0, 1});
    auto g2 = restrict_formula(f2, var_set{0, 1});
    bool same_normal = pair_normal(dom, g1, cluster(0, 1)) == pair_normal(dom, g2, cluster(0, 1));
    auto m1 = gamma_enumerate(dom, decompose(dom, vars, dom.to_value(g1)), vars.all_vars());
    auto m2 = gamma_enumerate(dom, decompose(dom, vars, dom.to_value(g2)), vars.all_vars());
    CHECK(same_normal == (m1 == m2));
  }
}
