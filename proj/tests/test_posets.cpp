#include <doctest.h>

#include <random>

#include "weakrel/poset.hpp"

using namespace weakrel;

namespace {

std::vector<pvalue> sample_values(std::mt19937 &rng, const poset &p, std::size_t count) {
  std::vector<pvalue> out;
  const std::string n = p.name();
  for (std::size_t i = 0; i < count; ++i) {
    if (n == "subset") {
      out.emplace_back(std::uint64_t(rng() % 8));
    } else if (n == "int") {
      out.emplace_back(big_int(static_cast<std::int64_t>(rng() % 21) - 10));
    } else if (n == "multiset") {
      out.emplace_back(std::vector<std::int64_t>{static_cast<std::int64_t>(rng() % 3),
                                                 static_cast<std::int64_t>(rng() % 3)});
    } else {
      std::string s;
      std::size_t len = rng() % 5;
      for (std::size_t k = 0; k < len; ++k)
        s += static_cast<char>('a' + rng() % 2);
      out.emplace_back(s);
    }
  }
  return out;
}

void check_order_axioms(const poset &p, std::mt19937 &rng) {
  auto vs = sample_values(rng, p, 1000);
  for (std::size_t i = 0; i + 2 < vs.size(); i += 3) {
    const auto &a = vs[i], &b = vs[i + 1], &c = vs[i + 2];
    CHECK(p.leq(a, a));
    if (p.leq(a, b) && p.leq(b, a))
      CHECK(p.compare_total(a, b) == 0);
    if (p.leq(a, b) && p.leq(b, c))
      CHECK(p.leq(a, c));
  }
}

void check_lattice_laws(const poset &p, std::mt19937 &rng) {
  auto vs = sample_values(rng, p, 600);
  for (std::size_t i = 0; i + 1 < vs.size(); i += 2) {
    const auto &a = vs[i], &b = vs[i + 1];
    pvalue j = p.join_checked(a, b);
    pvalue m = p.meet_checked(a, b);
    CHECK(p.leq(a, j));
    CHECK(p.leq(b, j));
    CHECK(p.leq(m, a));
    CHECK(p.leq(m, b));
    // absorption and consistency
    CHECK(p.compare_total(p.meet_checked(a, j), a) == 0);
    CHECK(p.compare_total(p.join_checked(a, m), a) == 0);
    CHECK(p.compare_total(p.join_checked(a, b), p.join_checked(b, a)) == 0);
    CHECK(p.leq(a, b) == (p.compare_total(j, b) == 0));
  }
}

} // namespace

TEST_CASE("order axioms hold on sampled values") {
  std::mt19937 rng(61);
  for (const char *spec : {"subset(a,b,c)", "int", "multiset(a,b)", "prefix", "substring",
                           "scattered"}) {
    auto p = make_poset(spec);
    check_order_axioms(*p, rng);
  }
}

TEST_CASE("lattice laws for subsets, integers, and multisets") {
  std::mt19937 rng(62);
  for (const char *spec : {"subset(a,b,c)", "int", "multiset(a,b)"}) {
    auto p = make_poset(spec);
    CHECK(p->kind() == poset_kind::lattice);
    check_lattice_laws(*p, rng);
  }
}

TEST_CASE("subset examples") {
  auto p = make_poset("subset(a,b,c)");
  pvalue ab = p->parse_value("{a,b}");
  pvalue bc = p->parse_value("{b,c}");
  CHECK(p->print(p->meet_checked(ab, bc)) == "{b}");
  CHECK(p->print(p->join_checked(p->parse_value("{a}"), p->parse_value("{c}"))) == "{a,c}");
  CHECK(p->print(*p->least()) == "{}");
  CHECK(p->print(*p->greatest()) == "{a,b,c}");
}

TEST_CASE("integer examples") {
  auto p = make_poset("int");
  CHECK(p->print(p->meet_checked(p->parse_value("3"), p->parse_value("7"))) == "3");
  CHECK(p->print(p->join_checked(p->parse_value("3"), p->parse_value("7"))) == "7");
  CHECK_FALSE(p->least().has_value());
  CHECK_FALSE(p->greatest().has_value());
  // arbitrary precision
  pvalue huge = p->parse_value("123456789012345678901234567890");
  CHECK(p->leq(p->parse_value("17"), huge));
  CHECK(p->print(huge) == "123456789012345678901234567890");
  CHECK_THROWS_AS(p->parse_value("17x"), domain_error);
}

TEST_CASE("multiset examples") {
  auto p = make_poset("multiset(a,b)");
  pvalue m1 = p->parse_value("{{a:2,b:1}}");
  pvalue m2 = p->parse_value("{{a:1,b:3}}");
  CHECK(p->print(p->meet_checked(m1, m2)) == "{{a:1,b:1}}");
  CHECK(p->print(p->join_checked(m1, m2)) == "{{a:2,b:3}}");
  CHECK(p->print(*p->least()) == "{{}}");
  CHECK_FALSE(p->greatest().has_value());
  CHECK_THROWS_AS(p->parse_value("{{a:-1}}"), domain_error);
}

TEST_CASE("string order examples") {
  auto prefix = make_poset("prefix");
  auto substring = make_poset("substring");
  auto scattered = make_poset("scattered");
  CHECK(prefix->leq(pvalue(std::string("ab")), pvalue(std::string("abcd"))));
  CHECK(substring->leq(pvalue(std::string("bc")), pvalue(std::string("abcde"))));
  CHECK(scattered->leq(pvalue(std::string("bd")), pvalue(std::string("abcde"))));
  CHECK_FALSE(prefix->leq(pvalue(std::string("bc")), pvalue(std::string("abcd"))));
  CHECK_FALSE(substring->leq(pvalue(std::string("bd")), pvalue(std::string("abcde"))));

  CHECK(prefix->kind() == poset_kind::bounded_complete);
  CHECK(substring->kind() == poset_kind::general);
  CHECK(scattered->kind() == poset_kind::general);
}

TEST_CASE("prefix meet is the longest common prefix") {
  auto p = make_poset("prefix");
  CHECK(std::get<std::string>(p->meet_checked(pvalue(std::string("abc")),
                                              pvalue(std::string("abd")))) == "ab");
  CHECK_FALSE(p->join(pvalue(std::string("abc")), pvalue(std::string("abd"))).has_value());
  CHECK_THROWS_AS(p->join_checked(pvalue(std::string("abc")), pvalue(std::string("abd"))),
                  unsupported_operation);
  CHECK(std::get<std::string>(*p->least()).empty());
}

TEST_CASE("substring and scattered orders do not provide meets or joins") {
  for (const char *spec : {"substring", "scattered"}) {
    auto p = make_poset(spec);
    CHECK_FALSE(p->meet(pvalue(std::string("ab")), pvalue(std::string("ba"))).has_value());
    CHECK_FALSE(p->join(pvalue(std::string("ab")), pvalue(std::string("ba"))).has_value());
  }
}

TEST_CASE("common-bound queries") {
  auto prefix = make_poset("prefix");
  std::vector<pvalue> incompatible{pvalue(std::string("abc")), pvalue(std::string("abd"))};
  CHECK_FALSE(prefix->has_common_upper_bound(incompatible));
  CHECK(prefix->has_common_lower_bound(incompatible));

  std::vector<pvalue> chain{pvalue(std::string("ab")), pvalue(std::string("abc"))};
  CHECK(prefix->has_common_upper_bound(chain));

  for (const char *spec : {"substring", "scattered"}) {
    auto p = make_poset(spec);
    CHECK(p->has_common_upper_bound(incompatible)); // concatenation witness
    CHECK(p->has_common_lower_bound(incompatible));
  }
}

TEST_CASE("prefix bounded sets are exactly chains") {
  auto p = make_poset("prefix");
  // enumerate all strings up to length 4 over two symbols
  std::vector<std::string> all{""};
  for (std::size_t i = 0; i < all.size(); ++i)
    if (all[i].size() < 4) {
      all.push_back(all[i] + "a");
      all.push_back(all[i] + "b");
    }
  std::mt19937 rng(63);
  for (int t = 0; t < 500; ++t) {
    std::vector<pvalue> s;
    std::size_t k = 1 + rng() % 3;
    for (std::size_t i = 0; i < k; ++i)
      s.emplace_back(all[rng() % all.size()]);
    bool chain = true;
    for (const auto &a : s)
      for (const auto &b : s)
        if (!p->leq(a, b) && !p->leq(b, a))
          chain = false;
    CHECK(p->has_common_upper_bound(s) == chain);
    if (p->has_common_upper_bound(s)) {
      // the least upper bound of a bounded set is its longest element
      const pvalue *longest = &s.front();
      for (const auto &v : s)
        if (std::get<std::string>(v).size() > std::get<std::string>(*longest).size())
          longest = &v;
      for (const auto &v : s)
        CHECK(p->leq(v, *longest));
    }
  }
}

TEST_CASE("explicit posets validate their matrix") {
  CHECK_THROWS_AS(make_explicit_poset({"a", "b"}, {{true, false}, {false, false}}), domain_error);
  CHECK_THROWS_AS(make_explicit_poset({"a", "b"}, {{true, true}, {true, true}}), domain_error);
  // 2-chain is a lattice
  auto p = make_explicit_poset({"lo", "hi"}, {{true, true}, {false, true}});
  CHECK(p->kind() == poset_kind::lattice);
  CHECK(p->leq(p->parse_value("lo"), p->parse_value("hi")));
  // diamond without middle order: {bot, l, r} with l,r incomparable has no join
  auto q = make_explicit_poset({"bot", "l", "r"},
                               {{true, true, true}, {false, true, false}, {false, false, true}});
  CHECK(q->kind() == poset_kind::general);
  CHECK_FALSE(q->join(q->parse_value("l"), q->parse_value("r")).has_value());
}

TEST_CASE("order selection by name") {
  CHECK(make_poset("subset(a,b,c)")->name() == "subset");
  CHECK(make_poset("subset:a,b,c")->name() == "subset");
  CHECK(make_poset("int")->name() == "int");
  CHECK(make_poset("multiset:a,b")->name() == "multiset");
  CHECK(make_poset("prefix")->name() == "prefix");
  CHECK_THROWS_AS(make_poset("octagon"), domain_error);
}
