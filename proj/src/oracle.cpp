#include "weakrel/oracle.hpp"

#include <algorithm>
#include <functional>

namespace weakrel {
namespace oracle {

namespace {
constexpr std::size_t k_enum_guard = 2'000'000;
} // namespace

finite_carrier finite_carrier::explicit_elements(const poset &p) {
  finite_carrier u;
  const auto &names = explicit_poset_elements(p);
  for (std::uint32_t i = 0; i < names.size(); ++i)
    u.elements.emplace_back(i);
  return u;
}

finite_carrier finite_carrier::int_window(std::int64_t lo, std::int64_t hi) {
  if (lo > hi)
    throw domain_error("integer window must satisfy lo <= hi");
  finite_carrier u;
  for (std::int64_t v = lo; v <= hi; ++v)
    u.elements.emplace_back(big_int(v));
  return u;
}

finite_carrier finite_carrier::strings_up_to(const std::string &alphabet, std::size_t max_len) {
  std::string sigma = alphabet;
  std::sort(sigma.begin(), sigma.end());
  sigma.erase(std::unique(sigma.begin(), sigma.end()), sigma.end());
  finite_carrier u;
  std::vector<std::string> layer{""};
  u.elements.emplace_back(std::string());
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<std::string> next;
    for (const auto &s : layer)
      for (char c : sigma) {
        next.push_back(s + c);
        u.elements.emplace_back(s + c);
        if (u.elements.size() > k_enum_guard)
          throw size_guard_error("string carrier guard exceeded");
      }
    layer = std::move(next);
  }
  return u;
}

finite_carrier finite_carrier::all_subsets(std::size_t universe_size) {
  if (universe_size > 16)
    throw size_guard_error("subset carrier guard exceeded");
  finite_carrier u;
  for (std::uint64_t m = 0; m < (std::uint64_t(1) << universe_size); ++m)
    u.elements.emplace_back(m);
  return u;
}

finite_carrier finite_carrier::multisets_up_to(std::size_t universe_size, std::int64_t max_mult) {
  finite_carrier u;
  std::vector<std::int64_t> cur(universe_size, 0);
  while (true) {
    u.elements.emplace_back(cur);
    if (u.elements.size() > k_enum_guard)
      throw size_guard_error("multiset carrier guard exceeded");
    std::size_t k = 0;
    while (k < universe_size && ++cur[k] > max_mult) {
      cur[k] = 0;
      ++k;
    }
    if (k == universe_size)
      break;
  }
  return u;
}

finite_carrier adequate_int_window(const directed_conj &c, const poset &p) {
  std::int64_t lo = 0, hi = 0;
  bool any = false;
  for (const auto &d : c.occurring_constants(p)) {
    std::int64_t v = static_cast<std::int64_t>(std::get<big_int>(d));
    if (!any) {
      lo = hi = v;
      any = true;
    } else {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!any) {
    lo = 0;
    hi = 0;
  }
  return finite_carrier::int_window(lo - 1, hi + 1);
}

bool satisfies(const poset &p, const directed_conj &c, const model &m) {
  if (c.bottom)
    return false;
  for (const auto &a : c.atoms) {
    switch (a.kind) {
    case directed_atom::tag::lower:
      if (!p.leq(a.d, m.at(a.x)))
        return false;
      break;
    case directed_atom::tag::upper:
      if (!p.leq(m.at(a.x), a.d))
        return false;
      break;
    case directed_atom::tag::var_le:
      if (!p.leq(m.at(a.x), m.at(a.y)))
        return false;
      break;
    }
  }
  return true;
}

bool satisfies(const poset &p, const disj_value &v, const model &m) {
  for (const auto &d : v.disjuncts)
    if (satisfies(p, d, m))
      return true;
  return false;
}

namespace {

// Walk every assignment of vars over the carrier.
void for_each_assignment(const var_set &vars, const finite_carrier &u,
                         const std::function<void(const model &)> &visit) {
  const auto &vs = vars.vars();
  std::size_t total = 1;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    total *= u.elements.size();
    if (total > k_enum_guard)
      throw size_guard_error("model enumeration guard exceeded");
  }
  std::vector<std::size_t> counter(vs.size(), 0);
  model m;
  while (true) {
    for (std::size_t i = 0; i < vs.size(); ++i)
      m[vs[i]] = u.elements[counter[i]];
    visit(m);
    std::size_t k = 0;
    while (k < counter.size() && ++counter[k] == u.elements.size()) {
      counter[k] = 0;
      ++k;
    }
    if (counter.empty() || k == counter.size())
      break;
  }
}

} // namespace

std::vector<model> enumerate_models(const poset &p, const directed_conj &c, const var_set &vars,
                                    const finite_carrier &u) {
  std::vector<model> out;
  if (c.bottom)
    return out;
  for_each_assignment(vars, u, [&](const model &m) {
    if (satisfies(p, c, m))
      out.push_back(m);
  });
  return out;
}

std::vector<model> enumerate_models(const poset &p, const disj_value &v, const var_set &vars,
                                    const finite_carrier &u) {
  std::vector<model> out;
  for_each_assignment(vars, u, [&](const model &m) {
    if (satisfies(p, v, m))
      out.push_back(m);
  });
  return out;
}

bool check_implies(const poset &p, const directed_conj &lhs, const directed_conj &rhs,
                   const var_set &vars, const finite_carrier &u) {
  bool ok = true;
  for_each_assignment(vars, u, [&](const model &m) {
    if (ok && satisfies(p, lhs, m) && !satisfies(p, rhs, m))
      ok = false;
  });
  return ok;
}

bool check_equiv(const poset &p, const directed_conj &lhs, const directed_conj &rhs,
                 const var_set &vars, const finite_carrier &u) {
  bool ok = true;
  for_each_assignment(vars, u, [&](const model &m) {
    if (ok && satisfies(p, lhs, m) != satisfies(p, rhs, m))
      ok = false;
  });
  return ok;
}

bool satisfiable_over(const poset &p, const directed_conj &c, const var_set &vars,
                      const finite_carrier &u) {
  if (c.bottom)
    return false;
  const auto &vs = vars.vars();
  std::vector<std::vector<std::size_t>> cand(vs.size());
  auto pos_of = [&](var_id v) {
    return static_cast<std::size_t>(
        std::lower_bound(vs.begin(), vs.end(), v) - vs.begin());
  };
  // Seed candidates from the unary bounds.
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t e = 0; e < u.elements.size(); ++e) {
      bool ok = true;
      for (const auto &a : c.atoms) {
        if (a.x != vs[i] || a.kind == directed_atom::tag::var_le)
          continue;
        if (a.kind == directed_atom::tag::lower && !p.leq(a.d, u.elements[e]))
          ok = false;
        if (a.kind == directed_atom::tag::upper && !p.leq(u.elements[e], a.d))
          ok = false;
        if (!ok)
          break;
      }
      if (ok)
        cand[i].push_back(e);
    }

  std::vector<std::pair<std::size_t, std::size_t>> var_edges; // x <= y as positions
  for (const auto &a : c.atoms)
    if (a.kind == directed_atom::tag::var_le)
      var_edges.emplace_back(pos_of(a.x), pos_of(a.y));

  // Arc consistency over the variable constraints.
  std::function<bool()> propagate = [&]() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto &[xi, yi] : var_edges) {
        auto keep_if = [&](std::vector<std::size_t> &cs, auto pred) {
          std::size_t before = cs.size();
          cs.erase(std::remove_if(cs.begin(), cs.end(),
                                  [&](std::size_t e) { return !pred(e); }),
                   cs.end());
          if (cs.size() != before)
            changed = true;
        };
        keep_if(cand[xi], [&](std::size_t e) {
          for (std::size_t f : cand[yi])
            if (p.leq(u.elements[e], u.elements[f]))
              return true;
          return false;
        });
        keep_if(cand[yi], [&](std::size_t f) {
          for (std::size_t e : cand[xi])
            if (p.leq(u.elements[e], u.elements[f]))
              return true;
          return false;
        });
      }
    }
    for (const auto &cs : cand)
      if (cs.empty())
        return false;
    return true;
  };

  std::function<bool()> search = [&]() {
    if (!propagate())
      return false;
    std::size_t pick = vs.size();
    for (std::size_t i = 0; i < vs.size(); ++i)
      if (cand[i].size() > 1 && (pick == vs.size() || cand[i].size() < cand[pick].size()))
        pick = i;
    if (pick == vs.size())
      return true; // all singletons and arc-consistent
    auto saved = cand;
    for (std::size_t e : saved[pick]) {
      cand = saved;
      cand[pick] = {e};
      if (search())
        return true;
    }
    cand = saved;
    return false;
  };
  return search();
}

graph::graph(std::size_t vertices,
             std::vector<std::pair<std::size_t, std::size_t>> raw_edges)
    : vertices(vertices) {
  for (auto [a, b] : raw_edges) {
    if (a == b)
      throw domain_error("graph must not contain self-loops");
    if (a >= vertices || b >= vertices)
      throw domain_error("edge endpoint out of range");
    edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

bool three_colorable(const graph &g) {
  std::vector<int> color(g.vertices, 0);
  std::function<bool(std::size_t)> go = [&](std::size_t v) {
    if (v == g.vertices)
      return true;
    for (int c = 0; c < 3; ++c) {
      color[v] = c;
      bool ok = true;
      for (auto [a, b] : g.edges)
        if (b == v && color[a] == c) {
          ok = false;
          break;
        }
      if (ok && go(v + 1))
        return true;
    }
    return false;
  };
  return go(0);
}

two_clause_cnf coloring_to_const(const graph &g) {
  // Atom indices over the sorted universe {a,b,c}: a=0, b=1, c=2.
  two_clause_cnf cnf;
  const std::uint64_t not_a = 0b110, not_b = 0b101, not_c = 0b011;
  for (auto [i, j] : g.edges)
    for (std::uint64_t mask : {not_a, not_b, not_c}) {
      cnf_clause cl;
      cl.props.push_back({static_cast<var_id>(i), mask});
      cl.props.push_back({static_cast<var_id>(j), mask});
      cnf.clauses.push_back(std::move(cl));
    }
  return cnf;
}

directed_reduction coloring_to_directed(const graph &g) {
  // Elements: per vertex i two fence elements lo1_i, lo2_i below its three
  // color elements v_i_c; per edge e two cap elements above its six
  // mixed-color top elements t_e_c_c'. The generating relation is layered, so
  // its reflexive-transitive closure never relates color elements of
  // different vertices and edge constraints cannot be satisfied through
  // transitive chains.
  std::vector<std::string> names;
  auto lo = [&](std::size_t i, int k) {
    return "lo" + std::to_string(k) + "_" + std::to_string(i);
  };
  auto col = [&](std::size_t i, int c) {
    return "v" + std::to_string(i) + "_" + std::to_string(c);
  };
  auto top_of = [&](std::size_t e, int c1, int c2) {
    return "t" + std::to_string(e) + "_" + std::to_string(c1) + std::to_string(c2);
  };
  auto cap = [&](std::size_t e, int k) {
    return "cap" + std::to_string(k) + "_" + std::to_string(e);
  };
  for (std::size_t i = 0; i < g.vertices; ++i) {
    names.push_back(lo(i, 1));
    names.push_back(lo(i, 2));
    for (int c = 1; c <= 3; ++c)
      names.push_back(col(i, c));
  }
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    for (int c1 = 1; c1 <= 3; ++c1)
      for (int c2 = 1; c2 <= 3; ++c2)
        if (c1 != c2)
          names.push_back(top_of(e, c1, c2));
    names.push_back(cap(e, 1));
    names.push_back(cap(e, 2));
  }

  const std::size_t n = names.size();
  auto index = [&](const std::string &s) {
    return static_cast<std::size_t>(
        std::find(names.begin(), names.end(), s) - names.begin());
  };
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  auto add = [&](const std::string &a, const std::string &b) { leq[index(a)][index(b)] = true; };
  for (std::size_t i = 0; i < n; ++i)
    leq[i][i] = true;
  for (std::size_t i = 0; i < g.vertices; ++i)
    for (int c = 1; c <= 3; ++c) {
      add(lo(i, 1), col(i, c));
      add(lo(i, 2), col(i, c));
    }
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    auto [i, j] = g.edges[e];
    for (int c1 = 1; c1 <= 3; ++c1)
      for (int c2 = 1; c2 <= 3; ++c2)
        if (c1 != c2) {
          add(col(i, c1), top_of(e, c1, c2));
          add(col(j, c2), top_of(e, c1, c2));
          add(top_of(e, c1, c2), cap(e, 1));
          add(top_of(e, c1, c2), cap(e, 2));
        }
  }
  // Transitive closure of the generating relation.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        if (leq[i][k])
          for (std::size_t j = 0; j < n; ++j)
            if (leq[k][j] && !leq[i][j]) {
              leq[i][j] = true;
              changed = true;
            }
  }

  std::vector<std::string> var_names;
  for (std::size_t i = 0; i < g.vertices; ++i)
    var_names.push_back("x" + std::to_string(i));
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    var_names.push_back("y" + std::to_string(e));

  directed_reduction out{make_explicit_poset(names, std::move(leq)),
                         variable_universe(var_names), directed_conj::top()};
  const poset &p = *out.order;
  auto elem = [&](const std::string &s) { return pvalue(explicit_poset_index(p, s)); };
  std::vector<directed_atom> atoms;
  for (std::size_t i = 0; i < g.vertices; ++i) {
    var_id xi = out.vars.id_of("x" + std::to_string(i));
    atoms.push_back(directed_atom::lower(elem(lo(i, 1)), xi));
    atoms.push_back(directed_atom::lower(elem(lo(i, 2)), xi));
  }
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    auto [i, j] = g.edges[e];
    var_id xi = out.vars.id_of("x" + std::to_string(i));
    var_id xj = out.vars.id_of("x" + std::to_string(j));
    var_id ye = out.vars.id_of("y" + std::to_string(e));
    atoms.push_back(directed_atom::var_le(xi, ye));
    atoms.push_back(directed_atom::var_le(xj, ye));
    atoms.push_back(directed_atom::upper(ye, elem(cap(e, 1))));
    atoms.push_back(directed_atom::upper(ye, elem(cap(e, 2))));
  }
  sort_atoms(p, atoms);
  out.conj = directed_conj::of(std::move(atoms));
  return out;
}

std::set<sigma> const_models(const const_domain &dom, const collection<const_domain> &c,
                             const var_set &vars) {
  return gamma_enumerate(dom, c, vars);
}

} // namespace oracle
} // namespace weakrel
