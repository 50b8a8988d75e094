#include "weakrel/directed.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace weakrel {

var_set directed_conj::vars() const {
  std::vector<var_id> vs;
  for (const auto &a : atoms) {
    vs.push_back(a.x);
    if (a.kind == directed_atom::tag::var_le)
      vs.push_back(a.y);
  }
  return var_set(std::move(vs));
}

std::vector<pvalue> directed_conj::occurring_constants(const poset &p) const {
  std::vector<pvalue> out;
  for (const auto &a : atoms)
    if (a.kind != directed_atom::tag::var_le)
      out.push_back(a.d);
  std::sort(out.begin(), out.end(),
            [&](const pvalue &x, const pvalue &y) { return p.compare_total(x, y) < 0; });
  out.erase(std::unique(out.begin(), out.end(),
                        [&](const pvalue &x, const pvalue &y) {
                          return p.compare_total(x, y) == 0;
                        }),
            out.end());
  return out;
}

int compare_atoms(const poset &p, const directed_atom &a, const directed_atom &b) {
  if (a.kind != b.kind)
    return a.kind < b.kind ? -1 : 1;
  if (a.x != b.x)
    return a.x < b.x ? -1 : 1;
  if (a.kind == directed_atom::tag::var_le)
    return a.y < b.y ? -1 : a.y == b.y ? 0 : 1;
  return p.compare_total(a.d, b.d);
}

bool atoms_equal(const poset &p, const directed_atom &a, const directed_atom &b) {
  return compare_atoms(p, a, b) == 0;
}

void sort_atoms(const poset &p, std::vector<directed_atom> &atoms) {
  std::sort(atoms.begin(), atoms.end(), [&](const directed_atom &a, const directed_atom &b) {
    return compare_atoms(p, a, b) < 0;
  });
  atoms.erase(std::unique(atoms.begin(), atoms.end(),
                          [&](const directed_atom &a, const directed_atom &b) {
                            return compare_atoms(p, a, b) == 0;
                          }),
              atoms.end());
}

bool conj_equal(const poset &p, const directed_conj &a, const directed_conj &b) {
  if (a.bottom || b.bottom)
    return a.bottom == b.bottom;
  if (a.atoms.size() != b.atoms.size())
    return false;
  for (std::size_t i = 0; i < a.atoms.size(); ++i)
    if (!atoms_equal(p, a.atoms[i], b.atoms[i]))
      return false;
  return true;
}

directed_conj conj_and(const poset &p, const directed_conj &a, const directed_conj &b) {
  if (a.bottom || b.bottom)
    return directed_conj::bot();
  std::vector<directed_atom> atoms = a.atoms;
  atoms.insert(atoms.end(), b.atoms.begin(), b.atoms.end());
  sort_atoms(p, atoms);
  return directed_conj::of(std::move(atoms));
}

namespace {

// Nodes of the closure graph: variables first, then occurring constants in
// canonical order.
struct closure_graph {
  std::vector<var_id> vars;
  std::vector<pvalue> consts;
  std::vector<std::vector<bool>> reach;

  std::size_t size() const { return vars.size() + consts.size(); }
  std::size_t var_node(var_id v) const {
    return static_cast<std::size_t>(
        std::lower_bound(vars.begin(), vars.end(), v) - vars.begin());
  }
  bool is_var(std::size_t n) const { return n < vars.size(); }
  const pvalue &const_of(std::size_t n) const { return consts[n - vars.size()]; }
};

closure_graph build_closure(const poset &p, const directed_conj &c) {
  closure_graph g;
  g.vars = c.vars().vars();
  g.consts = c.occurring_constants(p);
  const std::size_t n = g.size();
  g.reach.assign(n, std::vector<bool>(n, false));

  auto const_node = [&](const pvalue &d) {
    for (std::size_t i = 0; i < g.consts.size(); ++i)
      if (p.compare_total(g.consts[i], d) == 0)
        return g.vars.size() + i;
    throw domain_error("constant not registered in closure graph");
  };

  for (const auto &a : c.atoms) {
    switch (a.kind) {
    case directed_atom::tag::lower:
      g.reach[const_node(a.d)][g.var_node(a.x)] = true;
      break;
    case directed_atom::tag::upper:
      g.reach[g.var_node(a.x)][const_node(a.d)] = true;
      break;
    case directed_atom::tag::var_le:
      g.reach[g.var_node(a.x)][g.var_node(a.y)] = true;
      break;
    }
  }
  // Order edges among the occurring constants.
  for (std::size_t i = 0; i < g.consts.size(); ++i)
    for (std::size_t j = 0; j < g.consts.size(); ++j)
      if (i != j && p.leq(g.consts[i], g.consts[j]))
        g.reach[g.vars.size() + i][g.vars.size() + j] = true;

  // Transitive closure by iterated boolean squaring.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        if (g.reach[i][k])
          for (std::size_t j = 0; j < n; ++j)
            if (g.reach[k][j] && !g.reach[i][j]) {
              g.reach[i][j] = true;
              changed = true;
            }
  }
  return g;
}

} // namespace

directed_conj nf0(const poset &p, const directed_conj &c) {
  if (c.bottom)
    return directed_conj::bot();
  closure_graph g = build_closure(p, c);
  const std::size_t nv = g.vars.size();

  // A closure pair of constants must also hold in P.
  for (std::size_t i = 0; i < g.consts.size(); ++i)
    for (std::size_t j = 0; j < g.consts.size(); ++j)
      if (g.reach[nv + i][nv + j] && !p.leq(g.consts[i], g.consts[j]))
        return directed_conj::bot();

  // Per-variable bound sets from the closure.
  std::vector<std::vector<pvalue>> lowers(nv), uppers(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    for (std::size_t i = 0; i < g.consts.size(); ++i) {
      if (g.reach[nv + i][v])
        lowers[v].push_back(g.consts[i]);
      if (g.reach[v][nv + i])
        uppers[v].push_back(g.consts[i]);
    }
    if (lowers[v].size() >= 2 && !p.has_common_upper_bound(lowers[v]))
      return directed_conj::bot();
    if (uppers[v].size() >= 2 && !p.has_common_lower_bound(uppers[v]))
      return directed_conj::bot();
  }

  std::vector<directed_atom> out;
  for (std::size_t v = 0; v < nv; ++v) {
    for (const auto &a : lowers[v]) {
      bool dominated = false;
      for (const auto &b : lowers[v])
        if (p.compare_total(a, b) != 0 && p.leq(a, b)) {
          dominated = true;
          break;
        }
      if (!dominated)
        out.push_back(directed_atom::lower(a, g.vars[v]));
    }
    for (const auto &b : uppers[v]) {
      bool dominated = false;
      for (const auto &a : uppers[v])
        if (p.compare_total(a, b) != 0 && p.leq(a, b)) {
          dominated = true;
          break;
        }
      if (!dominated)
        out.push_back(directed_atom::upper(g.vars[v], b));
    }
    for (std::size_t w = 0; w < nv; ++w)
      if (v != w && g.reach[v][w])
        out.push_back(directed_atom::var_le(g.vars[v], g.vars[w]));
  }
  sort_atoms(p, out);
  return directed_conj::of(std::move(out));
}

namespace {

// One merge pass: a single lower bound per variable (join of the set) and a
// single upper bound (meet of the set); variable constraints pass through.
directed_conj merge_bounds(const poset &p, const directed_conj &c0) {
  std::map<var_id, std::vector<pvalue>> lowers, uppers;
  std::vector<directed_atom> out;
  for (const auto &a : c0.atoms) {
    switch (a.kind) {
    case directed_atom::tag::lower:
      lowers[a.x].push_back(a.d);
      break;
    case directed_atom::tag::upper:
      uppers[a.x].push_back(a.d);
      break;
    case directed_atom::tag::var_le:
      out.push_back(a);
      break;
    }
  }
  for (auto &[v, ds] : lowers) {
    pvalue merged = ds.front();
    for (std::size_t i = 1; i < ds.size(); ++i)
      merged = p.join_checked(merged, ds[i]);
    out.push_back(directed_atom::lower(std::move(merged), v));
  }
  for (auto &[v, ds] : uppers) {
    pvalue merged = ds.front();
    for (std::size_t i = 1; i < ds.size(); ++i)
      merged = p.meet_checked(merged, ds[i]);
    out.push_back(directed_atom::upper(v, std::move(merged)));
  }
  sort_atoms(p, out);
  return directed_conj::of(std::move(out));
}

} // namespace

directed_conj nf1(const poset &p, const directed_conj &c) {
  if (p.kind() == poset_kind::general)
    throw unsupported_operation("nf1 requires lattice or bounded-complete+bounded input");

  // Closure and bound merging feed each other: a merged bound is a new
  // constant the transitive closure can route through. Iterate to a fixpoint;
  // the constants stay within the meet/join closure of the occurring ones.
  directed_conj cur = c;
  for (int guard = 0;; ++guard) {
    directed_conj c0 = nf0(p, cur);
    if (c0.bottom)
      return c0;
    directed_conj merged = merge_bounds(p, c0);
    if (conj_equal(p, merged, cur))
      break;
    cur = std::move(merged);
    if (guard > 1000)
      throw domain_error("1-normalization failed to stabilize");
  }

  auto least = p.least();
  auto greatest = p.greatest();
  // Canonicalization: bounds equal to the least/greatest element are vacuous.
  // A lower bound at the greatest element pins its variable from below, which
  // makes every incoming variable constraint vacuous (dually for uppers at
  // the least element); those constraints are dropped as well.
  std::set<var_id> pinned_top, pinned_bot;
  for (const auto &a : cur.atoms) {
    if (a.kind == directed_atom::tag::lower && greatest &&
        p.compare_total(a.d, *greatest) == 0)
      pinned_top.insert(a.x);
    if (a.kind == directed_atom::tag::upper && least && p.compare_total(a.d, *least) == 0)
      pinned_bot.insert(a.x);
  }
  std::vector<directed_atom> out;
  for (const auto &a : cur.atoms) {
    if (a.kind == directed_atom::tag::lower && least && p.compare_total(a.d, *least) == 0)
      continue;
    if (a.kind == directed_atom::tag::upper && greatest &&
        p.compare_total(a.d, *greatest) == 0)
      continue;
    if (a.kind == directed_atom::tag::var_le &&
        (pinned_top.count(a.y) || pinned_bot.count(a.x)))
      continue;
    out.push_back(a);
  }
  sort_atoms(p, out);
  return directed_conj::of(std::move(out));
}

bool sat(const poset &p, const directed_conj &c) {
  if (p.kind() != poset_kind::lattice)
    throw unsupported_operation(
        "sat is decided via 1-normal forms on lattices only; use leq0 for general orders");
  return !nf1(p, c).bottom;
}

bool implies(const poset &p, const directed_conj &c1, const directed_conj &c2) {
  if (p.kind() != poset_kind::lattice)
    throw unsupported_operation(
        "implies is decided via 1-normal forms on lattices only; use leq0 for general orders");
  return conj_equal(p, nf1(p, c1), nf1(p, conj_and(p, c1, c2)));
}

bool leq0(const poset &p, const directed_conj &c1, const directed_conj &c2) {
  return conj_equal(p, nf0(p, c1), nf0(p, conj_and(p, c1, c2)));
}

bool implies_for(const poset &p, const directed_conj &c1, const directed_conj &c2) {
  if (c1.bottom)
    return true;
  if (c2.bottom)
    return false;
  return p.kind() == poset_kind::lattice ? implies(p, c1, c2) : leq0(p, c1, c2);
}

directed_conj project(const directed_conj &c, const var_set &ys) {
  if (c.bottom)
    return directed_conj::bot();
  std::vector<directed_atom> out;
  for (const auto &a : c.atoms) {
    if (!ys.contains(a.x))
      continue;
    if (a.kind == directed_atom::tag::var_le && !ys.contains(a.y))
      continue;
    out.push_back(a);
  }
  return directed_conj::of(std::move(out));
}

namespace {

struct bound_index {
  std::map<var_id, std::vector<pvalue>> lowers, uppers;
  explicit bound_index(const directed_conj &c) {
    for (const auto &a : c.atoms) {
      if (a.kind == directed_atom::tag::lower)
        lowers[a.x].push_back(a.d);
      else if (a.kind == directed_atom::tag::upper)
        uppers[a.x].push_back(a.d);
    }
  }
};

std::vector<directed_atom> shared_var_atoms(const poset &p, const directed_conj &c1,
                                            const directed_conj &c2) {
  std::vector<directed_atom> out;
  for (const auto &a : c1.atoms) {
    if (a.kind != directed_atom::tag::var_le)
      continue;
    for (const auto &b : c2.atoms)
      if (b.kind == directed_atom::tag::var_le && a.x == b.x && a.y == b.y) {
        out.push_back(a);
        break;
      }
  }
  return out;
}

} // namespace

directed_conj join_lattice(const poset &p, const directed_conj &c1, const directed_conj &c2) {
  if (c1.bottom || c2.bottom)
    throw domain_error("join_lattice expects non-bottom inputs");
  bound_index b1(c1), b2(c2);
  std::vector<directed_atom> out = shared_var_atoms(p, c1, c2);
  auto least = p.least();
  auto greatest = p.greatest();
  for (const auto &[v, ds1] : b1.lowers) {
    auto it = b2.lowers.find(v);
    if (it == b2.lowers.end())
      continue;
    // 1-normal inputs carry a single bound per variable.
    pvalue merged = p.meet_checked(ds1.front(), it->second.front());
    if (!(least && p.compare_total(merged, *least) == 0))
      out.push_back(directed_atom::lower(std::move(merged), v));
  }
  for (const auto &[v, ds1] : b1.uppers) {
    auto it = b2.uppers.find(v);
    if (it == b2.uppers.end())
      continue;
    auto joined = p.join(ds1.front(), it->second.front());
    if (!joined)
      continue; // no least upper bound of the two bounds: the information is lost
    if (!(greatest && p.compare_total(*joined, *greatest) == 0))
      out.push_back(directed_atom::upper(v, std::move(*joined)));
  }
  sort_atoms(p, out);
  return directed_conj::of(std::move(out));
}

directed_conj join_general(const poset &p, const directed_conj &c1, const directed_conj &c2) {
  if (c1.bottom || c2.bottom)
    throw domain_error("join_general expects non-bottom inputs");
  bound_index b1(c1), b2(c2);
  std::vector<directed_atom> out = shared_var_atoms(p, c1, c2);
  auto keep_lowers = [&](const bound_index &self, const bound_index &other) {
    for (const auto &[v, ds] : self.lowers) {
      auto it = other.lowers.find(v);
      if (it == other.lowers.end())
        continue;
      for (const auto &d : ds)
        for (const auto &e : it->second)
          if (p.leq(d, e)) {
            out.push_back(directed_atom::lower(d, v));
            break;
          }
    }
  };
  auto keep_uppers = [&](const bound_index &self, const bound_index &other) {
    for (const auto &[v, ds] : self.uppers) {
      auto it = other.uppers.find(v);
      if (it == other.uppers.end())
        continue;
      for (const auto &d : ds)
        for (const auto &e : it->second)
          if (p.leq(e, d)) {
            out.push_back(directed_atom::upper(v, d));
            break;
          }
    }
  };
  keep_lowers(b1, b2);
  keep_lowers(b2, b1);
  keep_uppers(b1, b2);
  keep_uppers(b2, b1);
  sort_atoms(p, out);
  return nf0(p, directed_conj::of(std::move(out)));
}

directed_conj meet_directed(const poset &p, const directed_conj &c1, const directed_conj &c2) {
  directed_conj both = conj_and(p, c1, c2);
  if (both.bottom)
    return both;
  return p.kind() == poset_kind::lattice ? nf1(p, both) : nf0(p, both);
}

namespace {

struct conj_lexer {
  const std::string &src;
  std::size_t pos = 0;
  int line = 1, col = 1;

  void advance() {
    if (src[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }
  void skip_space() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos])))
      advance();
  }
  bool eof() {
    skip_space();
    return pos >= src.size();
  }
  bool try_char(char c) {
    skip_space();
    if (pos < src.size() && src[pos] == c) {
      advance();
      return true;
    }
    return false;
  }
  bool try_str(const std::string &s) {
    skip_space();
    if (src.compare(pos, s.size(), s) == 0) {
      for (std::size_t i = 0; i < s.size(); ++i)
        advance();
      return true;
    }
    return false;
  }

  // A term: an identifier, or a constant literal in the order's syntax.
  std::string term() {
    skip_space();
    if (pos >= src.size())
      throw parse_error("expected term", line, col);
    std::size_t start = pos;
    char c = src[pos];
    if (c == '"') {
      advance();
      while (pos < src.size() && src[pos] != '"')
        advance();
      if (pos >= src.size())
        throw parse_error("unterminated string literal", line, col);
      advance();
    } else if (c == '{') {
      int depth = 0;
      while (pos < src.size()) {
        if (src[pos] == '{')
          ++depth;
        if (src[pos] == '}')
          --depth;
        advance();
        if (depth == 0)
          break;
      }
      if (depth != 0)
        throw parse_error("unbalanced braces", line, col);
    } else if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
      advance();
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos])))
        advance();
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
        advance();
    } else {
      throw parse_error("expected term", line, col);
    }
    return src.substr(start, pos - start);
  }
};

} // namespace

directed_conj parse_directed_conj(const std::string &text, const variable_universe &vars,
                                  const poset &p) {
  conj_lexer lex{text};
  if (lex.try_str("bot")) {
    if (!lex.eof())
      throw parse_error("trailing input", lex.line, lex.col);
    return directed_conj::bot();
  }
  if (lex.try_str("top")) {
    if (!lex.eof())
      throw parse_error("trailing input", lex.line, lex.col);
    return directed_conj::top();
  }
  std::vector<directed_atom> atoms;
  do {
    std::string lhs = lex.term();
    if (!lex.try_str("<="))
      throw parse_error("expected '<='", lex.line, lex.col);
    std::string rhs = lex.term();
    bool lhs_var = vars.has(lhs), rhs_var = vars.has(rhs);
    if (lhs_var && rhs_var)
      atoms.push_back(directed_atom::var_le(vars.id_of(lhs), vars.id_of(rhs)));
    else if (lhs_var)
      atoms.push_back(directed_atom::upper(vars.id_of(lhs), p.parse_value(rhs)));
    else if (rhs_var)
      atoms.push_back(directed_atom::lower(p.parse_value(lhs), vars.id_of(rhs)));
    else
      throw parse_error("at least one side must be a variable", lex.line, lex.col);
  } while (lex.try_char('&'));
  if (!lex.eof())
    throw parse_error("trailing input", lex.line, lex.col);
  sort_atoms(p, atoms);
  return directed_conj::of(std::move(atoms));
}

std::string format_directed_conj(const directed_conj &c, const variable_universe &vars,
                                 const poset &p) {
  if (c.bottom)
    return "bot";
  if (c.atoms.empty())
    return "top";
  std::string out;
  for (std::size_t i = 0; i < c.atoms.size(); ++i) {
    if (i)
      out += " & ";
    const auto &a = c.atoms[i];
    switch (a.kind) {
    case directed_atom::tag::lower:
      out += p.print(a.d) + " <= " + vars.name(a.x);
      break;
    case directed_atom::tag::upper:
      out += vars.name(a.x) + " <= " + p.print(a.d);
      break;
    case directed_atom::tag::var_le:
      out += vars.name(a.x) + " <= " + vars.name(a.y);
      break;
    }
  }
  return out;
}

} // namespace weakrel
