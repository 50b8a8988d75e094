#include "weakrel/disjunctive.hpp"

#include <algorithm>

namespace weakrel {

namespace {

constexpr std::size_t k_disjunct_guard = 4096;

int compare_conj(const poset &p, const directed_conj &a, const directed_conj &b) {
  if (a.atoms.size() != b.atoms.size())
    return a.atoms.size() < b.atoms.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.atoms.size(); ++i) {
    int c = compare_atoms(p, a.atoms[i], b.atoms[i]);
    if (c != 0)
      return c;
  }
  return 0;
}

} // namespace

std::vector<directed_conj> disj_domain::prune(std::vector<directed_conj> ds) const {
  const poset &p = base_.order();
  std::sort(ds.begin(), ds.end(), [&](const directed_conj &a, const directed_conj &b) {
    return compare_conj(p, a, b) < 0;
  });
  ds.erase(std::unique(ds.begin(), ds.end(),
                       [&](const directed_conj &a, const directed_conj &b) {
                         return compare_conj(p, a, b) == 0;
                       }),
           ds.end());
  // Drop every disjunct implied by another one. Mutual implication cannot
  // occur between distinct normal forms, so domination is irreflexive here.
  std::vector<directed_conj> kept;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < ds.size() && !dominated; ++j)
      if (i != j && implies_for(p, ds[i], ds[j]))
        dominated = true;
    if (!dominated)
      kept.push_back(ds[i]);
  }
  return kept;
}

disj_value disj_domain::make(std::vector<directed_conj> disjuncts) const {
  std::vector<directed_conj> out;
  for (auto &d : disjuncts) {
    directed_conj n = base_.normalize(d);
    if (!n.bottom)
      out.push_back(std::move(n));
  }
  return disj_value{prune(std::move(out))};
}

bool disj_domain::leq(const disj_value &a, const disj_value &b) const {
  const poset &p = base_.order();
  for (const auto &da : a.disjuncts) {
    bool covered = false;
    for (const auto &db : b.disjuncts)
      if (implies_for(p, da, db)) {
        covered = true;
        break;
      }
    if (!covered)
      return false;
  }
  return true;
}

disj_value disj_domain::join(const disj_value &a, const disj_value &b) const {
  std::vector<directed_conj> all = a.disjuncts;
  all.insert(all.end(), b.disjuncts.begin(), b.disjuncts.end());
  if (all.size() > k_disjunct_guard)
    throw size_guard_error("disjunct count guard exceeded");
  return disj_value{prune(std::move(all))};
}

disj_value disj_domain::meet(const disj_value &a, const disj_value &b) const {
  const poset &p = base_.order();
  if (a.disjuncts.size() * b.disjuncts.size() > k_disjunct_guard)
    throw size_guard_error("disjunct count guard exceeded");
  std::vector<directed_conj> out;
  for (const auto &da : a.disjuncts)
    for (const auto &db : b.disjuncts) {
      directed_conj m = meet_directed(p, da, db);
      if (!m.bottom)
        out.push_back(std::move(m));
    }
  return disj_value{prune(std::move(out))};
}

disj_value disj_domain::restrict_to(const disj_value &a, const var_set &ys) const {
  std::vector<directed_conj> out;
  out.reserve(a.disjuncts.size());
  for (const auto &d : a.disjuncts)
    out.push_back(project(d, ys));
  return disj_value{prune(std::move(out))};
}

bool disj_domain::equal(const disj_value &a, const disj_value &b) const {
  const poset &p = base_.order();
  if (a.disjuncts.size() != b.disjuncts.size())
    return false;
  for (std::size_t i = 0; i < a.disjuncts.size(); ++i)
    if (!conj_equal(p, a.disjuncts[i], b.disjuncts[i]))
      return false;
  return true;
}

disj_value disj_domain::cap(disj_value v, std::size_t max_disjuncts) const {
  if (max_disjuncts == 0)
    throw domain_error("disjunct cap must be positive");
  while (v.disjuncts.size() > max_disjuncts) {
    // Fold the tail of the canonical order into a single disjunct.
    directed_conj folded = v.disjuncts[max_disjuncts - 1];
    for (std::size_t i = max_disjuncts; i < v.disjuncts.size(); ++i)
      folded = base_.join(folded, v.disjuncts[i]);
    v.disjuncts.resize(max_disjuncts - 1);
    v.disjuncts.push_back(std::move(folded));
    v.disjuncts = prune(std::move(v.disjuncts));
  }
  return v;
}

disj_value d_join(const disj_domain &dom, const disj_value &a, const disj_value &b) {
  return dom.join(a, b);
}
disj_value d_meet(const disj_domain &dom, const disj_value &a, const disj_value &b) {
  return dom.meet(a, b);
}
disj_value d_restrict(const disj_domain &dom, const disj_value &a, const var_set &ys) {
  return dom.restrict_to(a, ys);
}
bool d_leq(const disj_domain &dom, const disj_value &a, const disj_value &b) {
  return dom.leq(a, b);
}

stable<disj_domain> normalize_disj_collection(const disj_domain &dom,
                                              collection<disj_domain> c,
                                              const iteration_budget &budget,
                                              normalize_stats *stats) {
  return kleene_normalize(dom, std::move(c), budget, stats);
}

iteration_budget disj_collection_budget(const disj_domain &dom,
                                        const collection<disj_domain> &c) {
  const poset &p = dom.order();
  std::vector<pvalue> consts;
  for (const auto &part : c.parts)
    for (const auto &d : part.disjuncts)
      for (const auto &v : d.occurring_constants(p))
        consts.push_back(v);
  std::sort(consts.begin(), consts.end(),
            [&](const pvalue &a, const pvalue &b) { return p.compare_total(a, b) < 0; });
  consts.erase(std::unique(consts.begin(), consts.end(),
                           [&](const pvalue &a, const pvalue &b) {
                             return p.compare_total(a, b) == 0;
                           }),
               consts.end());
  return default_budget(c.universe->size(), std::max<std::size_t>(consts.size(), 1) * 4);
}

var_set assign_rhs::vars() const {
  std::vector<var_id> vs;
  switch (kind) {
  case tag::unknown:
  case tag::constant:
    break;
  case tag::variable:
    vs.push_back(y1);
    break;
  case tag::set_union:
  case tag::set_inter:
    vs.push_back(y1);
    vs.push_back(y2);
    break;
  case tag::prefix_concat:
  case tag::substring_concat:
    for (const auto &pc : pieces)
      if (pc.is_var)
        vs.push_back(pc.var);
    break;
  }
  return var_set(std::move(vs));
}

void check_rhs_supported(const poset &p, const assign_rhs &rhs) {
  const std::string n = p.name();
  switch (rhs.kind) {
  case assign_rhs::tag::unknown:
  case assign_rhs::tag::constant:
  case assign_rhs::tag::variable:
    return;
  case assign_rhs::tag::set_union:
  case assign_rhs::tag::set_inter:
    if (n != "subset" && n != "multiset")
      throw unsupported_operation("rhs not supported by order: union/inter need sets");
    return;
  case assign_rhs::tag::prefix_concat:
    if (n != "prefix")
      throw unsupported_operation("rhs not supported by order: concatenation needs prefix");
    return;
  case assign_rhs::tag::substring_concat:
    if (n != "substring" && n != "scattered")
      throw unsupported_operation(
          "rhs not supported by order: gap concatenation needs substring or scattered");
    return;
  }
}

std::vector<directed_atom> rhs_atoms(const poset &p, var_id x, const assign_rhs &rhs) {
  check_rhs_supported(p, rhs);
  std::vector<directed_atom> atoms;
  switch (rhs.kind) {
  case assign_rhs::tag::unknown:
    break;
  case assign_rhs::tag::constant:
    atoms.push_back(directed_atom::lower(rhs.constant, x));
    atoms.push_back(directed_atom::upper(x, rhs.constant));
    break;
  case assign_rhs::tag::variable:
    atoms.push_back(directed_atom::var_le(x, rhs.y1));
    atoms.push_back(directed_atom::var_le(rhs.y1, x));
    break;
  case assign_rhs::tag::set_inter:
    atoms.push_back(directed_atom::var_le(x, rhs.y1));
    atoms.push_back(directed_atom::var_le(x, rhs.y2));
    break;
  case assign_rhs::tag::set_union:
    atoms.push_back(directed_atom::var_le(rhs.y1, x));
    atoms.push_back(directed_atom::var_le(rhs.y2, x));
    break;
  case assign_rhs::tag::prefix_concat:
  case assign_rhs::tag::substring_concat:
    for (const auto &pc : rhs.pieces) {
      if (pc.is_var)
        atoms.push_back(directed_atom::var_le(pc.var, x));
      else
        atoms.push_back(directed_atom::lower(pc.val, x));
    }
    break;
  }
  return atoms;
}

namespace {

disj_value conjoin_atoms(const disj_domain &dom, const disj_value &v,
                         const std::vector<directed_atom> &atoms) {
  std::vector<directed_atom> sorted = atoms;
  sort_atoms(dom.order(), sorted);
  directed_conj cond = directed_conj::of(std::move(sorted));
  std::vector<directed_conj> out;
  for (const auto &d : v.disjuncts)
    out.push_back(conj_and(dom.order(), d, cond));
  return dom.make(std::move(out));
}

} // namespace

disj_value assign(const disj_domain &dom, const variable_universe &universe, var_id x,
                  const assign_rhs &rhs, const disj_value &v) {
  check_rhs_supported(dom.order(), rhs);
  var_set all = universe.all_vars();
  if (rhs.vars().contains(x)) {
    // Split through an internal temporary slot beyond the universe.
    var_id tmp = static_cast<var_id>(universe.size());
    assign_rhs renamed = rhs; // tmp := rhs (x still live)
    disj_value step = conjoin_atoms(dom, v, rhs_atoms(dom.order(), tmp, renamed));
    var_set keep = all.without(x);
    keep = keep.unite(var_set{tmp});
    step = dom.restrict_to(step, keep);
    step = conjoin_atoms(dom, step,
                         {directed_atom::var_le(x, tmp), directed_atom::var_le(tmp, x)});
    return dom.restrict_to(step, all);
  }
  disj_value restricted = dom.restrict_to(v, all.without(x));
  return conjoin_atoms(dom, restricted, rhs_atoms(dom.order(), x, rhs));
}

namespace {

// The condition atom of s1 <= s2, or an empty/bottom shortcut for the
// constant-constant case.
struct guard_atom_result {
  bool trivially_true = false;
  bool trivially_false = false;
  std::vector<directed_atom> atoms;
};

guard_atom_result guard_atom(const poset &p, const guard_term &s1, const guard_term &s2) {
  guard_atom_result out;
  if (s1.is_var && s2.is_var) {
    if (s1.var == s2.var)
      out.trivially_true = true;
    else
      out.atoms.push_back(directed_atom::var_le(s1.var, s2.var));
  } else if (s1.is_var) {
    out.atoms.push_back(directed_atom::upper(s1.var, s2.val));
  } else if (s2.is_var) {
    out.atoms.push_back(directed_atom::lower(s1.val, s2.var));
  } else if (p.leq(s1.val, s2.val)) {
    out.trivially_true = true;
  } else {
    out.trivially_false = true;
  }
  return out;
}

} // namespace

disj_value guard_ineq(const disj_domain &dom, const guard_term &s1, const guard_term &s2,
                      const disj_value &v) {
  auto ga = guard_atom(dom.order(), s1, s2);
  if (ga.trivially_true)
    return v;
  if (ga.trivially_false)
    return disj_value::bot();
  return conjoin_atoms(dom, v, ga.atoms);
}

stable<disj_domain> assign(const disj_domain &dom, var_id x, const assign_rhs &rhs,
                           const stable<disj_domain> &r, const iteration_budget &budget,
                           normalize_stats *stats) {
  check_rhs_supported(dom.order(), rhs);
  if (rhs.vars().contains(x))
    throw domain_error("collection-level assignment needs a pre-split right-hand side");
  auto restricted = abstract_restrict(dom, r, r.universe().all_vars().without(x));
  auto atoms = rhs_atoms(dom.order(), x, rhs);
  if (atoms.empty())
    return restricted;
  // Meet in each atom on its own cluster, then re-normalize.
  collection<disj_domain> met = restricted.get();
  const std::size_t n = r.universe().size();
  for (const auto &a : atoms) {
    directed_conj cond = directed_conj::of({a});
    std::size_t idx = a.kind == directed_atom::tag::var_le
                          ? cluster_index(n, a.x, a.y)
                          : cluster_index(n, a.x, a.x);
    met.parts[idx] = dom.meet(met.parts[idx], disj_value{{cond}});
  }
  return ensure_stable(dom, std::move(met), budget, stats);
}

stable<disj_domain> guard_ineq(const disj_domain &dom, const guard_term &s1,
                               const guard_term &s2, const stable<disj_domain> &r,
                               const iteration_budget &budget, normalize_stats *stats) {
  auto ga = guard_atom(dom.order(), s1, s2);
  if (ga.trivially_true)
    return r;
  if (ga.trivially_false)
    return stable_bottom(dom, r.universe());
  const directed_atom &a = ga.atoms.front();
  const std::size_t n = r.universe().size();
  std::size_t idx = a.kind == directed_atom::tag::var_le ? cluster_index(n, a.x, a.y)
                                                         : cluster_index(n, a.x, a.x);
  collection<disj_domain> met = r.get();
  met.parts[idx] = dom.meet(met.parts[idx], disj_value{{directed_conj::of({a})}});
  return ensure_stable(dom, std::move(met), budget, stats);
}

stable<disj_domain> guard_neg_ineq(const disj_domain &dom, const guard_term &s1,
                                   const guard_term &s2, const stable<disj_domain> &r,
                                   const iteration_budget &budget, normalize_stats *stats) {
  const poset &p = dom.order();
  auto ga = guard_atom(p, s1, s2);
  if (ga.trivially_true) // negation of a tautology
    return stable_bottom(dom, r.universe());
  if (ga.trivially_false)
    return r;
  const directed_atom &a = ga.atoms.front();
  var_set cond_vars = a.kind == directed_atom::tag::var_le ? var_set{a.x, a.y} : var_set{a.x};
  if (cond_vars.size() > 2)
    throw domain_error("negated inequality condition spans more than one cluster");
  const std::size_t n = r.universe().size();
  std::size_t idx = a.kind == directed_atom::tag::var_le ? cluster_index(n, a.x, a.y)
                                                         : cluster_index(n, a.x, a.x);
  directed_conj cond = directed_conj::of({a});
  std::vector<directed_conj> kept;
  for (const auto &e : r.parts()[idx].disjuncts)
    if (!implies_for(p, e, cond))
      kept.push_back(e);
  if (kept.empty())
    return stable_bottom(dom, r.universe());
  collection<disj_domain> met = r.get();
  met.parts[idx] = dom.meet(met.parts[idx], disj_value{std::move(kept)});
  return ensure_stable(dom, std::move(met), budget, stats);
}

disj_value parse_disj_value(const std::string &text, const variable_universe &vars,
                            const disj_domain &dom) {
  // Split on top-level '|'. Brace and quote nesting shields the separator.
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  bool in_str = false;
  for (char c : text) {
    if (c == '"')
      in_str = !in_str;
    if (!in_str) {
      if (c == '{')
        ++depth;
      if (c == '}')
        --depth;
      if (c == '|' && depth == 0) {
        parts.push_back(cur);
        cur.clear();
        continue;
      }
    }
    cur += c;
  }
  parts.push_back(cur);
  std::vector<directed_conj> ds;
  for (const auto &part : parts) {
    directed_conj c = parse_directed_conj(part, vars, dom.order());
    if (!c.bottom)
      ds.push_back(std::move(c));
  }
  return dom.make(std::move(ds));
}

std::string format_disj_value(const disj_value &v, const variable_universe &vars,
                              const poset &p) {
  if (v.is_bottom())
    return "bot";
  std::string out;
  for (std::size_t i = 0; i < v.disjuncts.size(); ++i) {
    if (i)
      out += " | ";
    out += format_directed_conj(v.disjuncts[i], vars, p);
  }
  return out;
}

} // namespace weakrel
