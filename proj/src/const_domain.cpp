#include "weakrel/const_domain.hpp"

#include <algorithm>
#include <bit>
#include <map>

namespace weakrel {

namespace {

constexpr std::size_t k_table_guard = std::size_t(1) << 20;

std::size_t pow_checked(std::size_t base, std::size_t exp) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    out *= base;
    if (out > k_table_guard)
      throw size_guard_error("table size guard exceeded");
  }
  return out;
}

// Expand a table to a superset of its support; missing columns become free.
std::vector<std::uint32_t> expand_rows(const const_value &v,
                                       const std::vector<var_id> &target) {
  const std::uint32_t base = v.atom_count();
  pow_checked(base, target.size());
  // Position of each target var in the source support, or -1 when free.
  std::vector<int> src_pos(target.size(), -1);
  for (std::size_t i = 0; i < target.size(); ++i) {
    auto it = std::lower_bound(v.support().begin(), v.support().end(), target[i]);
    if (it != v.support().end() && *it == target[i])
      src_pos[i] = static_cast<int>(it - v.support().begin());
  }
  std::vector<std::uint32_t> weights(target.size());
  std::uint32_t w = 1;
  for (std::size_t i = 0; i < target.size(); ++i) {
    weights[i] = w;
    w *= base;
  }
  std::vector<std::uint32_t> out;
  for (std::uint32_t row : v.rows()) {
    // Decode source digits.
    std::vector<std::uint32_t> digits(v.support().size());
    std::uint32_t rest = row;
    for (std::size_t i = 0; i < digits.size(); ++i) {
      digits[i] = rest % base;
      rest /= base;
    }
    // Odometer over the free columns.
    std::vector<std::uint32_t> free_cols;
    std::uint32_t fixed = 0;
    for (std::size_t i = 0; i < target.size(); ++i) {
      if (src_pos[i] >= 0)
        fixed += digits[src_pos[i]] * weights[i];
      else
        free_cols.push_back(static_cast<std::uint32_t>(i));
    }
    std::vector<std::uint32_t> counter(free_cols.size(), 0);
    while (true) {
      std::uint32_t code = fixed;
      for (std::size_t i = 0; i < free_cols.size(); ++i)
        code += counter[i] * weights[free_cols[i]];
      out.push_back(code);
      std::size_t k = 0;
      while (k < counter.size() && ++counter[k] == base) {
        counter[k] = 0;
        ++k;
      }
      if (k == counter.size() && !counter.empty())
        break;
      if (counter.empty())
        break;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<var_id> union_support(const const_value &a, const const_value &b) {
  std::vector<var_id> out;
  std::set_union(a.support().begin(), a.support().end(), b.support().begin(), b.support().end(),
                 std::back_inserter(out));
  return out;
}

} // namespace

const_value const_value::top(std::uint32_t atom_count) {
  const_value v;
  v.atoms_ = atom_count;
  v.rows_ = {0};
  return v;
}

const_value const_value::bottom(std::uint32_t atom_count) {
  const_value v;
  v.atoms_ = atom_count;
  return v;
}

const_value const_value::from_rows(std::uint32_t atom_count, std::vector<var_id> support,
                                   std::vector<std::uint32_t> rows) {
  const_value v;
  v.atoms_ = atom_count;
  v.support_ = std::move(support);
  v.rows_ = std::move(rows);
  if (!std::is_sorted(v.support_.begin(), v.support_.end()) ||
      std::adjacent_find(v.support_.begin(), v.support_.end()) != v.support_.end())
    throw domain_error("table support must be sorted and unique");
  std::sort(v.rows_.begin(), v.rows_.end());
  v.rows_.erase(std::unique(v.rows_.begin(), v.rows_.end()), v.rows_.end());
  v.canonicalize();
  return v;
}

void const_value::canonicalize() {
  if (rows_.empty()) {
    support_.clear();
    return;
  }
  const std::uint32_t base = atoms_;
  bool changed = true;
  while (changed && !support_.empty()) {
    changed = false;
    for (std::size_t i = 0; i < support_.size(); ++i) {
      std::uint32_t lo = 1;
      for (std::size_t k = 0; k < i; ++k)
        lo *= base;
      // Column i is free iff grouping rows by the remaining digits yields a
      // full atom set in every group.
      std::map<std::uint64_t, std::uint32_t> group_count;
      for (std::uint32_t row : rows_) {
        std::uint64_t rest =
            (row % lo) + std::uint64_t(row / (lo * base)) * lo;
        ++group_count[rest];
      }
      if (rows_.size() != group_count.size() * base)
        continue;
      bool full = true;
      for (const auto &[rest, count] : group_count)
        if (count != base) {
          full = false;
          break;
        }
      if (!full)
        continue;
      std::vector<std::uint32_t> projected;
      projected.reserve(group_count.size());
      for (const auto &[rest, count] : group_count)
        projected.push_back(static_cast<std::uint32_t>(rest));
      std::sort(projected.begin(), projected.end());
      rows_ = std::move(projected);
      support_.erase(support_.begin() + static_cast<std::ptrdiff_t>(i));
      changed = true;
      break;
    }
  }
}

bool const_domain::leq(const const_value &a, const const_value &b) const {
  if (a.is_bottom())
    return true;
  if (b.is_bottom())
    return false;
  auto target = union_support(a, b);
  auto ra = expand_rows(a, target);
  auto rb = expand_rows(b, target);
  return std::includes(rb.begin(), rb.end(), ra.begin(), ra.end());
}

const_value const_domain::join(const const_value &a, const const_value &b) const {
  if (a.is_bottom())
    return b;
  if (b.is_bottom())
    return a;
  auto target = union_support(a, b);
  auto ra = expand_rows(a, target);
  auto rb = expand_rows(b, target);
  std::vector<std::uint32_t> rows;
  std::set_union(ra.begin(), ra.end(), rb.begin(), rb.end(), std::back_inserter(rows));
  return const_value::from_rows(atoms_.atom_count(), std::move(target), std::move(rows));
}

const_value const_domain::meet(const const_value &a, const const_value &b) const {
  if (a.is_bottom() || b.is_bottom())
    return bottom();
  auto target = union_support(a, b);
  auto ra = expand_rows(a, target);
  auto rb = expand_rows(b, target);
  std::vector<std::uint32_t> rows;
  std::set_intersection(ra.begin(), ra.end(), rb.begin(), rb.end(), std::back_inserter(rows));
  return const_value::from_rows(atoms_.atom_count(), std::move(target), std::move(rows));
}

const_value const_domain::restrict_to(const const_value &a, const var_set &ys) const {
  if (a.is_bottom())
    return bottom();
  std::vector<var_id> kept;
  std::vector<std::size_t> kept_pos;
  for (std::size_t i = 0; i < a.support().size(); ++i)
    if (ys.contains(a.support()[i])) {
      kept.push_back(a.support()[i]);
      kept_pos.push_back(i);
    }
  const std::uint32_t base = a.atom_count();
  std::vector<std::uint32_t> weights(a.support().size());
  std::uint32_t w = 1;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    weights[i] = w;
    w *= base;
  }
  std::vector<std::uint32_t> rows;
  rows.reserve(a.rows().size());
  for (std::uint32_t row : a.rows()) {
    std::uint32_t code = 0, mul = 1;
    for (std::size_t k = 0; k < kept_pos.size(); ++k) {
      code += ((row / weights[kept_pos[k]]) % base) * mul;
      mul *= base;
    }
    rows.push_back(code);
  }
  return const_value::from_rows(base, std::move(kept), std::move(rows));
}

const_value const_domain::to_value(const const_formula &f) const {
  var_set vs = formula_vars(f);
  const auto &vars = vs.vars();
  const std::uint32_t base = static_cast<std::uint32_t>(atoms_.atom_count());
  std::size_t total = pow_checked(base, vars.size());
  // Sigma indices only matter for the formula's own variables.
  var_id max_var = vars.empty() ? 0 : vars.back();
  sigma s(max_var + 1);
  std::vector<std::uint32_t> rows;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t rest = code;
    for (var_id v : vars) {
      s.bind(v, static_cast<std::uint32_t>(rest % base));
      rest /= base;
    }
    if (eval(f, s))
      rows.push_back(static_cast<std::uint32_t>(code));
  }
  return const_value::from_rows(base, vars, std::move(rows));
}

const_value const_domain::prop_value(var_id x, std::uint64_t mask) const {
  const std::uint32_t base = static_cast<std::uint32_t>(atoms_.atom_count());
  std::vector<std::uint32_t> rows;
  for (std::uint32_t a = 0; a < base; ++a)
    if ((mask >> a) & 1)
      rows.push_back(a);
  return const_value::from_rows(base, {x}, std::move(rows));
}

const_value const_domain::rename(const const_value &v, var_id from, var_id to) const {
  if (v.is_bottom())
    return v;
  auto it = std::find(v.support().begin(), v.support().end(), from);
  if (it == v.support().end())
    return v;
  if (std::find(v.support().begin(), v.support().end(), to) != v.support().end())
    throw domain_error("rename target already in support");
  std::vector<var_id> renamed = v.support();
  renamed[static_cast<std::size_t>(it - v.support().begin())] = to;
  // Re-encode rows for the sorted target support.
  std::vector<std::size_t> order(renamed.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return renamed[a] < renamed[b]; });
  const std::uint32_t base = v.atom_count();
  std::vector<std::uint32_t> weights(renamed.size());
  std::uint32_t w = 1;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    weights[i] = w;
    w *= base;
  }
  std::vector<var_id> target;
  target.reserve(renamed.size());
  for (std::size_t i : order)
    target.push_back(renamed[i]);
  std::vector<std::uint32_t> rows;
  rows.reserve(v.rows().size());
  for (std::uint32_t row : v.rows()) {
    std::uint32_t code = 0, mul = 1;
    for (std::size_t k = 0; k < order.size(); ++k) {
      code += ((row / weights[order[k]]) % base) * mul;
      mul *= base;
    }
    rows.push_back(code);
  }
  return const_value::from_rows(base, std::move(target), std::move(rows));
}

std::string const_domain::render(const const_value &v, const variable_universe &universe) const {
  if (v.is_bottom())
    return "bot";
  if (v.is_top())
    return "top";
  const std::uint32_t base = v.atom_count();
  std::string out;
  for (std::size_t i = 0; i < v.rows().size(); ++i) {
    if (i)
      out += " or ";
    std::uint32_t row = v.rows()[i];
    std::string conj;
    for (std::size_t k = 0; k < v.support().size(); ++k) {
      if (k)
        conj += " and ";
      conj += universe.name(v.support()[k]) + " in {" +
              atoms_.atom_name(row % base) + "}";
      row /= base;
    }
    out += v.support().size() > 1 || v.rows().size() > 1 ? "(" + conj + ")" : conj;
  }
  return out;
}

pair_normal_form pair_normal(const const_domain &dom, const const_formula &f, const cluster &p) {
  var_set fv = formula_vars(f);
  if (!fv.subset_of(p.vars()))
    throw domain_error("formula mentions variables outside the cluster");
  const_value v = dom.to_value(f);
  pair_normal_form out;
  out.vars = p.vars().vars();
  auto rows = expand_rows(v, out.vars);
  const std::uint32_t base = dom.atoms().atom_count();
  for (std::uint32_t row : rows) {
    std::vector<std::uint32_t> tuple;
    std::uint32_t rest = row;
    for (std::size_t i = 0; i < out.vars.size(); ++i) {
      tuple.push_back(rest % base);
      rest /= base;
    }
    out.tuples.push_back(std::move(tuple));
  }
  std::sort(out.tuples.begin(), out.tuples.end());
  return out;
}

const_formula cnf_to_formula(const two_clause_cnf &cnf) {
  if (cnf.bottom)
    return const_formula::bot();
  std::vector<const_formula> clauses;
  for (const auto &cl : cnf.clauses) {
    if (cl.props.empty() || cl.props.size() > 2)
      throw domain_error("clause must contain one or two propositions");
    if (cl.props.size() == 2 && cl.props[0].var == cl.props[1].var)
      throw domain_error("clause propositions must use distinct variables");
    std::vector<const_formula> props;
    for (const auto &pr : cl.props)
      props.push_back(const_formula::prop(pr.var, pr.atoms));
    clauses.push_back(props.size() == 1 ? props.front()
                                        : const_formula::disj(std::move(props)));
  }
  if (clauses.empty())
    return const_formula::top();
  if (clauses.size() == 1)
    return clauses.front();
  return const_formula::conj(std::move(clauses));
}

bool sat_exact(const two_clause_cnf &cnf, const const_domain &dom, const var_set &vars) {
  if (cnf.bottom)
    return false;
  const std::uint32_t base = static_cast<std::uint32_t>(dom.atoms().atom_count());
  std::size_t total = pow_checked(base, vars.size());
  const_formula f = cnf_to_formula(cnf);
  var_id max_var = vars.empty() ? 0 : vars.vars().back();
  sigma s(max_var + 1);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t rest = code;
    for (var_id v : vars.vars()) {
      s.bind(v, static_cast<std::uint32_t>(rest % base));
      rest /= base;
    }
    if (eval(f, s))
      return true;
  }
  return false;
}

namespace {

std::set<sigma> gamma_impl(const const_domain &dom, const std::vector<const_value> &parts,
                           const var_set &vars) {
  const std::uint32_t base = static_cast<std::uint32_t>(dom.atoms().atom_count());
  std::size_t total = pow_checked(base, vars.size());
  for (const auto &p : parts)
    if (!p.support_set().subset_of(vars))
      throw domain_error("value constrains variables outside the enumeration set");
  var_id max_var = vars.empty() ? 0 : vars.vars().back();
  std::set<sigma> out;
  for (std::size_t code = 0; code < total; ++code) {
    sigma s(max_var + 1);
    std::size_t rest = code;
    for (var_id v : vars.vars()) {
      s.bind(v, static_cast<std::uint32_t>(rest % base));
      rest /= base;
    }
    bool ok = true;
    for (const auto &p : parts) {
      if (p.is_bottom()) {
        ok = false;
        break;
      }
      std::uint32_t row = 0, mul = 1;
      for (var_id v : p.support()) {
        row += s.at(v) * mul;
        mul *= base;
      }
      if (!std::binary_search(p.rows().begin(), p.rows().end(), row)) {
        ok = false;
        break;
      }
    }
    if (ok)
      out.insert(s);
  }
  return out;
}

} // namespace

std::set<sigma> gamma_enumerate(const const_domain &dom, const decomposed<const_domain> &r,
                                const var_set &vars) {
  return gamma_impl(dom, r.parts, vars);
}

std::set<sigma> gamma_enumerate(const const_domain &dom, const stable<const_domain> &r,
                                const var_set &vars) {
  return gamma_impl(dom, r.parts(), vars);
}

namespace {

// Componentwise construction shared by the plain and abstract copy
// transformers. `restricted` must not constrain x any more.
template <typename Parts>
std::vector<const_value> copy_parts(const const_domain &dom, const variable_universe &universe,
                                    var_id x, var_id y, const Parts &restricted) {
  const std::size_t n = universe.size();
  const const_value &b = restricted[cluster_index(n, y, y)];
  // Diagonal over y's value set B.
  const std::uint32_t base = static_cast<std::uint32_t>(dom.atoms().atom_count());
  std::vector<std::uint32_t> b_atoms;
  if (!b.is_bottom()) {
    if (b.support().empty()) {
      for (std::uint32_t a = 0; a < base; ++a)
        b_atoms.push_back(a);
    } else {
      b_atoms = b.rows();
    }
  }
  std::vector<std::uint32_t> diag_rows;
  var_id lo = std::min(x, y), hi = std::max(x, y);
  for (std::uint32_t a : b_atoms)
    diag_rows.push_back(a + a * base);
  const_value diag = const_value::from_rows(base, {lo, hi}, std::move(diag_rows));

  std::vector<const_value> out;
  auto cs = clusters(universe);
  out.reserve(cs.size());
  for (const cluster &p : cs) {
    if (!p.contains(x)) {
      out.push_back(restricted[cluster_index(n, p.lo(), p.hi())]);
    } else if (p.singleton()) {
      out.push_back(dom.rename(b, y, x));
    } else if (p.contains(y)) {
      out.push_back(diag);
    } else {
      var_id z = p.lo() == x ? p.hi() : p.lo();
      out.push_back(dom.rename(restricted[cluster_index(n, y, z)], y, x));
    }
  }
  return out;
}

} // namespace

decomposed<const_domain> c2_assign_unknown(const const_domain &dom, var_id x,
                                           const decomposed<const_domain> &r) {
  return restrict2(dom, r, r.universe->all_vars().without(x));
}

decomposed<const_domain> c2_assign_copy(const const_domain &dom, var_id x, var_id y,
                                        const decomposed<const_domain> &r) {
  if (x == y)
    return r;
  auto restricted = restrict2(dom, r, r.universe->all_vars().without(x));
  decomposed<const_domain> out;
  out.universe = r.universe;
  out.parts = copy_parts(dom, *r.universe, x, y, restricted.parts);
  return out;
}

decomposed<const_domain> c2_assign_choice(const const_domain &dom, var_id x, std::uint64_t aset,
                                          const std::vector<var_id> &ys,
                                          const decomposed<const_domain> &r) {
  if (aset & ~dom.atoms().value_mask())
    throw domain_error("assignment constants must come from the value universe");
  for (var_id y : ys)
    if (y == x)
      throw domain_error("choice right-hand side must not mention the assigned variable");
  decomposed<const_domain> acc =
      aset == 0 ? decomposed_bottom(dom, *r.universe)
                : meet2(dom, c2_assign_unknown(dom, x, r),
                        decompose(dom, *r.universe, dom.prop_value(x, aset)));
  for (var_id y : ys)
    acc = join2(dom, acc, c2_assign_copy(dom, x, y, r));
  return acc;
}

decomposed<const_domain> c2_guard_pos(const const_domain &dom, var_id x, std::uint64_t aset,
                                      const decomposed<const_domain> &r) {
  return guard2(dom, r, dom.prop_value(x, aset));
}

decomposed<const_domain> c2_guard_neg(const const_domain &dom, var_id x, std::uint64_t aset,
                                      const decomposed<const_domain> &r) {
  if (aset & ~dom.atoms().value_mask())
    throw domain_error("negative guard set must come from the value universe");
  return c2_guard_pos(dom, x, dom.atoms().full_mask() & ~aset, r);
}

stable<const_domain> assign_unknown(const const_domain &dom, var_id x,
                                    const stable<const_domain> &r) {
  return abstract_restrict(dom, r, r.universe().all_vars().without(x));
}

stable<const_domain> assign_copy(const const_domain &dom, var_id x, var_id y,
                                 const stable<const_domain> &r, const iteration_budget &budget,
                                 normalize_stats *stats) {
  if (x == y)
    return r;
  auto restricted = abstract_restrict(dom, r, r.universe().all_vars().without(x));
  collection<const_domain> out;
  out.universe = &r.universe();
  out.parts = copy_parts(dom, r.universe(), x, y, restricted.parts());
  return ensure_stable(dom, std::move(out), budget, stats);
}

namespace {

stable<const_domain> meet_condition(const const_domain &dom, const stable<const_domain> &r,
                                    const const_value &cond, const iteration_budget &budget,
                                    normalize_stats *stats = nullptr) {
  auto met = meet2(dom, r.get(), decompose(dom, r.universe(), cond));
  return ensure_stable(dom, std::move(met), budget, stats);
}

} // namespace

stable<const_domain> assign_choice(const const_domain &dom, var_id x, std::uint64_t aset,
                                   const std::vector<var_id> &ys, const stable<const_domain> &r,
                                   const iteration_budget &budget, normalize_stats *stats) {
  if (aset & ~dom.atoms().value_mask())
    throw domain_error("assignment constants must come from the value universe");
  for (var_id y : ys)
    if (y == x)
      throw domain_error("choice right-hand side must not mention the assigned variable");
  stable<const_domain> acc =
      aset == 0 ? stable_bottom(dom, r.universe())
                : meet_condition(dom, assign_unknown(dom, x, r), dom.prop_value(x, aset), budget,
                                 stats);
  for (var_id y : ys) {
    normalize_stats copy_stats;
    acc = abstract_join(dom, acc, assign_copy(dom, x, y, r, budget, &copy_stats));
    if (stats) {
      stats->updates += copy_stats.updates;
      stats->rounds += copy_stats.rounds;
    }
  }
  return acc;
}

stable<const_domain> guard_pos(const const_domain &dom, var_id x, std::uint64_t aset,
                               const stable<const_domain> &r, const iteration_budget &budget,
                               normalize_stats *stats) {
  return meet_condition(dom, r, dom.prop_value(x, aset), budget, stats);
}

stable<const_domain> guard_neg(const const_domain &dom, var_id x, std::uint64_t aset,
                               const stable<const_domain> &r, const iteration_budget &budget,
                               normalize_stats *stats) {
  if (aset & ~dom.atoms().value_mask())
    throw domain_error("negative guard set must come from the value universe");
  return guard_pos(dom, x, dom.atoms().full_mask() & ~aset, r, budget, stats);
}

std::size_t occurring_atom_count(const collection<const_domain> &c) {
  std::uint64_t seen = 0;
  for (const auto &part : c.parts) {
    const std::uint32_t base = part.atom_count();
    if (part.is_top()) {
      seen = (std::uint64_t(1) << base) - 1;
      continue;
    }
    for (std::uint32_t row : part.rows()) {
      std::uint32_t rest = row;
      for (std::size_t i = 0; i < part.support().size(); ++i) {
        seen |= std::uint64_t(1) << (rest % base);
        rest /= base;
      }
    }
  }
  return static_cast<std::size_t>(std::popcount(seen));
}

iteration_budget const_collection_budget(const collection<const_domain> &c) {
  std::size_t m = occurring_atom_count(c);
  return default_budget(c.universe->size(), std::max<std::size_t>(m, 1));
}

} // namespace weakrel
