#pragma once

#include <cassert>
#include <set>

#include "weakrel/relational.hpp"

namespace weakrel {

// A per-cluster family without the stability requirement. Same shape as
// decomposed<D>; kept as an alias since only the contracts differ.
template <relational_domain D>
using collection = decomposed<D>;

struct iteration_budget {
  std::size_t max_rounds = 0;  // cap on worklist pops
  std::size_t max_updates = 0; // cap on strict component decreases

  iteration_budget(std::size_t rounds, std::size_t updates)
      : max_rounds(rounds), max_updates(updates) {
    if (rounds == 0 || updates == 0)
      throw domain_error("iteration budget fields must be positive");
  }
};

// Budget sized from the height argument: every component chain is bounded by
// the number of per-cluster iterate values, which for the shipped instances is
// determined by the occurring constants m.
inline iteration_budget default_budget(std::size_t n_vars, std::size_t m_constants) {
  std::size_t c = n_vars * (n_vars + 1) / 2;
  std::size_t updates = c * (m_constants * m_constants + 2);
  std::size_t rounds = c + updates * (2 * n_vars + 1) + 16;
  return iteration_budget(rounds, updates);
}

// True iff the collection solves every constraint
//   r_{x,y}  leq  restrict(r_{x,z} meet r_{z,y}, {x,y})
// for all x, y, z in the universe (x = y yields the singleton constraints).
template <relational_domain D>
bool is_stable(const D &dom, const collection<D> &c) {
  const std::size_t n = c.universe->size();
  for (var_id x = 0; x < n; ++x)
    for (var_id y = x; y < n; ++y) {
      const auto &lhs = c.parts[cluster_index(n, x, y)];
      var_set xy = cluster(x, y).vars();
      for (var_id z = 0; z < n; ++z) {
        auto rhs = dom.restrict_to(
            dom.meet(c.parts[cluster_index(n, x, z)], c.parts[cluster_index(n, z, y)]), xy);
        if (!dom.leq(lhs, rhs))
          return false;
      }
    }
  return true;
}

// A collection that solves the constraint system with itself as start values;
// the carrier of the abstract 2-decomposable domain. Instances are produced by
// kleene_normalize and by the stability-preserving operations below.
template <relational_domain D>
class stable {
public:
  static stable checked(const D &dom, collection<D> c) {
    if (!is_stable(dom, c))
      throw domain_error("collection is not stable");
    return stable(std::move(c));
  }
  static stable trusted(collection<D> c) { return stable(std::move(c)); }

  const collection<D> &get() const { return c_; }
  const variable_universe &universe() const { return *c_.universe; }
  const std::vector<typename D::value_type> &parts() const { return c_.parts; }
  const typename D::value_type &part(var_id x, var_id y) const { return c_.part(x, y); }

private:
  explicit stable(collection<D> c) : c_(std::move(c)) {}
  collection<D> c_;
};

struct normalize_stats {
  std::size_t updates = 0;
  std::size_t rounds = 0;
};

// Greatest solution of the cluster constraint system below the start values,
// computed by worklist Kleene iteration. Deterministic: the pending set is
// processed in cluster-index order, and an update re-queues every cluster
// sharing a variable. Throws budget_exhausted_error when the budget runs out,
// which signals a non-2-nice instance or a budget that is too small.
template <relational_domain D>
stable<D> kleene_normalize(const D &dom, collection<D> c, const iteration_budget &budget,
                           normalize_stats *stats = nullptr) {
  const std::size_t n = c.universe->size();
  const auto cs = clusters(*c.universe);
  std::set<std::size_t> pending;
  for (std::size_t i = 0; i < cs.size(); ++i)
    pending.insert(i);

  normalize_stats local;
  while (!pending.empty()) {
    if (++local.rounds > budget.max_rounds)
      throw budget_exhausted_error("iteration budget exceeded");
    std::size_t idx = *pending.begin();
    pending.erase(pending.begin());

    const cluster &p = cs[idx];
    var_set pv = p.vars();
    auto v = c.parts[idx];
    for (var_id z = 0; z < n; ++z) {
      auto rhs = dom.restrict_to(
          dom.meet(c.parts[cluster_index(n, p.lo(), z)], c.parts[cluster_index(n, z, p.hi())]),
          pv);
      v = dom.meet(v, rhs);
    }
    if (!dom.equal(v, c.parts[idx])) {
      assert(dom.leq(v, c.parts[idx]) && "kleene iteration must descend");
      c.parts[idx] = std::move(v);
      if (++local.updates > budget.max_updates)
        throw budget_exhausted_error("iteration budget exceeded");
      for (std::size_t j = 0; j < cs.size(); ++j)
        if (cs[j].intersects(p))
          pending.insert(j);
    }
  }
  if (stats)
    *stats = local;
  return stable<D>::trusted(std::move(c));
}

// Componentwise join; stable without re-normalization and the least upper
// bound of the two collections.
template <relational_domain D>
stable<D> abstract_join(const D &dom, const stable<D> &r1, const stable<D> &r2) {
  return stable<D>::trusted(join2(dom, r1.get(), r2.get()));
}

// Componentwise restriction; stable without re-normalization.
template <relational_domain D>
stable<D> abstract_restrict(const D &dom, const stable<D> &r, const var_set &ys) {
  return stable<D>::trusted(restrict2(dom, r.get(), ys));
}

// Greatest lower bound: componentwise meets re-normalized.
template <relational_domain D>
stable<D> abstract_meet(const D &dom, const stable<D> &r1, const stable<D> &r2,
                        const iteration_budget &budget, normalize_stats *stats = nullptr) {
  return kleene_normalize(dom, meet2(dom, r1.get(), r2.get()), budget, stats);
}

template <relational_domain D>
bool abstract_leq(const D &dom, const stable<D> &r1, const stable<D> &r2) {
  return leq2(dom, r1.get(), r2.get());
}

template <relational_domain D>
bool abstract_equal(const D &dom, const stable<D> &r1, const stable<D> &r2) {
  return equal2(dom, r1.get(), r2.get());
}

// Exact restrictions of a domain value always solve the constraint system.
template <relational_domain D>
stable<D> decompose_stable(const D &dom, const variable_universe &universe,
                           const typename D::value_type &r) {
  return stable<D>::trusted(decompose(dom, universe, r));
}

template <relational_domain D>
stable<D> stable_top(const D &dom, const variable_universe &universe) {
  return stable<D>::trusted(decomposed_top(dom, universe));
}

template <relational_domain D>
stable<D> stable_bottom(const D &dom, const variable_universe &universe) {
  return stable<D>::trusted(decomposed_bottom(dom, universe));
}

// Wraps a collection that is expected to be stable already, re-normalizing
// only when the expectation fails. Transformers whose componentwise results
// are stable by construction use this to avoid paying for normalization.
template <relational_domain D>
stable<D> ensure_stable(const D &dom, collection<D> c, const iteration_budget &budget,
                        normalize_stats *stats = nullptr) {
  if (is_stable(dom, c)) {
    if (stats)
      *stats = normalize_stats{};
    return stable<D>::trusted(std::move(c));
  }
  return kleene_normalize(dom, std::move(c), budget, stats);
}

} // namespace weakrel
