#pragma once

#include <concepts>
#include <vector>

#include "weakrel/universe.hpp"

namespace weakrel {

// Contract every relational domain instance satisfies. Values are immutable;
// operations are pure. restrict_to forgets all information about variables
// outside the given set and obeys the four restriction axioms:
//   restrict(r, X) = r
//   restrict(r, {}) = bot if r = bot else top
//   Y1 subset of Y2  implies  restrict(r, Y1) geq restrict(r, Y2)
//   restrict(restrict(r, Y1), Y2) = restrict(r, Y1 inter Y2)
template <typename D>
concept relational_domain = requires(const D &dom, const typename D::value_type &a,
                                     const typename D::value_type &b, const var_set &ys) {
  { dom.leq(a, b) } -> std::convertible_to<bool>;
  { dom.join(a, b) } -> std::same_as<typename D::value_type>;
  { dom.meet(a, b) } -> std::same_as<typename D::value_type>;
  { dom.top() } -> std::same_as<typename D::value_type>;
  { dom.bottom() } -> std::same_as<typename D::value_type>;
  { dom.restrict_to(a, ys) } -> std::same_as<typename D::value_type>;
  { dom.is_bottom(a) } -> std::convertible_to<bool>;
  { dom.equal(a, b) } -> std::convertible_to<bool>;
};

// One value per cluster of the universe, stored densely in clusters() order.
// The ordering is componentwise.
template <relational_domain D>
struct decomposed {
  const variable_universe *universe = nullptr;
  std::vector<typename D::value_type> parts;

  const typename D::value_type &part(var_id x, var_id y) const {
    return parts[cluster_index(universe->size(), x, y)];
  }
  typename D::value_type &part(var_id x, var_id y) {
    return parts[cluster_index(universe->size(), x, y)];
  }
};

namespace detail {
template <relational_domain D>
void require_same_universe(const decomposed<D> &a, const decomposed<D> &b) {
  if (a.universe != b.universe && !(a.universe && b.universe && *a.universe == *b.universe))
    throw domain_error("variable universe mismatch");
}
} // namespace detail

template <relational_domain D>
decomposed<D> decomposed_fill(const D &, const variable_universe &universe,
                              const typename D::value_type &v) {
  decomposed<D> out;
  out.universe = &universe;
  out.parts.assign(clusters(universe).size(), v);
  return out;
}

template <relational_domain D>
decomposed<D> decomposed_top(const D &dom, const variable_universe &universe) {
  return decomposed_fill(dom, universe, dom.top());
}

template <relational_domain D>
decomposed<D> decomposed_bottom(const D &dom, const variable_universe &universe) {
  return decomposed_fill(dom, universe, dom.bottom());
}

// parts[p] = restrict(r, p) for every cluster p.
template <relational_domain D>
decomposed<D> decompose(const D &dom, const variable_universe &universe,
                        const typename D::value_type &r) {
  decomposed<D> out;
  out.universe = &universe;
  auto cs = clusters(universe);
  out.parts.reserve(cs.size());
  for (const cluster &p : cs)
    out.parts.push_back(dom.restrict_to(r, p.vars()));
  return out;
}

// Meet of all cluster parts; recovers the represented value for values of the
// 2-decomposable subdomain.
template <relational_domain D>
typename D::value_type meet_of_parts(const D &dom, const decomposed<D> &r) {
  typename D::value_type acc = dom.top();
  for (const auto &p : r.parts)
    acc = dom.meet(acc, p);
  return acc;
}

// Componentwise least upper bound; the least upper bound of the 2-decomposable
// domain when the base satisfies the clusterwise-join law.
template <relational_domain D>
decomposed<D> join2(const D &dom, const decomposed<D> &r1, const decomposed<D> &r2) {
  detail::require_same_universe(r1, r2);
  decomposed<D> out;
  out.universe = r1.universe;
  out.parts.reserve(r1.parts.size());
  for (std::size_t i = 0; i < r1.parts.size(); ++i)
    out.parts.push_back(dom.join(r1.parts[i], r2.parts[i]));
  return out;
}

// Componentwise meet. The result need not be normal: parts may be coarser than
// the restrictions of the global meet.
template <relational_domain D>
decomposed<D> meet2(const D &dom, const decomposed<D> &r1, const decomposed<D> &r2) {
  detail::require_same_universe(r1, r2);
  decomposed<D> out;
  out.universe = r1.universe;
  out.parts.reserve(r1.parts.size());
  for (std::size_t i = 0; i < r1.parts.size(); ++i)
    out.parts.push_back(dom.meet(r1.parts[i], r2.parts[i]));
  return out;
}

// parts[p] = restrict(r_p, p inter Y); the best approximation of the restriction
// within the 2-decomposable domain.
template <relational_domain D>
decomposed<D> restrict2(const D &dom, const decomposed<D> &r, const var_set &ys) {
  decomposed<D> out;
  out.universe = r.universe;
  auto cs = clusters(*r.universe);
  out.parts.reserve(cs.size());
  for (std::size_t i = 0; i < cs.size(); ++i)
    out.parts.push_back(dom.restrict_to(r.parts[i], cs[i].vars().intersect(ys)));
  return out;
}

template <relational_domain D>
bool leq2(const D &dom, const decomposed<D> &r1, const decomposed<D> &r2) {
  detail::require_same_universe(r1, r2);
  for (std::size_t i = 0; i < r1.parts.size(); ++i)
    if (!dom.leq(r1.parts[i], r2.parts[i]))
      return false;
  return true;
}

template <relational_domain D>
bool equal2(const D &dom, const decomposed<D> &r1, const decomposed<D> &r2) {
  detail::require_same_universe(r1, r2);
  for (std::size_t i = 0; i < r1.parts.size(); ++i)
    if (!dom.equal(r1.parts[i], r2.parts[i]))
      return false;
  return true;
}

// Default guard transformer: meet with the decomposition of the condition
// relation. Domains override where a more precise transformer exists.
template <relational_domain D>
decomposed<D> guard2(const D &dom, const decomposed<D> &r, const typename D::value_type &cond) {
  return meet2(dom, r, decompose(dom, *r.universe, cond));
}

// Randomized check of the clusterwise-join law
//   restrict(r1 join r2, p) = restrict(r1, p) join restrict(r2, p)
// for all clusters p. There is no decision procedure for the law; callers feed
// sampled values and treat a false result as a counterexample.
template <relational_domain D>
bool check_clusterwise_join_law(const D &dom, const variable_universe &universe,
                                const typename D::value_type &r1,
                                const typename D::value_type &r2) {
  auto joined = dom.join(r1, r2);
  for (const cluster &p : clusters(universe)) {
    auto lhs = dom.restrict_to(joined, p.vars());
    auto rhs = dom.join(dom.restrict_to(r1, p.vars()), dom.restrict_to(r2, p.vars()));
    if (!dom.equal(lhs, rhs))
      return false;
  }
  return true;
}

} // namespace weakrel
