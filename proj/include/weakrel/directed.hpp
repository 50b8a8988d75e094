#pragma once

#include "weakrel/poset.hpp"
#include "weakrel/relational.hpp"

namespace weakrel {

// One inequality: d <= x (lower bound), x <= d (upper bound), or x <= y.
struct directed_atom {
  enum class tag { lower, upper, var_le };

  tag kind;
  var_id x;  // the variable (lower/upper) or the left variable (var_le)
  var_id y;  // the right variable (var_le only)
  pvalue d;  // the constant (lower/upper only)

  static directed_atom lower(pvalue d, var_id x) {
    return {tag::lower, x, 0, std::move(d)};
  }
  static directed_atom upper(var_id x, pvalue d) {
    return {tag::upper, x, 0, std::move(d)};
  }
  static directed_atom var_le(var_id x, var_id y) { return {tag::var_le, x, y, pvalue{}}; }
};

// Finite conjunction of inequalities over a partial order, or bottom. Atom
// sets are kept sorted and deduplicated, so set equality is structural
// equality of the vectors.
struct directed_conj {
  bool bottom = false;
  std::vector<directed_atom> atoms;

  static directed_conj bot() { return {true, {}}; }
  static directed_conj top() { return {false, {}}; }
  static directed_conj of(std::vector<directed_atom> atoms) {
    return {false, std::move(atoms)};
  }

  bool is_top() const { return !bottom && atoms.empty(); }
  var_set vars() const;
  std::vector<pvalue> occurring_constants(const poset &p) const; // sorted, unique
};

int compare_atoms(const poset &p, const directed_atom &a, const directed_atom &b);
bool atoms_equal(const poset &p, const directed_atom &a, const directed_atom &b);
void sort_atoms(const poset &p, std::vector<directed_atom> &atoms);
bool conj_equal(const poset &p, const directed_conj &a, const directed_conj &b);
directed_conj conj_and(const poset &p, const directed_conj &a, const directed_conj &b);

// 0-normal form: transitive closure over variables and occurring constants,
// bottom on incompatible constant pairs, redundancy removal (x <= x, dominated
// bounds), and bottom when some variable's bound set has no common bound in P.
// Satisfiable conjunctions never map to bottom.
directed_conj nf0(const poset &p, const directed_conj &c);

// 1-normal form: nf0, then per variable the lower bounds are merged by join
// and the upper bounds by meet. Bounds equal to the least/greatest element of
// P are vacuous and removed, which makes the form canonical for lattices.
// Requires a lattice, or a bounded-complete order with an upper bound for
// every occurring variable.
directed_conj nf1(const poset &p, const directed_conj &c);

// Satisfiability and implication via 1-normal forms; lattices only.
bool sat(const poset &p, const directed_conj &c);
bool implies(const poset &p, const directed_conj &c1, const directed_conj &c2);

// Abstract ordering via 0-normal forms: leq0(c1, c2) iff
// nf0(c1) = nf0(c1 and c2). Sound for implication but incomplete.
bool leq0(const poset &p, const directed_conj &c1, const directed_conj &c2);

// Keep the atoms whose variables all lie in Y; normal forms are preserved.
directed_conj project(const directed_conj &c, const var_set &ys);

// Least upper bound of two 1-normal conjunctions: shared variable constraints,
// lower bounds met, upper bounds joined (dropped when the join does not
// exist, as for the prefix order). Inputs must not be bottom.
directed_conj join_lattice(const poset &p, const directed_conj &c1, const directed_conj &c2);

// Least upper bound w.r.t. leq0 for arbitrary orders: shared variable
// constraints, and a bound survives only when the other side carries a bound
// that implies it. Re-normalized with nf0. Inputs must not be bottom.
directed_conj join_general(const poset &p, const directed_conj &c1, const directed_conj &c2);

// Conjunction followed by normalization (nf1 on lattices, nf0 otherwise).
directed_conj meet_directed(const poset &p, const directed_conj &c1, const directed_conj &c2);

// Implication dispatch: complete on lattices, leq0 otherwise.
bool implies_for(const poset &p, const directed_conj &c1, const directed_conj &c2);

// The directed relational domain D[P] (1-normal forms, lattice P) or D[P]_0
// (0-normal forms, arbitrary P).
class directed_domain {
public:
  using value_type = directed_conj;

  explicit directed_domain(const poset *p) : p_(p), lattice_(p->kind() == poset_kind::lattice) {}

  const poset &order() const { return *p_; }
  bool lattice() const { return lattice_; }

  directed_conj normalize(const directed_conj &c) const {
    return lattice_ ? nf1(*p_, c) : nf0(*p_, c);
  }

  bool leq(const directed_conj &a, const directed_conj &b) const {
    return implies_for(*p_, a, b);
  }
  directed_conj join(const directed_conj &a, const directed_conj &b) const {
    if (a.bottom)
      return b;
    if (b.bottom)
      return a;
    return lattice_ ? join_lattice(*p_, a, b) : join_general(*p_, a, b);
  }
  directed_conj meet(const directed_conj &a, const directed_conj &b) const {
    return meet_directed(*p_, a, b);
  }
  directed_conj top() const { return directed_conj::top(); }
  directed_conj bottom() const { return directed_conj::bot(); }
  directed_conj restrict_to(const directed_conj &a, const var_set &ys) const {
    return project(a, ys);
  }
  bool is_bottom(const directed_conj &a) const { return a.bottom; }
  bool equal(const directed_conj &a, const directed_conj &b) const {
    return conj_equal(*p_, a, b);
  }

private:
  const poset *p_;
  bool lattice_;
};

// Atom syntax: `"abc" <= x`, `x <= "abc"`, `x <= y`, conjunction by `&`,
// `top`, `bot`; constants per the order's own syntax.
directed_conj parse_directed_conj(const std::string &text, const variable_universe &vars,
                                  const poset &p);
std::string format_directed_conj(const directed_conj &c, const variable_universe &vars,
                                 const poset &p);

} // namespace weakrel
