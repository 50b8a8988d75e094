#pragma once

#include "weakrel/directed.hpp"
#include "weakrel/normalization.hpp"

namespace weakrel {

// Finite disjunction of normal-form conjunctions: the disjunctive completion
// of the directed domain. The empty set is bottom. Disjuncts are normalized,
// never bottom, pruned (none implied by another), and canonically ordered, so
// structural equality is canonical equality under the Hoare order.
struct disj_value {
  std::vector<directed_conj> disjuncts;

  static disj_value bot() { return {}; }
  static disj_value top() { return {{directed_conj::top()}}; }

  bool is_bottom() const { return disjuncts.empty(); }
  bool is_top() const { return disjuncts.size() == 1 && disjuncts[0].is_top(); }
};

// The disjunctive directed relational domain over a fixed order.
class disj_domain {
public:
  using value_type = disj_value;

  explicit disj_domain(const poset *p) : base_(p) {}

  const poset &order() const { return base_.order(); }
  const directed_domain &base() const { return base_; }

  // Normalize + prune an arbitrary list of conjunctions.
  disj_value make(std::vector<directed_conj> disjuncts) const;

  bool leq(const disj_value &a, const disj_value &b) const;       // Hoare order
  disj_value join(const disj_value &a, const disj_value &b) const; // union + prune
  disj_value meet(const disj_value &a, const disj_value &b) const; // pairwise conjunction
  disj_value top() const { return disj_value::top(); }
  disj_value bottom() const { return disj_value::bot(); }
  disj_value restrict_to(const disj_value &a, const var_set &ys) const;
  bool is_bottom(const disj_value &a) const { return a.is_bottom(); }
  bool equal(const disj_value &a, const disj_value &b) const;

  // Sound collapse: merge disjuncts until at most max_disjuncts remain.
  disj_value cap(disj_value v, std::size_t max_disjuncts) const;
  disj_value join_capped(const disj_value &a, const disj_value &b,
                         std::size_t max_disjuncts) const {
    return cap(join(a, b), max_disjuncts);
  }

private:
  std::vector<directed_conj> prune(std::vector<directed_conj> ds) const;
  directed_domain base_;
};

disj_value d_join(const disj_domain &dom, const disj_value &a, const disj_value &b);
disj_value d_meet(const disj_domain &dom, const disj_value &a, const disj_value &b);
disj_value d_restrict(const disj_domain &dom, const disj_value &a, const var_set &ys);
bool d_leq(const disj_domain &dom, const disj_value &a, const disj_value &b);

// Kleene normalization of a per-cluster family of disjunctions.
stable<disj_domain> normalize_disj_collection(const disj_domain &dom,
                                              collection<disj_domain> c,
                                              const iteration_budget &budget,
                                              normalize_stats *stats = nullptr);

// Budget sized from the constants occurring in the collection (all
// intermediate bounds are drawn from their meet/join closure).
iteration_budget disj_collection_budget(const disj_domain &dom,
                                        const collection<disj_domain> &c);

// Assignment right-hand sides of the directed domains.
struct assign_rhs {
  enum class tag { unknown, constant, variable, set_union, set_inter, prefix_concat,
                   substring_concat };
  struct piece { // a constant or a variable
    bool is_var = false;
    var_id var = 0;
    pvalue val;
    static piece of_var(var_id v) { return {true, v, pvalue{}}; }
    static piece of_val(pvalue d) { return {false, 0, std::move(d)}; }
  };

  tag kind = tag::unknown;
  pvalue constant;           // constant
  var_id y1 = 0, y2 = 0;     // variable / set_union / set_inter
  std::vector<piece> pieces; // prefix_concat (1 piece) / substring_concat

  static assign_rhs unknown() { return {}; }
  static assign_rhs of_constant(pvalue d) {
    return {tag::constant, std::move(d), 0, 0, {}};
  }
  static assign_rhs of_variable(var_id y) { return {tag::variable, pvalue{}, y, 0, {}}; }
  static assign_rhs of_union(var_id y1, var_id y2) {
    return {tag::set_union, pvalue{}, y1, y2, {}};
  }
  static assign_rhs of_inter(var_id y1, var_id y2) {
    return {tag::set_inter, pvalue{}, y1, y2, {}};
  }
  static assign_rhs of_prefix_concat(piece s) {
    return {tag::prefix_concat, pvalue{}, 0, 0, {std::move(s)}};
  }
  static assign_rhs of_substring_concat(std::vector<piece> ss) {
    return {tag::substring_concat, pvalue{}, 0, 0, std::move(ss)};
  }

  var_set vars() const;
};

// Throws unsupported_operation when the right-hand side form is not defined
// for the order (unions need sets or multisets, concatenations need the
// matching string order).
void check_rhs_supported(const poset &p, const assign_rhs &rhs);

// The conjuncts added for x := rhs.
std::vector<directed_atom> rhs_atoms(const poset &p, var_id x, const assign_rhs &rhs);

// Flat transformer on a disjunction over the full variable set. Handles
// x occurring in rhs by splitting through an internal temporary.
disj_value assign(const disj_domain &dom, const variable_universe &universe, var_id x,
                  const assign_rhs &rhs, const disj_value &v);

// Positive inequality guard s1 <= s2 (each side a variable or constant):
// meet with the singleton disjunction of the atom.
struct guard_term {
  bool is_var = false;
  var_id var = 0;
  pvalue val;
  static guard_term of_var(var_id v) { return {true, v, pvalue{}}; }
  static guard_term of_val(pvalue d) { return {false, 0, std::move(d)}; }
};

disj_value guard_ineq(const disj_domain &dom, const guard_term &s1, const guard_term &s2,
                      const disj_value &v);

// Collection-level transformers for the weakly relational domain.
stable<disj_domain> assign(const disj_domain &dom, var_id x, const assign_rhs &rhs,
                           const stable<disj_domain> &r, const iteration_budget &budget,
                           normalize_stats *stats = nullptr);
stable<disj_domain> guard_ineq(const disj_domain &dom, const guard_term &s1,
                               const guard_term &s2, const stable<disj_domain> &r,
                               const iteration_budget &budget, normalize_stats *stats = nullptr);

// Negated inequality guard: removes from the condition's cluster every
// disjunct that provably implies s1 <= s2, then re-normalizes. On non-lattice
// orders implication is decided by leq0, so removable disjuncts may survive;
// the removal itself is always sound.
stable<disj_domain> guard_neg_ineq(const disj_domain &dom, const guard_term &s1,
                                   const guard_term &s2, const stable<disj_domain> &r,
                                   const iteration_budget &budget,
                                   normalize_stats *stats = nullptr);

// Disjunction syntax: conjunctions joined by `|`.
disj_value parse_disj_value(const std::string &text, const variable_universe &vars,
                            const disj_domain &dom);
std::string format_disj_value(const disj_value &v, const variable_universe &vars,
                              const poset &p);

} // namespace weakrel
