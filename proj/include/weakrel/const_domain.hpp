#pragma once

#include <set>

#include "weakrel/const_formula.hpp"
#include "weakrel/normalization.hpp"
#include "weakrel/relational.hpp"

namespace weakrel {

// A disjunctive-constants relation in canonical table form: the set of
// satisfying assignments over a minimal support. A variable whose column is
// free (every atom occurs independently) is dropped from the support, so
// structural equality coincides with semantic equality over the full variable
// set. Bottom is the empty table over empty support; top the one-row table
// over empty support.
class const_value {
public:
  static const_value top(std::uint32_t atom_count);
  static const_value bottom(std::uint32_t atom_count);
  // Rows are mixed-radix codes over the support in sorted var order, least
  // significant digit first.
  static const_value from_rows(std::uint32_t atom_count, std::vector<var_id> support,
                               std::vector<std::uint32_t> rows);

  bool is_bottom() const { return rows_.empty(); }
  bool is_top() const { return support_.empty() && !rows_.empty(); }
  std::uint32_t atom_count() const { return atoms_; }
  const std::vector<var_id> &support() const { return support_; }
  const std::vector<std::uint32_t> &rows() const { return rows_; }

  var_set support_set() const { return var_set(support_); }

  bool operator==(const const_value &other) const = default;

private:
  const_value() = default;
  void canonicalize();

  std::uint32_t atoms_ = 0;
  std::vector<var_id> support_;      // sorted
  std::vector<std::uint32_t> rows_;  // sorted, unique
};

// Table expanded over an explicit variable tuple (no support minimization);
// the canonical pair normal form L of a cluster formula.
struct pair_normal_form {
  std::vector<var_id> vars;
  std::vector<std::vector<std::uint32_t>> tuples; // sorted lexicographically
  bool operator==(const pair_normal_form &other) const = default;
};

// The disjunctive-constants relational domain over a fixed value universe.
class const_domain {
public:
  using value_type = const_value;

  explicit const_domain(value_universe atoms) : atoms_(std::move(atoms)) {}

  const value_universe &atoms() const { return atoms_; }

  bool leq(const const_value &a, const const_value &b) const;
  const_value join(const const_value &a, const const_value &b) const;
  const_value meet(const const_value &a, const const_value &b) const;
  const_value top() const { return const_value::top(atoms_.atom_count()); }
  const_value bottom() const { return const_value::bottom(atoms_.atom_count()); }
  const_value restrict_to(const const_value &a, const var_set &ys) const;
  bool is_bottom(const const_value &a) const { return a.is_bottom(); }
  bool equal(const const_value &a, const const_value &b) const { return a == b; }

  // Semantic table of a formula, enumerated over its variables.
  const_value to_value(const const_formula &f) const;
  // Single proposition x in A (mask over atom indices).
  const_value prop_value(var_id x, std::uint64_t mask) const;
  const_value rename(const const_value &v, var_id from, var_id to) const;

  // Canonical DNF rendering; parses back through parse_const_formula.
  std::string render(const const_value &v, const variable_universe &universe) const;

private:
  value_universe atoms_;
};

pair_normal_form pair_normal(const const_domain &dom, const const_formula &f, const cluster &p);

// Conjunction of clauses with at most two propositions over distinct
// variables.
struct cnf_prop {
  var_id var;
  std::uint64_t atoms;
};
struct cnf_clause {
  std::vector<cnf_prop> props; // size 1 or 2, distinct vars
};
struct two_clause_cnf {
  bool bottom = false;
  std::vector<cnf_clause> clauses;
};

const_formula cnf_to_formula(const two_clause_cnf &cnf);

// Exact satisfiability by enumeration over the effective universe; guarded
// against large instances.
bool sat_exact(const two_clause_cnf &cnf, const const_domain &dom, const var_set &vars);

// All assignments over the effective universe satisfying every part.
std::set<sigma> gamma_enumerate(const const_domain &dom, const decomposed<const_domain> &r,
                                const var_set &vars);
std::set<sigma> gamma_enumerate(const const_domain &dom, const stable<const_domain> &r,
                                const var_set &vars);

// Transformers at the plain 2-decomposable level (componentwise, exact).
decomposed<const_domain> c2_assign_unknown(const const_domain &dom, var_id x,
                                           const decomposed<const_domain> &r);
decomposed<const_domain> c2_assign_copy(const const_domain &dom, var_id x, var_id y,
                                        const decomposed<const_domain> &r);
decomposed<const_domain> c2_assign_choice(const const_domain &dom, var_id x, std::uint64_t aset,
                                          const std::vector<var_id> &ys,
                                          const decomposed<const_domain> &r);
decomposed<const_domain> c2_guard_pos(const const_domain &dom, var_id x, std::uint64_t aset,
                                      const decomposed<const_domain> &r);
decomposed<const_domain> c2_guard_neg(const const_domain &dom, var_id x, std::uint64_t aset,
                                      const decomposed<const_domain> &r);

// Transformers on stable collections (sound; re-normalize when componentwise
// construction leaves the collection unstable).
stable<const_domain> assign_unknown(const const_domain &dom, var_id x,
                                    const stable<const_domain> &r);
stable<const_domain> assign_copy(const const_domain &dom, var_id x, var_id y,
                                 const stable<const_domain> &r, const iteration_budget &budget,
                                 normalize_stats *stats = nullptr);
stable<const_domain> assign_choice(const const_domain &dom, var_id x, std::uint64_t aset,
                                   const std::vector<var_id> &ys, const stable<const_domain> &r,
                                   const iteration_budget &budget,
                                   normalize_stats *stats = nullptr);
stable<const_domain> guard_pos(const const_domain &dom, var_id x, std::uint64_t aset,
                               const stable<const_domain> &r, const iteration_budget &budget,
                               normalize_stats *stats = nullptr);
stable<const_domain> guard_neg(const const_domain &dom, var_id x, std::uint64_t aset,
                               const stable<const_domain> &r, const iteration_budget &budget,
                               normalize_stats *stats = nullptr);

// Number of distinct atoms appearing in rows of the collection's tables; a
// top table mentions every atom.
std::size_t occurring_atom_count(const collection<const_domain> &c);

// Iteration budget sized from the atoms occurring in the collection rows.
iteration_budget const_collection_budget(const collection<const_domain> &c);

} // namespace weakrel
