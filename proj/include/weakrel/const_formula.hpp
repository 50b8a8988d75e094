#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "weakrel/universe.hpp"

namespace weakrel {

// Finite set of value atoms plus the reserved atom "@other" standing for every
// concrete value outside the universe. The reserved atom always participates;
// its index is values().size().
class value_universe {
public:
  explicit value_universe(std::vector<std::string> values);

  std::size_t atom_count() const { return values_.size() + 1; } // includes bullet
  std::uint32_t bullet() const { return static_cast<std::uint32_t>(values_.size()); }
  const std::vector<std::string> &values() const { return values_; }

  const std::string &atom_name(std::uint32_t idx) const;
  std::uint32_t atom_index(const std::string &name) const; // "@other" -> bullet

  std::uint64_t full_mask() const { return (std::uint64_t(1) << atom_count()) - 1; }
  std::uint64_t value_mask() const { return full_mask() & ~(std::uint64_t(1) << bullet()); }

  bool operator==(const value_universe &other) const = default;

private:
  std::vector<std::string> values_; // sorted, unique, excludes "@other"
  static const std::string bullet_name_;
};

// Assignment of atoms to variables; entries may be unbound.
class sigma {
public:
  explicit sigma(std::size_t n_vars) : atoms_(n_vars, -1) {}

  void bind(var_id v, std::uint32_t atom) { atoms_.at(v) = static_cast<std::int32_t>(atom); }
  bool bound(var_id v) const { return atoms_.at(v) >= 0; }
  std::uint32_t at(var_id v) const {
    std::int32_t a = atoms_.at(v);
    if (a < 0)
      throw domain_error("unbound variable in assignment");
    return static_cast<std::uint32_t>(a);
  }
  std::size_t size() const { return atoms_.size(); }
  bool operator==(const sigma &other) const = default;
  bool operator<(const sigma &other) const { return atoms_ < other.atoms_; }

private:
  std::vector<std::int32_t> atoms_;
};

// Monotone combination of multi-valued propositions x in A; no negation nodes.
struct const_formula {
  enum class node { bot, top, prop, conj, disj };

  node kind = node::top;
  var_id var = 0;          // prop
  std::uint64_t atoms = 0; // prop: membership mask over atom indices
  std::vector<const_formula> children;

  static const_formula bot() { return {node::bot, 0, 0, {}}; }
  static const_formula top() { return {node::top, 0, 0, {}}; }
  static const_formula prop(var_id v, std::uint64_t mask) { return {node::prop, v, mask, {}}; }
  static const_formula conj(std::vector<const_formula> cs) {
    return {node::conj, 0, 0, std::move(cs)};
  }
  static const_formula disj(std::vector<const_formula> cs) {
    return {node::disj, 0, 0, std::move(cs)};
  }
};

bool eval(const const_formula &f, const sigma &s);

var_set formula_vars(const const_formula &f);

// Restriction by the DNF procedure: the formula is expanded to DNF,
// conjunctions containing an empty proposition are removed, and propositions
// over variables outside Y are dropped. Exponential blowup is accepted;
// intended for formulas over at most three variables.
const_formula restrict_formula(const const_formula &f, const var_set &ys);

// Text syntax: `x in {a,b}`, `and`, `or`, `bot`, `top`, parentheses; the
// reserved atom is spelled `@other`.
const_formula parse_const_formula(const std::string &text, const variable_universe &vars,
                                  const value_universe &atoms);
std::string format_const_formula(const const_formula &f, const variable_universe &vars,
                                 const value_universe &atoms);

} // namespace weakrel
