#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "weakrel/errors.hpp"

namespace weakrel {

using big_int = boost::multiprecision::cpp_int;

// Value of some partial order: an integer, a subset (bitmask over a declared
// universe), a multiset (multiplicity per declared universe atom), a string,
// or an element index of an explicit finite poset.
using pvalue = std::variant<big_int, std::uint64_t, std::vector<std::int64_t>, std::string,
                            std::uint32_t>;

enum class poset_kind { lattice, bounded_complete, general };

// Partial order of constant values consumed by the directed domains. leq must
// be reflexive, transitive, and antisymmetric; meet/join are the lattice
// operations where they exist. All implementations are stateless predicates.
class poset {
public:
  virtual ~poset() = default;

  virtual std::string name() const = 0;
  virtual poset_kind kind() const = 0;
  virtual bool leq(const pvalue &a, const pvalue &b) const = 0;
  virtual std::optional<pvalue> meet(const pvalue &a, const pvalue &b) const = 0;
  virtual std::optional<pvalue> join(const pvalue &a, const pvalue &b) const = 0;
  virtual std::optional<pvalue> least() const { return std::nullopt; }
  virtual std::optional<pvalue> greatest() const { return std::nullopt; }
  virtual bool has_common_upper_bound(std::span<const pvalue> s) const = 0;
  virtual bool has_common_lower_bound(std::span<const pvalue> s) const = 0;

  // Deterministic total order used for canonical sorting and printing only.
  virtual int compare_total(const pvalue &a, const pvalue &b) const = 0;

  virtual std::string print(const pvalue &v) const = 0;
  virtual pvalue parse_value(const std::string &text) const = 0;

  pvalue meet_checked(const pvalue &a, const pvalue &b) const {
    auto m = meet(a, b);
    if (!m)
      throw unsupported_operation("operation unsupported for this order: meet");
    return *m;
  }
  pvalue join_checked(const pvalue &a, const pvalue &b) const {
    auto j = join(a, b);
    if (!j)
      throw unsupported_operation("operation unsupported for this order: join");
    return *j;
  }
};

// 2^U for a declared finite universe, ordered by inclusion.
std::unique_ptr<poset> make_subset_poset(std::vector<std::string> universe);
// Integers with the natural order; arbitrary precision.
std::unique_ptr<poset> make_int_poset();
// Multisets over a declared universe, ordered by multiset inclusion.
std::unique_ptr<poset> make_multiset_poset(std::vector<std::string> universe);

enum class string_order { prefix, substring, scattered };
std::unique_ptr<poset> make_string_poset(string_order order, std::string alphabet = "");

// Explicit finite poset given by its elements and order matrix. The matrix is
// validated (reflexive, antisymmetric, transitive).
std::unique_ptr<poset> make_explicit_poset(std::vector<std::string> elements,
                                           std::vector<std::vector<bool>> leq_matrix);

// Order selection by name: `subset(a,b,c)`, `int`, `multiset(a,b)`, `prefix`,
// `substring`, `scattered`; a colon may replace the parentheses, as in
// `subset:a,b,c`.
std::unique_ptr<poset> make_poset(const std::string &spec);

// Accessors used by oracles and the explicit-poset helpers.
const std::vector<std::string> &explicit_poset_elements(const poset &p);
std::uint32_t explicit_poset_index(const poset &p, const std::string &element);

} // namespace weakrel
