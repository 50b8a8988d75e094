#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "weakrel/errors.hpp"

namespace weakrel {

// Index of a variable within its variable_universe.
using var_id = std::uint32_t;

// Set of variables, kept sorted and deduplicated.
class var_set {
public:
  var_set() = default;
  var_set(std::initializer_list<var_id> vs) : vars_(vs) { normalize(); }
  explicit var_set(std::vector<var_id> vs) : vars_(std::move(vs)) { normalize(); }

  bool contains(var_id v) const {
    return std::binary_search(vars_.begin(), vars_.end(), v);
  }
  bool empty() const { return vars_.empty(); }
  std::size_t size() const { return vars_.size(); }
  const std::vector<var_id> &vars() const { return vars_; }

  var_set intersect(const var_set &other) const {
    std::vector<var_id> out;
    std::set_intersection(vars_.begin(), vars_.end(), other.vars_.begin(), other.vars_.end(),
                          std::back_inserter(out));
    return var_set(std::move(out));
  }
  var_set unite(const var_set &other) const {
    std::vector<var_id> out;
    std::set_union(vars_.begin(), vars_.end(), other.vars_.begin(), other.vars_.end(),
                   std::back_inserter(out));
    return var_set(std::move(out));
  }
  var_set without(var_id v) const {
    std::vector<var_id> out;
    for (var_id x : vars_)
      if (x != v)
        out.push_back(x);
    return var_set(std::move(out));
  }
  bool subset_of(const var_set &other) const {
    return std::includes(other.vars_.begin(), other.vars_.end(), vars_.begin(), vars_.end());
  }

  bool operator==(const var_set &other) const = default;

private:
  void normalize() {
    std::sort(vars_.begin(), vars_.end());
    vars_.erase(std::unique(vars_.begin(), vars_.end()), vars_.end());
  }
  std::vector<var_id> vars_;
};

// Nonempty set of at most two variables.
class cluster {
public:
  cluster(var_id a) : lo_(a), hi_(a) {}
  cluster(var_id a, var_id b) : lo_(std::min(a, b)), hi_(std::max(a, b)) {}

  bool singleton() const { return lo_ == hi_; }
  var_id lo() const { return lo_; }
  var_id hi() const { return hi_; }
  bool contains(var_id v) const { return v == lo_ || v == hi_; }
  bool intersects(const cluster &other) const {
    return contains(other.lo_) || contains(other.hi_);
  }
  var_set vars() const {
    return singleton() ? var_set{lo_} : var_set{lo_, hi_};
  }

  bool operator==(const cluster &other) const = default;

private:
  var_id lo_, hi_;
};

// Finite ordered set of variables; iteration order is lexicographic in the name.
class variable_universe {
public:
  variable_universe() = default;
  explicit variable_universe(std::vector<std::string> names) : names_(std::move(names)) {
    std::sort(names_.begin(), names_.end());
    names_.erase(std::unique(names_.begin(), names_.end()), names_.end());
    for (const auto &n : names_)
      if (n.empty())
        throw domain_error("variable names must be nonempty");
  }

  std::size_t size() const { return names_.size(); }
  const std::string &name(var_id v) const { return names_.at(v); }
  const std::vector<std::string> &names() const { return names_; }

  var_id id_of(const std::string &name) const {
    auto it = std::lower_bound(names_.begin(), names_.end(), name);
    if (it == names_.end() || *it != name)
      throw domain_error("unknown variable: " + name);
    return static_cast<var_id>(it - names_.begin());
  }
  bool has(const std::string &name) const {
    return std::binary_search(names_.begin(), names_.end(), name);
  }

  var_set all_vars() const {
    std::vector<var_id> vs(size());
    for (std::size_t i = 0; i < vs.size(); ++i)
      vs[i] = static_cast<var_id>(i);
    return var_set(std::move(vs));
  }

  bool operator==(const variable_universe &other) const = default;

private:
  std::vector<std::string> names_;
};

// All singletons followed by all pairs in lexicographic index order;
// n(n+1)/2 clusters in total.
std::vector<cluster> clusters(const variable_universe &universe);

// Index of a cluster in the clusters() sequence. cluster_index(n, x, x) is the
// singleton {x}.
std::size_t cluster_index(std::size_t n, var_id x, var_id y);

} // namespace weakrel
