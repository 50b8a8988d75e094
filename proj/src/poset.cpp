#include "weakrel/poset.hpp"

#include <algorithm>
#include <sstream>

namespace weakrel {

namespace {

const big_int &as_int(const pvalue &v) {
  if (const auto *p = std::get_if<big_int>(&v))
    return *p;
  throw domain_error("value is not an integer");
}

std::uint64_t as_mask(const pvalue &v) {
  if (const auto *p = std::get_if<std::uint64_t>(&v))
    return *p;
  throw domain_error("value is not a set");
}

const std::vector<std::int64_t> &as_multi(const pvalue &v) {
  if (const auto *p = std::get_if<std::vector<std::int64_t>>(&v))
    return *p;
  throw domain_error("value is not a multiset");
}

const std::string &as_str(const pvalue &v) {
  if (const auto *p = std::get_if<std::string>(&v))
    return *p;
  throw domain_error("value is not a string");
}

std::uint32_t as_elem(const pvalue &v) {
  if (const auto *p = std::get_if<std::uint32_t>(&v))
    return *p;
  throw domain_error("value is not an element of an explicit order");
}

std::vector<std::string> checked_universe(std::vector<std::string> names, const char *what) {
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  if (names.empty())
    throw domain_error(std::string(what) + " universe must be nonempty");
  if (names.size() > 63)
    throw domain_error(std::string(what) + " universe too large");
  return names;
}

class subset_poset final : public poset {
public:
  explicit subset_poset(std::vector<std::string> universe)
      : universe_(checked_universe(std::move(universe), "subset")) {}

  std::string name() const override { return "subset"; }
  poset_kind kind() const override { return poset_kind::lattice; }
  bool leq(const pvalue &a, const pvalue &b) const override {
    return (as_mask(a) & ~as_mask(b)) == 0;
  }
  std::optional<pvalue> meet(const pvalue &a, const pvalue &b) const override {
    return pvalue(as_mask(a) & as_mask(b));
  }
  std::optional<pvalue> join(const pvalue &a, const pvalue &b) const override {
    return pvalue(as_mask(a) | as_mask(b));
  }
  std::optional<pvalue> least() const override { return pvalue(std::uint64_t(0)); }
  std::optional<pvalue> greatest() const override {
    return pvalue((std::uint64_t(1) << universe_.size()) - 1);
  }
  bool has_common_upper_bound(std::span<const pvalue>) const override { return true; }
  bool has_common_lower_bound(std::span<const pvalue>) const override { return true; }
  int compare_total(const pvalue &a, const pvalue &b) const override {
    return as_mask(a) < as_mask(b) ? -1 : as_mask(a) == as_mask(b) ? 0 : 1;
  }
  std::string print(const pvalue &v) const override {
    std::uint64_t m = as_mask(v);
    std::string out = "{";
    bool first = true;
    for (std::size_t i = 0; i < universe_.size(); ++i)
      if ((m >> i) & 1) {
        if (!first)
          out += ",";
        out += universe_[i];
        first = false;
      }
    return out + "}";
  }
  pvalue parse_value(const std::string &text) const override;

  const std::vector<std::string> &universe() const { return universe_; }

private:
  std::vector<std::string> universe_;
};

class int_poset final : public poset {
public:
  std::string name() const override { return "int"; }
  poset_kind kind() const override { return poset_kind::lattice; }
  bool leq(const pvalue &a, const pvalue &b) const override { return as_int(a) <= as_int(b); }
  std::optional<pvalue> meet(const pvalue &a, const pvalue &b) const override {
    return pvalue(std::min(as_int(a), as_int(b)));
  }
  std::optional<pvalue> join(const pvalue &a, const pvalue &b) const override {
    return pvalue(std::max(as_int(a), as_int(b)));
  }
  bool has_common_upper_bound(std::span<const pvalue>) const override { return true; }
  bool has_common_lower_bound(std::span<const pvalue>) const override { return true; }
  int compare_total(const pvalue &a, const pvalue &b) const override {
    return as_int(a) < as_int(b) ? -1 : as_int(a) == as_int(b) ? 0 : 1;
  }
  std::string print(const pvalue &v) const override { return as_int(v).str(); }
  pvalue parse_value(const std::string &text) const override {
    try {
      return pvalue(big_int(text));
    } catch (const std::exception &) {
      throw domain_error("invalid integer constant: " + text);
    }
  }
};

class multiset_poset final : public poset {
public:
  explicit multiset_poset(std::vector<std::string> universe)
      : universe_(checked_universe(std::move(universe), "multiset")) {}

  std::string name() const override { return "multiset"; }
  poset_kind kind() const override { return poset_kind::lattice; }
  bool leq(const pvalue &a, const pvalue &b) const override {
    const auto &ma = as_multi(a), &mb = as_multi(b);
    check(ma);
    check(mb);
    for (std::size_t i = 0; i < ma.size(); ++i)
      if (ma[i] > mb[i])
        return false;
    return true;
  }
  std::optional<pvalue> meet(const pvalue &a, const pvalue &b) const override {
    return combine(a, b, [](std::int64_t x, std::int64_t y) { return std::min(x, y); });
  }
  std::optional<pvalue> join(const pvalue &a, const pvalue &b) const override {
    return combine(a, b, [](std::int64_t x, std::int64_t y) { return std::max(x, y); });
  }
  std::optional<pvalue> least() const override {
    return pvalue(std::vector<std::int64_t>(universe_.size(), 0));
  }
  bool has_common_upper_bound(std::span<const pvalue>) const override { return true; }
  bool has_common_lower_bound(std::span<const pvalue>) const override { return true; }
  int compare_total(const pvalue &a, const pvalue &b) const override {
    const auto &ma = as_multi(a), &mb = as_multi(b);
    return ma < mb ? -1 : ma == mb ? 0 : 1;
  }
  std::string print(const pvalue &v) const override {
    const auto &m = as_multi(v);
    check(m);
    std::string out = "{{";
    bool first = true;
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i] != 0) {
        if (!first)
          out += ",";
        out += universe_[i] + ":" + std::to_string(m[i]);
        first = false;
      }
    return out + "}}";
  }
  pvalue parse_value(const std::string &text) const override;

  const std::vector<std::string> &universe() const { return universe_; }

private:
  void check(const std::vector<std::int64_t> &m) const {
    if (m.size() != universe_.size())
      throw domain_error("multiset value does not match the declared universe");
    for (auto c : m)
      if (c < 0)
        throw domain_error("multiplicities must be nonnegative");
  }
  template <typename F>
  std::optional<pvalue> combine(const pvalue &a, const pvalue &b, F f) const {
    const auto &ma = as_multi(a), &mb = as_multi(b);
    check(ma);
    check(mb);
    std::vector<std::int64_t> out(ma.size());
    for (std::size_t i = 0; i < ma.size(); ++i)
      out[i] = f(ma[i], mb[i]);
    return pvalue(std::move(out));
  }
  std::vector<std::string> universe_;
};

bool is_prefix(const std::string &a, const std::string &b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

bool is_substring(const std::string &a, const std::string &b) {
  return b.find(a) != std::string::npos;
}

bool is_scattered(const std::string &a, const std::string &b) {
  std::size_t i = 0;
  for (char c : b) {
    if (i < a.size() && a[i] == c)
      ++i;
  }
  return i == a.size();
}

class string_poset final : public poset {
public:
  string_poset(string_order order, std::string alphabet)
      : order_(order), alphabet_(std::move(alphabet)) {
    std::sort(alphabet_.begin(), alphabet_.end());
    alphabet_.erase(std::unique(alphabet_.begin(), alphabet_.end()), alphabet_.end());
  }

  std::string name() const override {
    switch (order_) {
    case string_order::prefix:
      return "prefix";
    case string_order::substring:
      return "substring";
    case string_order::scattered:
      return "scattered";
    }
    return "";
  }
  poset_kind kind() const override {
    return order_ == string_order::prefix ? poset_kind::bounded_complete : poset_kind::general;
  }
  bool leq(const pvalue &a, const pvalue &b) const override {
    switch (order_) {
    case string_order::prefix:
      return is_prefix(as_str(a), as_str(b));
    case string_order::substring:
      return is_substring(as_str(a), as_str(b));
    case string_order::scattered:
      return is_scattered(as_str(a), as_str(b));
    }
    return false;
  }
  std::optional<pvalue> meet(const pvalue &a, const pvalue &b) const override {
    if (order_ != string_order::prefix)
      return std::nullopt;
    // Greatest lower bound under the prefix order: the longest common prefix.
    const auto &sa = as_str(a), &sb = as_str(b);
    std::size_t i = 0;
    while (i < sa.size() && i < sb.size() && sa[i] == sb[i])
      ++i;
    return pvalue(sa.substr(0, i));
  }
  std::optional<pvalue> join(const pvalue &a, const pvalue &b) const override {
    if (order_ != string_order::prefix)
      return std::nullopt;
    if (leq(a, b))
      return b;
    if (leq(b, a))
      return a;
    return std::nullopt;
  }
  std::optional<pvalue> least() const override { return pvalue(std::string()); }
  bool has_common_upper_bound(std::span<const pvalue> s) const override {
    if (order_ != string_order::prefix)
      return true; // the concatenation of all members is a witness
    // Prefix-bounded sets are chains: every member must be a prefix of the
    // longest one.
    const std::string *longest = nullptr;
    for (const auto &v : s)
      if (!longest || as_str(v).size() > longest->size())
        longest = &as_str(v);
    if (!longest)
      return true;
    for (const auto &v : s)
      if (!is_prefix(as_str(v), *longest))
        return false;
    return true;
  }
  bool has_common_lower_bound(std::span<const pvalue>) const override {
    return true; // the empty string
  }
  int compare_total(const pvalue &a, const pvalue &b) const override {
    const auto &sa = as_str(a), &sb = as_str(b);
    if (sa.size() != sb.size())
      return sa.size() < sb.size() ? -1 : 1;
    return sa < sb ? -1 : sa == sb ? 0 : 1;
  }
  std::string print(const pvalue &v) const override { return "\"" + as_str(v) + "\""; }
  pvalue parse_value(const std::string &text) const override {
    if (text.size() < 2 || text.front() != '"' || text.back() != '"')
      throw domain_error("string constants must be quoted: " + text);
    std::string s = text.substr(1, text.size() - 2);
    if (!alphabet_.empty())
      for (char c : s)
        if (alphabet_.find(c) == std::string::npos)
          throw domain_error(std::string("symbol '") + c + "' not in the declared alphabet");
    return pvalue(std::move(s));
  }

  const std::string &alphabet() const { return alphabet_; }

private:
  string_order order_;
  std::string alphabet_;
};

class explicit_poset final : public poset {
public:
  explicit_poset(std::vector<std::string> elements, std::vector<std::vector<bool>> leq)
      : elements_(std::move(elements)), leq_(std::move(leq)) {
    const std::size_t n = elements_.size();
    if (n == 0 || leq_.size() != n)
      throw domain_error("explicit poset: bad order matrix shape");
    for (const auto &row : leq_)
      if (row.size() != n)
        throw domain_error("explicit poset: bad order matrix shape");
    for (std::size_t i = 0; i < n; ++i)
      if (!leq_[i][i])
        throw domain_error("explicit poset: order must be reflexive");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && leq_[i][j] && leq_[j][i])
          throw domain_error("explicit poset: order must be antisymmetric");
        if (leq_[i][j])
          for (std::size_t k = 0; k < n; ++k)
            if (leq_[j][k] && !leq_[i][k])
              throw domain_error("explicit poset: order must be transitive");
      }
    lattice_ = true;
    for (std::size_t i = 0; i < n && lattice_; ++i)
      for (std::size_t j = 0; j < n && lattice_; ++j)
        if (!bound(i, j, true) || !bound(i, j, false))
          lattice_ = false;
  }

  std::string name() const override { return "explicit"; }
  poset_kind kind() const override {
    return lattice_ ? poset_kind::lattice : poset_kind::general;
  }
  bool leq(const pvalue &a, const pvalue &b) const override {
    return leq_[as_elem(a)][as_elem(b)];
  }
  std::optional<pvalue> meet(const pvalue &a, const pvalue &b) const override {
    auto m = bound(as_elem(a), as_elem(b), false);
    if (!m)
      return std::nullopt;
    return pvalue(*m);
  }
  std::optional<pvalue> join(const pvalue &a, const pvalue &b) const override {
    auto j = bound(as_elem(a), as_elem(b), true);
    if (!j)
      return std::nullopt;
    return pvalue(*j);
  }
  bool has_common_upper_bound(std::span<const pvalue> s) const override {
    return has_bound(s, true);
  }
  bool has_common_lower_bound(std::span<const pvalue> s) const override {
    return has_bound(s, false);
  }
  int compare_total(const pvalue &a, const pvalue &b) const override {
    return as_elem(a) < as_elem(b) ? -1 : as_elem(a) == as_elem(b) ? 0 : 1;
  }
  std::string print(const pvalue &v) const override { return elements_.at(as_elem(v)); }
  pvalue parse_value(const std::string &text) const override {
    return pvalue(index_of(text));
  }

  const std::vector<std::string> &elements() const { return elements_; }
  std::uint32_t index_of(const std::string &name) const {
    auto it = std::find(elements_.begin(), elements_.end(), name);
    if (it == elements_.end())
      throw domain_error("unknown element: " + name);
    return static_cast<std::uint32_t>(it - elements_.begin());
  }

private:
  bool has_bound(std::span<const pvalue> s, bool upper) const {
    for (std::uint32_t c = 0; c < elements_.size(); ++c) {
      bool ok = true;
      for (const auto &v : s)
        if (!(upper ? leq_[as_elem(v)][c] : leq_[c][as_elem(v)])) {
          ok = false;
          break;
        }
      if (ok)
        return true;
    }
    return false;
  }
  // Least upper / greatest lower bound of two elements when it exists.
  std::optional<std::uint32_t> bound(std::uint32_t a, std::uint32_t b, bool upper) const {
    std::vector<std::uint32_t> candidates;
    for (std::uint32_t c = 0; c < elements_.size(); ++c) {
      bool ok = upper ? (leq_[a][c] && leq_[b][c]) : (leq_[c][a] && leq_[c][b]);
      if (ok)
        candidates.push_back(c);
    }
    for (std::uint32_t c : candidates) {
      bool extreme = true;
      for (std::uint32_t d : candidates)
        if (!(upper ? leq_[c][d] : leq_[d][c])) {
          extreme = false;
          break;
        }
      if (extreme)
        return c;
    }
    return std::nullopt;
  }

  std::vector<std::string> elements_;
  std::vector<std::vector<bool>> leq_;
  bool lattice_ = false;
};

std::vector<std::string> split_commas(const std::string &s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  if (!cur.empty())
    out.push_back(cur);
  return out;
}

pvalue parse_brace_set(const subset_poset &p, const std::string &inner) {
  std::uint64_t mask = 0;
  for (const auto &name : split_commas(inner)) {
    const auto &u = p.universe();
    auto it = std::find(u.begin(), u.end(), name);
    if (it == u.end())
      throw domain_error("unknown set element: " + name);
    mask |= std::uint64_t(1) << (it - u.begin());
  }
  return pvalue(mask);
}

} // namespace

pvalue subset_poset::parse_value(const std::string &text) const {
  if (text.size() < 2 || text.front() != '{' || text.back() != '}')
    throw domain_error("set constants use braces: " + text);
  return parse_brace_set(*this, text.substr(1, text.size() - 2));
}

pvalue multiset_poset::parse_value(const std::string &text) const {
  if (text.size() < 4 || text.substr(0, 2) != "{{" || text.substr(text.size() - 2) != "}}")
    throw domain_error("multiset constants use double braces: " + text);
  std::vector<std::int64_t> counts(universe_.size(), 0);
  std::string inner = text.substr(2, text.size() - 4);
  if (!inner.empty())
    for (const auto &entry : split_commas(inner)) {
      auto colon = entry.find(':');
      if (colon == std::string::npos)
        throw domain_error("multiset entries are atom:count pairs: " + entry);
      std::string atom = entry.substr(0, colon);
      auto it = std::find(universe_.begin(), universe_.end(), atom);
      if (it == universe_.end())
        throw domain_error("unknown multiset atom: " + atom);
      long long count = 0;
      try {
        count = std::stoll(entry.substr(colon + 1));
      } catch (const std::exception &) {
        throw domain_error("invalid multiplicity in: " + entry);
      }
      if (count < 0)
        throw domain_error("multiplicities must be nonnegative");
      counts[static_cast<std::size_t>(it - universe_.begin())] = count;
    }
  return pvalue(std::move(counts));
}

std::unique_ptr<poset> make_subset_poset(std::vector<std::string> universe) {
  return std::make_unique<subset_poset>(std::move(universe));
}

std::unique_ptr<poset> make_int_poset() { return std::make_unique<int_poset>(); }

std::unique_ptr<poset> make_multiset_poset(std::vector<std::string> universe) {
  return std::make_unique<multiset_poset>(std::move(universe));
}

std::unique_ptr<poset> make_string_poset(string_order order, std::string alphabet) {
  return std::make_unique<string_poset>(order, std::move(alphabet));
}

std::unique_ptr<poset> make_explicit_poset(std::vector<std::string> elements,
                                           std::vector<std::vector<bool>> leq_matrix) {
  return std::make_unique<explicit_poset>(std::move(elements), std::move(leq_matrix));
}

std::unique_ptr<poset> make_poset(const std::string &spec) {
  std::string head = spec, args;
  auto paren = spec.find('(');
  auto colon = spec.find(':');
  if (paren != std::string::npos && spec.back() == ')') {
    head = spec.substr(0, paren);
    args = spec.substr(paren + 1, spec.size() - paren - 2);
  } else if (colon != std::string::npos) {
    head = spec.substr(0, colon);
    args = spec.substr(colon + 1);
  }
  if (head == "int")
    return make_int_poset();
  if (head == "subset")
    return make_subset_poset(split_commas(args));
  if (head == "multiset")
    return make_multiset_poset(split_commas(args));
  if (head == "prefix" || head == "substring" || head == "scattered") {
    std::string alphabet;
    for (const auto &part : split_commas(args))
      alphabet += part;
    string_order o = head == "prefix"      ? string_order::prefix
                     : head == "substring" ? string_order::substring
                                           : string_order::scattered;
    return make_string_poset(o, alphabet);
  }
  throw domain_error("unknown order: " + spec);
}

const std::vector<std::string> &explicit_poset_elements(const poset &p) {
  return dynamic_cast<const explicit_poset &>(p).elements();
}

std::uint32_t explicit_poset_index(const poset &p, const std::string &element) {
  return dynamic_cast<const explicit_poset &>(p).index_of(element);
}

} // namespace weakrel
