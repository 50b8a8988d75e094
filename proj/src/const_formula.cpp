#include "weakrel/const_formula.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace weakrel {

const std::string value_universe::bullet_name_ = "@other";

value_universe::value_universe(std::vector<std::string> values) : values_(std::move(values)) {
  std::sort(values_.begin(), values_.end());
  values_.erase(std::unique(values_.begin(), values_.end()), values_.end());
  if (values_.empty())
    throw domain_error("value universe must be nonempty");
  if (values_.size() + 1 > 63)
    throw domain_error("value universe too large");
  for (const auto &v : values_)
    if (v.empty() || v == bullet_name_)
      throw domain_error("invalid value atom: '" + v + "'");
}

const std::string &value_universe::atom_name(std::uint32_t idx) const {
  if (idx == bullet())
    return bullet_name_;
  return values_.at(idx);
}

std::uint32_t value_universe::atom_index(const std::string &name) const {
  if (name == bullet_name_)
    return bullet();
  auto it = std::lower_bound(values_.begin(), values_.end(), name);
  if (it == values_.end() || *it != name)
    throw domain_error("unknown value atom: " + name);
  return static_cast<std::uint32_t>(it - values_.begin());
}

bool eval(const const_formula &f, const sigma &s) {
  switch (f.kind) {
  case const_formula::node::bot:
    return false;
  case const_formula::node::top:
    return true;
  case const_formula::node::prop:
    return (f.atoms >> s.at(f.var)) & 1;
  case const_formula::node::conj:
    for (const auto &c : f.children)
      if (!eval(c, s))
        return false;
    return true;
  case const_formula::node::disj:
    for (const auto &c : f.children)
      if (eval(c, s))
        return true;
    return false;
  }
  return false;
}

static void collect_vars(const const_formula &f, std::vector<var_id> &out) {
  if (f.kind == const_formula::node::prop)
    out.push_back(f.var);
  for (const auto &c : f.children)
    collect_vars(c, out);
}

var_set formula_vars(const const_formula &f) {
  std::vector<var_id> vs;
  collect_vars(f, vs);
  return var_set(std::move(vs));
}

namespace {

// One DNF conjunction: intersected membership mask per variable.
using dnf_conj = std::map<var_id, std::uint64_t>;

std::vector<dnf_conj> to_dnf(const const_formula &f) {
  switch (f.kind) {
  case const_formula::node::bot:
    return {};
  case const_formula::node::top:
    return {dnf_conj{}};
  case const_formula::node::prop:
    return {dnf_conj{{f.var, f.atoms}}};
  case const_formula::node::disj: {
    std::vector<dnf_conj> out;
    for (const auto &c : f.children) {
      auto part = to_dnf(c);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }
  case const_formula::node::conj: {
    std::vector<dnf_conj> acc{dnf_conj{}};
    for (const auto &c : f.children) {
      auto part = to_dnf(c);
      std::vector<dnf_conj> next;
      for (const auto &lhs : acc)
        for (const auto &rhs : part) {
          dnf_conj merged = lhs;
          for (const auto &[v, mask] : rhs) {
            auto it = merged.find(v);
            if (it == merged.end())
              merged[v] = mask;
            else
              it->second &= mask;
          }
          next.push_back(std::move(merged));
        }
      acc = std::move(next);
    }
    return acc;
  }
  }
  return {};
}

} // namespace

const_formula restrict_formula(const const_formula &f, const var_set &ys) {
  auto dnf = to_dnf(f);
  std::vector<const_formula> disjuncts;
  for (const auto &conj : dnf) {
    bool dead = false;
    for (const auto &[v, mask] : conj)
      if (mask == 0) {
        dead = true;
        break;
      }
    if (dead)
      continue;
    std::vector<const_formula> props;
    for (const auto &[v, mask] : conj)
      if (ys.contains(v))
        props.push_back(const_formula::prop(v, mask));
    if (props.empty())
      return const_formula::top();
    disjuncts.push_back(props.size() == 1 ? props.front()
                                          : const_formula::conj(std::move(props)));
  }
  if (disjuncts.empty())
    return const_formula::bot();
  if (disjuncts.size() == 1)
    return disjuncts.front();
  return const_formula::disj(std::move(disjuncts));
}

namespace {

struct formula_lexer {
  const std::string &src;
  std::size_t pos = 0;
  int line = 1, col = 1;

  void skip_space() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos])))
      advance();
  }
  void advance() {
    if (src[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }
  bool eof() {
    skip_space();
    return pos >= src.size();
  }
  char peek() {
    skip_space();
    return pos < src.size() ? src[pos] : '\0';
  }
  bool try_char(char c) {
    skip_space();
    if (pos < src.size() && src[pos] == c) {
      advance();
      return true;
    }
    return false;
  }
  void expect_char(char c) {
    if (!try_char(c))
      throw parse_error(std::string("expected '") + c + "'", line, col);
  }
  std::string ident() {
    skip_space();
    std::size_t start = pos;
    if (pos < src.size() && src[pos] == '@')
      advance();
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
      advance();
    if (start == pos)
      throw parse_error("expected identifier", line, col);
    return src.substr(start, pos - start);
  }
  bool try_keyword(const std::string &kw) {
    skip_space();
    std::size_t save = pos;
    int sl = line, sc = col;
    if (src.compare(pos, kw.size(), kw) == 0) {
      std::size_t after = pos + kw.size();
      if (after >= src.size() || !(std::isalnum(static_cast<unsigned char>(src[after])) ||
                                   src[after] == '_' || src[after] == '@')) {
        for (std::size_t i = 0; i < kw.size(); ++i)
          advance();
        return true;
      }
    }
    pos = save;
    line = sl;
    col = sc;
    return false;
  }
};

struct formula_parser {
  formula_lexer lex;
  const variable_universe &vars;
  const value_universe &atoms;

  const_formula parse_disj() {
    auto lhs = parse_conj();
    while (lex.try_keyword("or")) {
      auto rhs = parse_conj();
      if (lhs.kind == const_formula::node::disj) {
        lhs.children.push_back(std::move(rhs));
      } else {
        std::vector<const_formula> cs;
        cs.push_back(std::move(lhs));
        cs.push_back(std::move(rhs));
        lhs = const_formula::disj(std::move(cs));
      }
    }
    return lhs;
  }

  const_formula parse_conj() {
    auto lhs = parse_atom();
    while (lex.try_keyword("and")) {
      auto rhs = parse_atom();
      if (lhs.kind == const_formula::node::conj) {
        lhs.children.push_back(std::move(rhs));
      } else {
        std::vector<const_formula> cs;
        cs.push_back(std::move(lhs));
        cs.push_back(std::move(rhs));
        lhs = const_formula::conj(std::move(cs));
      }
    }
    return lhs;
  }

  const_formula parse_atom() {
    if (lex.try_char('(')) {
      auto inner = parse_disj();
      lex.expect_char(')');
      return inner;
    }
    if (lex.try_keyword("bot"))
      return const_formula::bot();
    if (lex.try_keyword("top"))
      return const_formula::top();
    std::string name = lex.ident();
    if (!lex.try_keyword("in"))
      throw parse_error("expected 'in'", lex.line, lex.col);
    std::uint64_t mask = parse_set();
    return const_formula::prop(vars.id_of(name), mask);
  }

  std::uint64_t parse_set() {
    lex.expect_char('{');
    std::uint64_t mask = 0;
    if (!lex.try_char('}')) {
      do {
        mask |= std::uint64_t(1) << atoms.atom_index(lex.ident());
      } while (lex.try_char(','));
      lex.expect_char('}');
    }
    return mask;
  }
};

} // namespace

const_formula parse_const_formula(const std::string &text, const variable_universe &vars,
                                  const value_universe &atoms) {
  formula_parser p{formula_lexer{text}, vars, atoms};
  auto f = p.parse_disj();
  if (!p.lex.eof())
    throw parse_error("trailing input", p.lex.line, p.lex.col);
  return f;
}

static std::string format_set(std::uint64_t mask, const value_universe &atoms) {
  std::string out = "{";
  bool first = true;
  for (std::uint32_t i = 0; i < atoms.atom_count(); ++i)
    if ((mask >> i) & 1) {
      if (!first)
        out += ",";
      out += atoms.atom_name(i);
      first = false;
    }
  out += "}";
  return out;
}

std::string format_const_formula(const const_formula &f, const variable_universe &vars,
                                 const value_universe &atoms) {
  switch (f.kind) {
  case const_formula::node::bot:
    return "bot";
  case const_formula::node::top:
    return "top";
  case const_formula::node::prop:
    return vars.name(f.var) + " in " + format_set(f.atoms, atoms);
  case const_formula::node::conj:
  case const_formula::node::disj: {
    std::string sep = f.kind == const_formula::node::conj ? " and " : " or ";
    std::string out;
    for (std::size_t i = 0; i < f.children.size(); ++i) {
      if (i)
        out += sep;
      bool paren = f.children[i].kind == const_formula::node::conj ||
                   f.children[i].kind == const_formula::node::disj;
      out += paren ? "(" + format_const_formula(f.children[i], vars, atoms) + ")"
                   : format_const_formula(f.children[i], vars, atoms);
    }
    return out;
  }
  }
  return "";
}

} // namespace weakrel
