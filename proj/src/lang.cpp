#include "weakrel/lang.hpp"

#include <algorithm>
#include <cctype>

namespace weakrel {

namespace {

struct lexer {
  const std::string &src;
  std::size_t pos = 0;
  int line = 1, col = 1;

  void advance() {
    if (src[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }
  void skip_space() {
    while (pos < src.size()) {
      if (std::isspace(static_cast<unsigned char>(src[pos]))) {
        advance();
      } else if (src[pos] == '#') { // comment to end of line
        while (pos < src.size() && src[pos] != '\n')
          advance();
      } else {
        break;
      }
    }
  }
  bool eof() {
    skip_space();
    return pos >= src.size();
  }
  char peek() {
    skip_space();
    return pos < src.size() ? src[pos] : '\0';
  }
  char peek2() {
    skip_space();
    return pos + 1 < src.size() ? src[pos + 1] : '\0';
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
  bool try_keyword(const std::string &kw) {
    skip_space();
    std::size_t save = pos;
    int sl = line, sc = col;
    if (src.compare(pos, kw.size(), kw) == 0) {
      std::size_t after = pos + kw.size();
      if (after >= src.size() || !(std::isalnum(static_cast<unsigned char>(src[after])) ||
                                   src[after] == '_' || src[after] == '-')) {
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
  bool at_ident() {
    skip_space();
    return pos < src.size() &&
           (std::isalpha(static_cast<unsigned char>(src[pos])) || src[pos] == '_');
  }
  std::string ident() {
    skip_space();
    if (!at_ident())
      throw parse_error("expected identifier", line, col);
    std::size_t start = pos;
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
      advance();
    return src.substr(start, pos - start);
  }
  std::string atom_name() { // value atoms additionally allow @other
    skip_space();
    if (pos < src.size() && src[pos] == '@') {
      std::size_t start = pos;
      advance();
      while (pos < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
        advance();
      return src.substr(start, pos - start);
    }
    return ident();
  }
  // Literal tokens: quoted strings, {..}, {{..}}, integers.
  bool at_literal() {
    skip_space();
    if (pos >= src.size())
      return false;
    char c = src[pos];
    return c == '"' || c == '{' || c == '-' || std::isdigit(static_cast<unsigned char>(c));
  }
  std::string literal() {
    skip_space();
    if (pos >= src.size())
      throw parse_error("expected literal", line, col);
    std::size_t start = pos;
    char c = src[pos];
    if (c == '"') {
      advance();
      while (pos < src.size() && src[pos] != '"')
        advance();
      if (pos >= src.size())
        throw parse_error("unterminated string literal", line, col);
      advance();
    } else if (c == '{') {
      int depth = 0;
      while (pos < src.size()) {
        if (src[pos] == '{')
          ++depth;
        if (src[pos] == '}')
          --depth;
        advance();
        if (depth == 0)
          break;
      }
      if (depth != 0)
        throw parse_error("unbalanced braces", line, col);
    } else if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
      advance();
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos])))
        advance();
    } else {
      throw parse_error("expected literal", line, col);
    }
    return src.substr(start, pos - start);
  }
};

struct program_parser {
  lexer lex;

  raw_program parse() {
    raw_program out;
    parse_header(out);
    while (!lex.eof())
      out.body.push_back(parse_stmt());
    out.end_line = lex.line;
    return out;
  }

  void parse_header(raw_program &out) {
    while (true) {
      if (lex.try_keyword("vars")) {
        do
          out.var_names.push_back(lex.ident());
        while (lex.try_char(','));
        lex.expect_char(';');
      } else if (lex.try_keyword("domain")) {
        std::string name = lex.ident();
        if (name == "directed" && lex.try_char('-'))
          name += "-" + lex.ident();
        out.domain_name = name;
        if (lex.peek() == '{') { // inline const2 universe
          lex.expect_char('{');
          do
            out.universe_values.push_back(lex.atom_name());
          while (lex.try_char(','));
          lex.expect_char('}');
        }
        lex.expect_char(';');
      } else if (lex.try_keyword("universe")) {
        do
          out.universe_values.push_back(lex.atom_name());
        while (lex.try_char(','));
        lex.expect_char(';');
      } else if (lex.try_keyword("order")) {
        std::string spec;
        lex.skip_space();
        while (lex.pos < lex.src.size() && lex.src[lex.pos] != ';') {
          spec += lex.src[lex.pos];
          lex.advance();
        }
        lex.expect_char(';');
        while (!spec.empty() && std::isspace(static_cast<unsigned char>(spec.back())))
          spec.pop_back();
        out.order_spec = spec;
      } else {
        return;
      }
    }
  }

  std::vector<raw_stmt> parse_block() {
    lex.expect_char('{');
    std::vector<raw_stmt> out;
    while (!lex.try_char('}'))
      out.push_back(parse_stmt());
    return out;
  }

  raw_stmt parse_stmt() {
    raw_stmt s;
    s.line = lex.line;
    lex.skip_space();
    s.line = lex.line;
    if (lex.try_keyword("skip")) {
      s.kind = raw_stmt::tag::skip;
      lex.expect_char(';');
      return s;
    }
    if (lex.try_keyword("if")) {
      s.kind = raw_stmt::tag::if_else;
      lex.expect_char('(');
      s.cond = parse_cond();
      lex.expect_char(')');
      s.then_body = parse_block();
      if (lex.try_keyword("else"))
        s.else_body = parse_block();
      return s;
    }
    if (lex.try_keyword("while")) {
      s.kind = raw_stmt::tag::while_loop;
      lex.expect_char('(');
      s.cond = parse_cond();
      lex.expect_char(')');
      s.then_body = parse_block();
      return s;
    }
    s.kind = raw_stmt::tag::assign;
    s.target = lex.ident();
    if (!(lex.try_char(':') && lex.try_char('=')))
      throw parse_error("expected ':='", lex.line, lex.col);
    s.rhs = parse_rhs();
    lex.expect_char(';');
    return s;
  }

  raw_rhs parse_rhs() {
    raw_rhs r;
    if (lex.try_char('?')) {
      // `?` alone is the unknown value; `? s1 ? s2 ... ?` is a gap
      // concatenation with constant or variable segments.
      std::vector<raw_piece> pieces;
      while (true) {
        if (lex.at_literal()) {
          pieces.push_back({false, lex.literal()});
        } else if (lex.at_ident()) {
          pieces.push_back({true, lex.ident()});
        } else {
          break;
        }
        lex.expect_char('?');
      }
      if (pieces.empty()) {
        r.kind = raw_rhs::tag::unknown;
      } else {
        r.kind = raw_rhs::tag::gap_concat;
        r.pieces = std::move(pieces);
      }
      return r;
    }
    bool is_union = lex.try_keyword("union");
    if (is_union || lex.try_keyword("inter")) {
      r.kind = is_union ? raw_rhs::tag::set_union : raw_rhs::tag::set_inter;
      lex.expect_char('(');
      r.ident = lex.ident();
      lex.expect_char(',');
      r.ident2 = lex.ident();
      lex.expect_char(')');
      return r;
    }
    if (lex.at_literal()) {
      r.literal = lex.literal();
      if (lex.try_char('.')) { // "ab" . ?
        lex.expect_char('?');
        r.kind = raw_rhs::tag::prefix_concat;
        r.pieces.push_back({false, r.literal});
        return r;
      }
      if (lex.peek() == '|') { // {a,b}|y1|y2
        while (lex.try_char('|'))
          r.choice_vars.push_back(lex.ident());
        r.kind = raw_rhs::tag::choice;
        return r;
      }
      r.kind = raw_rhs::tag::literal;
      return r;
    }
    std::string name = lex.ident();
    if (lex.try_char('.')) { // y . ?
      lex.expect_char('?');
      r.kind = raw_rhs::tag::prefix_concat;
      r.pieces.push_back({true, name});
      return r;
    }
    r.kind = raw_rhs::tag::ident;
    r.ident = name;
    return r;
  }

  raw_cond parse_cond() {
    raw_cond c;
    if (lex.try_char('!')) {
      lex.expect_char('(');
      c = parse_cond();
      lex.expect_char(')');
      c.negated = !c.negated;
      return c;
    }
    raw_piece lhs;
    if (lex.at_literal()) {
      lhs = {false, lex.literal()};
    } else {
      lhs = {true, lex.ident()};
    }
    if (lhs.is_ident && lex.try_keyword("in")) {
      c.kind = raw_cond::tag::in_set;
      c.var = lhs.text;
      c.set_atoms = parse_atom_set();
      return c;
    }
    if (lhs.is_ident && lex.try_keyword("notin")) {
      c.kind = raw_cond::tag::in_set;
      c.negated = true;
      c.var = lhs.text;
      c.set_atoms = parse_atom_set();
      return c;
    }
    if (lex.try_char('<') && lex.try_char('=')) {
      c.kind = raw_cond::tag::ineq;
      c.lhs = lhs;
      if (lex.at_literal())
        c.rhs = {false, lex.literal()};
      else
        c.rhs = {true, lex.ident()};
      return c;
    }
    throw parse_error("expected condition", lex.line, lex.col);
  }

  std::vector<std::string> parse_atom_set() {
    lex.expect_char('{');
    std::vector<std::string> out;
    if (!lex.try_char('}')) {
      do
        out.push_back(lex.atom_name());
      while (lex.try_char(','));
      lex.expect_char('}');
    }
    return out;
  }
};

} // namespace

raw_program parse_program(const std::string &source) {
  program_parser p{lexer{source}};
  return p.parse();
}

namespace {

const char *k_tmp_name = "__tmp";

bool rhs_mentions(const raw_rhs &r, const std::string &name) {
  switch (r.kind) {
  case raw_rhs::tag::unknown:
  case raw_rhs::tag::literal:
    return false;
  case raw_rhs::tag::ident:
    return r.ident == name;
  case raw_rhs::tag::choice:
    return std::find(r.choice_vars.begin(), r.choice_vars.end(), name) != r.choice_vars.end();
  case raw_rhs::tag::set_union:
  case raw_rhs::tag::set_inter:
    return r.ident == name || r.ident2 == name;
  case raw_rhs::tag::prefix_concat:
  case raw_rhs::tag::gap_concat:
    for (const auto &p : r.pieces)
      if (p.is_ident && p.text == name)
        return true;
    return false;
  }
  return false;
}

bool any_self_assign(const std::vector<raw_stmt> &body) {
  for (const auto &s : body) {
    if (s.kind == raw_stmt::tag::assign && rhs_mentions(s.rhs, s.target))
      return true;
    if (any_self_assign(s.then_body) || any_self_assign(s.else_body))
      return true;
  }
  return false;
}

struct resolver {
  const program &ctx; // partially-built program: domain/vars/atoms/order set
  const variable_universe &vars;

  std::uint64_t atom_set(const std::vector<std::string> &names) const {
    std::uint64_t mask = 0;
    for (const auto &n : names)
      mask |= std::uint64_t(1) << ctx.atoms->atom_index(n);
    return mask;
  }

  pvalue parse_const(const std::string &text) const { return ctx.order->parse_value(text); }

  guard_term term(const raw_piece &p) const {
    if (p.is_ident) {
      if (vars.has(p.text))
        return guard_term::of_var(vars.id_of(p.text));
      throw domain_error("unknown variable: " + p.text);
    }
    return guard_term::of_val(parse_const(p.text));
  }

  std::vector<std::string> brace_atoms(const std::string &literal) const {
    // {a,b} -> names; reuses the formula lexer's conventions.
    if (literal.size() < 2 || literal.front() != '{' || literal.back() != '}')
      throw domain_error("expected a set literal: " + literal);
    std::vector<std::string> out;
    std::string cur;
    for (char ch : literal.substr(1, literal.size() - 2)) {
      if (ch == ',') {
        out.push_back(cur);
        cur.clear();
      } else if (!std::isspace(static_cast<unsigned char>(ch))) {
        cur += ch;
      }
    }
    if (!cur.empty())
      out.push_back(cur);
    return out;
  }

  stmt_rhs rhs(const raw_rhs &r) const {
    const bool constants = ctx.domain == domain_kind::const2;
    switch (r.kind) {
    case raw_rhs::tag::unknown:
      return unknown_rhs_t{};
    case raw_rhs::tag::ident:
      if (constants)
        return const_copy_rhs{vars.id_of(r.ident)};
      return assign_rhs::of_variable(vars.id_of(r.ident));
    case raw_rhs::tag::literal:
      if (constants)
        return const_choice_rhs{atom_set(brace_atoms(r.literal)), {}};
      return assign_rhs::of_constant(parse_const(r.literal));
    case raw_rhs::tag::choice: {
      if (!constants)
        throw domain_error("choice right-hand sides need the const2 domain");
      const_choice_rhs out{atom_set(brace_atoms(r.literal)), {}};
      for (const auto &v : r.choice_vars)
        out.ys.push_back(vars.id_of(v));
      return out;
    }
    case raw_rhs::tag::set_union:
      return check(assign_rhs::of_union(vars.id_of(r.ident), vars.id_of(r.ident2)));
    case raw_rhs::tag::set_inter:
      return check(assign_rhs::of_inter(vars.id_of(r.ident), vars.id_of(r.ident2)));
    case raw_rhs::tag::prefix_concat:
      return check(assign_rhs::of_prefix_concat(piece(r.pieces.front())));
    case raw_rhs::tag::gap_concat: {
      std::vector<assign_rhs::piece> ps;
      for (const auto &p : r.pieces)
        ps.push_back(piece(p));
      return check(assign_rhs::of_substring_concat(std::move(ps)));
    }
    }
    return unknown_rhs_t{};
  }

  assign_rhs check(assign_rhs r) const {
    if (ctx.domain == domain_kind::const2)
      throw domain_error("rhs not supported by the const2 domain");
    check_rhs_supported(*ctx.order, r);
    return r;
  }

  assign_rhs::piece piece(const raw_piece &p) const {
    if (p.is_ident)
      return assign_rhs::piece::of_var(vars.id_of(p.text));
    return assign_rhs::piece::of_val(parse_const(p.text));
  }

  condition cond(const raw_cond &c) const {
    if (c.kind == raw_cond::tag::in_set) {
      if (ctx.domain != domain_kind::const2)
        throw domain_error("membership conditions need the const2 domain");
      return cond_in{vars.id_of(c.var), atom_set(c.set_atoms), c.negated};
    }
    if (ctx.domain == domain_kind::const2)
      throw domain_error("inequality conditions need a directed domain");
    return cond_ineq{term(c.lhs), term(c.rhs), c.negated};
  }

  std::vector<stmt> block(const std::vector<raw_stmt> &body) const {
    std::vector<stmt> out;
    for (const auto &rs : body) {
      switch (rs.kind) {
      case raw_stmt::tag::skip: {
        stmt s;
        s.kind = stmt::tag::skip;
        s.line = rs.line;
        out.push_back(std::move(s));
        break;
      }
      case raw_stmt::tag::assign: {
        if (rhs_mentions(rs.rhs, rs.target)) {
          // x := f(x, ...)  becomes  __tmp := f(x, ...); x := __tmp; __tmp := ?
          var_id tmp = vars.id_of(k_tmp_name);
          var_id x = vars.id_of(rs.target);
          stmt s1;
          s1.kind = stmt::tag::assign;
          s1.line = rs.line;
          s1.target = tmp;
          s1.rhs = rhs(rs.rhs);
          stmt s2;
          s2.kind = stmt::tag::assign;
          s2.line = rs.line;
          s2.target = x;
          s2.rhs = ctx.domain == domain_kind::const2
                       ? stmt_rhs(const_copy_rhs{tmp})
                       : stmt_rhs(assign_rhs::of_variable(tmp));
          stmt s3;
          s3.kind = stmt::tag::assign;
          s3.line = rs.line;
          s3.target = tmp;
          s3.rhs = unknown_rhs_t{};
          out.push_back(std::move(s1));
          out.push_back(std::move(s2));
          out.push_back(std::move(s3));
        } else {
          stmt s;
          s.kind = stmt::tag::assign;
          s.line = rs.line;
          s.target = vars.id_of(rs.target);
          s.rhs = rhs(rs.rhs);
          out.push_back(std::move(s));
        }
        break;
      }
      case raw_stmt::tag::if_else: {
        stmt s;
        s.kind = stmt::tag::if_else;
        s.line = rs.line;
        s.cond = cond(rs.cond);
        s.then_body = block(rs.then_body);
        s.else_body = block(rs.else_body);
        out.push_back(std::move(s));
        break;
      }
      case raw_stmt::tag::while_loop: {
        stmt s;
        s.kind = stmt::tag::while_loop;
        s.line = rs.line;
        s.cond = cond(rs.cond);
        s.then_body = block(rs.then_body);
        out.push_back(std::move(s));
        break;
      }
      }
    }
    return out;
  }
};

} // namespace

program resolve_program(const raw_program &raw, const program_overrides &overrides) {
  std::string domain_name = overrides.domain_name.value_or(raw.domain_name.value_or(""));
  if (domain_name.empty())
    throw domain_error("no domain configured (header 'domain ...;' or --domain)");

  std::vector<std::string> names = raw.var_names;
  if (names.empty())
    throw domain_error("no variables declared (header 'vars ...;')");
  for (const auto &n : names)
    if (n == k_tmp_name)
      throw domain_error("variable name __tmp is reserved");
  bool needs_tmp = any_self_assign(raw.body);
  if (needs_tmp)
    names.push_back(k_tmp_name);

  program out;
  out.vars = variable_universe(names);
  {
    std::vector<var_id> user;
    for (const auto &n : raw.var_names)
      user.push_back(out.vars.id_of(n));
    out.user_vars = var_set(std::move(user));
  }
  out.end_line = raw.end_line;

  if (domain_name == "const2") {
    out.domain = domain_kind::const2;
    auto values = overrides.universe_values.value_or(raw.universe_values);
    if (values.empty())
      throw domain_error("const2 needs a value universe ('domain const2 {a,b};' or --universe)");
    out.atoms = value_universe(values);
  } else if (domain_name == "directed" || domain_name == "directed-disj") {
    out.domain =
        domain_name == "directed" ? domain_kind::directed : domain_kind::directed_disj;
    std::string spec = overrides.order_spec.value_or(raw.order_spec.value_or(""));
    if (spec.empty())
      throw domain_error("directed domains need an order ('order ...;' or --order)");
    out.order = std::shared_ptr<const poset>(make_poset(spec).release());
  } else {
    throw domain_error("unknown domain: " + domain_name);
  }

  resolver res{out, out.vars};
  out.body = res.block(raw.body);
  return out;
}

program load_program(const std::string &source, const program_overrides &overrides) {
  return resolve_program(parse_program(source), overrides);
}

condition negate(const condition &c) {
  condition out = c;
  if (auto *ci = std::get_if<cond_in>(&out))
    ci->negated = !ci->negated;
  else
    std::get<cond_ineq>(out).negated = !std::get<cond_ineq>(out).negated;
  return out;
}

namespace {

struct cfg_builder {
  cfg g;

  std::size_t new_node(int line) {
    g.node_line.push_back(line);
    return g.node_line.size() - 1;
  }

  void edge(std::size_t from, std::size_t to, cfg_transfer t) {
    g.edges.push_back({from, to, std::move(t)});
  }

  std::size_t block(std::size_t cur, const std::vector<stmt> &body, int after_line) {
    for (std::size_t i = 0; i < body.size(); ++i) {
      int next_line = i + 1 < body.size() ? body[i + 1].line : after_line;
      cur = step(cur, body[i], next_line);
    }
    return cur;
  }

  std::size_t step(std::size_t cur, const stmt &s, int next_line) {
    switch (s.kind) {
    case stmt::tag::skip: {
      std::size_t next = new_node(next_line);
      edge(cur, next, {});
      return next;
    }
    case stmt::tag::assign: {
      std::size_t next = new_node(next_line);
      cfg_transfer t;
      t.kind = cfg_transfer::tag::assign;
      t.target = s.target;
      t.rhs = s.rhs;
      edge(cur, next, std::move(t));
      return next;
    }
    case stmt::tag::if_else: {
      int then_line = s.then_body.empty() ? next_line : s.then_body.front().line;
      int else_line = s.else_body.empty() ? next_line : s.else_body.front().line;
      std::size_t then_entry = new_node(then_line);
      std::size_t else_entry = new_node(else_line);
      cfg_transfer pos;
      pos.kind = cfg_transfer::tag::guard;
      pos.cond = s.cond;
      cfg_transfer neg;
      neg.kind = cfg_transfer::tag::guard;
      neg.cond = negate(s.cond);
      edge(cur, then_entry, std::move(pos));
      edge(cur, else_entry, std::move(neg));
      std::size_t then_exit = block(then_entry, s.then_body, next_line);
      std::size_t else_exit = block(else_entry, s.else_body, next_line);
      std::size_t join = new_node(next_line);
      edge(then_exit, join, {});
      edge(else_exit, join, {});
      return join;
    }
    case stmt::tag::while_loop: {
      std::size_t head = new_node(s.line);
      edge(cur, head, {});
      int body_line = s.then_body.empty() ? s.line : s.then_body.front().line;
      std::size_t body_entry = new_node(body_line);
      std::size_t after = new_node(next_line);
      cfg_transfer pos;
      pos.kind = cfg_transfer::tag::guard;
      pos.cond = s.cond;
      cfg_transfer neg;
      neg.kind = cfg_transfer::tag::guard;
      neg.cond = negate(s.cond);
      edge(head, body_entry, std::move(pos));
      edge(head, after, std::move(neg));
      std::size_t body_exit = block(body_entry, s.then_body, s.line);
      edge(body_exit, head, {});
      return after;
    }
    }
    return cur;
  }
};

} // namespace

cfg build_cfg(const program &p) {
  cfg_builder b;
  int first_line = p.body.empty() ? p.end_line : p.body.front().line;
  std::size_t entry = b.new_node(first_line);
  b.g.entry = entry;
  b.g.exit = b.block(entry, p.body, p.end_line);
  return b.g;
}

} // namespace weakrel
