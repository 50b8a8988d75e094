#pragma once

#include <memory>
#include <optional>

#include "weakrel/const_domain.hpp"
#include "weakrel/disjunctive.hpp"

namespace weakrel {

enum class domain_kind { const2, directed, directed_disj };

// --- name-level AST (output of the parser, before resolution) ---

struct raw_piece {
  bool is_ident = false;
  std::string text; // identifier, or literal token including quotes/braces
};

struct raw_rhs {
  enum class tag { unknown, ident, literal, choice, set_union, set_inter, prefix_concat,
                   gap_concat };
  tag kind = tag::unknown;
  std::string ident;               // ident / union / inter arguments use idents
  std::string ident2;
  std::string literal;             // raw literal token
  std::vector<std::string> choice_vars; // {a}|y1|y2
  std::vector<raw_piece> pieces;   // concatenations
};

struct raw_cond {
  enum class tag { in_set, ineq };
  tag kind = tag::in_set;
  bool negated = false;
  std::string var;                    // in_set
  std::vector<std::string> set_atoms; // in_set
  raw_piece lhs, rhs;                 // ineq terms
};

struct raw_stmt {
  enum class tag { assign, if_else, while_loop, skip };
  tag kind = tag::skip;
  int line = 0;
  std::string target;
  raw_rhs rhs;
  raw_cond cond;
  std::vector<raw_stmt> then_body, else_body;
};

struct raw_program {
  std::vector<std::string> var_names;
  std::optional<std::string> domain_name;      // const2 | directed | directed-disj
  std::vector<std::string> universe_values;    // const2
  std::optional<std::string> order_spec;       // directed
  std::vector<raw_stmt> body;
  int end_line = 1;
};

raw_program parse_program(const std::string &source);

// --- resolved program ---

struct unknown_rhs_t {};
struct const_copy_rhs {
  var_id y;
};
struct const_choice_rhs {
  std::uint64_t aset = 0;
  std::vector<var_id> ys;
};
using stmt_rhs = std::variant<unknown_rhs_t, const_copy_rhs, const_choice_rhs, assign_rhs>;

struct cond_in {
  var_id x;
  std::uint64_t aset = 0;
  bool negated = false;
};
struct cond_ineq {
  guard_term s1, s2;
  bool negated = false;
};
using condition = std::variant<cond_in, cond_ineq>;

struct stmt {
  enum class tag { assign, if_else, while_loop, skip };
  tag kind = tag::skip;
  int line = 0;
  var_id target = 0;
  stmt_rhs rhs;
  condition cond;
  std::vector<stmt> then_body, else_body;
};

struct program {
  domain_kind domain = domain_kind::const2;
  variable_universe vars;                 // includes the internal temporary, if any
  var_set user_vars;                      // variables declared by the program
  std::optional<value_universe> atoms;    // const2
  std::shared_ptr<const poset> order;     // directed
  std::vector<stmt> body;
  int end_line = 1;
};

struct program_overrides {
  std::optional<std::string> domain_name;
  std::optional<std::string> order_spec;
  std::optional<std::vector<std::string>> universe_values;
};

// Resolve names to ids, apply CLI overrides, validate the condition and
// right-hand-side forms against the configured domain, and split assignments
// whose right-hand side mentions the assigned variable through an internal
// temporary.
program resolve_program(const raw_program &raw, const program_overrides &overrides = {});

program load_program(const std::string &source, const program_overrides &overrides = {});

// --- control-flow graph ---

struct cfg_transfer {
  enum class tag { identity, assign, guard };
  tag kind = tag::identity;
  var_id target = 0;
  stmt_rhs rhs;
  condition cond;   // guard; `negated` inside the condition chooses the branch
};

struct cfg_edge {
  std::size_t from = 0, to = 0;
  cfg_transfer transfer;
};

struct cfg {
  std::size_t entry = 0, exit = 0;
  std::vector<int> node_line; // one entry per node
  std::vector<cfg_edge> edges;

  std::size_t node_count() const { return node_line.size(); }
};

cfg build_cfg(const program &p);

condition negate(const condition &c);

} // namespace weakrel
