#pragma once

#include <variant>

#include "weakrel/lang.hpp"

namespace weakrel {

struct analysis_options {
  std::size_t max_disjuncts = 32;  // per-cluster cap for directed-disj
  bool disjunctive_merge = false;  // retain disjunctions at merge nodes
  std::size_t max_node_updates = 20000;
};

using abstract_state = std::variant<stable<const_domain>, stable<disj_domain>>;

struct analysis_stats {
  std::size_t node_updates = 0;
  std::size_t normalization_rounds = 0;
  std::size_t max_disjuncts = 0; // largest per-cluster disjunct count seen
};

struct analysis_result {
  program prog; // owns the domain configuration the values refer to
  cfg graph;
  std::vector<abstract_state> values; // per node
  analysis_stats stats;
};

analysis_result analyze(program p, const analysis_options &opts = {});
analysis_result analyze_source(const std::string &source,
                               const program_overrides &overrides = {},
                               const analysis_options &opts = {});

// Canonical rendering of one abstract state, restricted to the program's
// declared variables: `bot`, `top`, or `cluster: part; ...` entries for the
// non-top cluster parts. The string parses back to an equal state.
std::string render_state(const analysis_result &r, const abstract_state &s);
abstract_state parse_state(const analysis_result &r, const std::string &text);

std::string report_text(const analysis_result &r);
std::string report_json(const analysis_result &r);

} // namespace weakrel
