#include "weakrel/analyzer.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include <json.hpp>

namespace weakrel {

namespace {

template <relational_domain D>
bool state_is_bottom(const D &dom, const stable<D> &s) {
  // In a stable collection one bottom component forces all of them.
  return dom.is_bottom(s.parts().front());
}

struct fixpoint_stats {
  std::size_t node_updates = 0;
  normalize_stats norm;
};

template <relational_domain D, typename Transfer, typename Merge>
void run_fixpoint(const D &dom, const cfg &g, std::vector<stable<D>> &state, Transfer transfer,
                  Merge merge, std::size_t max_updates, fixpoint_stats &fs) {
  std::vector<std::vector<const cfg_edge *>> out(g.node_count());
  for (const auto &e : g.edges)
    out[e.from].push_back(&e);
  std::set<std::size_t> pending;
  pending.insert(g.entry);
  while (!pending.empty()) {
    std::size_t n = *pending.begin();
    pending.erase(pending.begin());
    for (const cfg_edge *e : out[n]) {
      stable<D> v = transfer(*e, state[n]);
      stable<D> joined = merge(state[e->to], v);
      if (!abstract_equal(dom, joined, state[e->to])) {
        state[e->to] = std::move(joined);
        if (++fs.node_updates > max_updates)
          throw budget_exhausted_error("analysis budget exceeded at node " +
                                       std::to_string(e->to) + " (line " +
                                       std::to_string(g.node_line[e->to]) + ")");
        pending.insert(e->to);
      }
    }
  }
}

void accumulate(fixpoint_stats &fs, const normalize_stats &ns) {
  fs.norm.updates += ns.updates;
  fs.norm.rounds += ns.rounds;
}

std::vector<pvalue> program_constants(const program &p) {
  std::vector<pvalue> out;
  std::function<void(const std::vector<stmt> &)> walk = [&](const std::vector<stmt> &body) {
    for (const auto &s : body) {
      if (s.kind == stmt::tag::assign) {
        if (const auto *r = std::get_if<assign_rhs>(&s.rhs)) {
          if (r->kind == assign_rhs::tag::constant)
            out.push_back(r->constant);
          for (const auto &pc : r->pieces)
            if (!pc.is_var)
              out.push_back(pc.val);
        }
      }
      if (s.kind == stmt::tag::if_else || s.kind == stmt::tag::while_loop) {
        if (const auto *c = std::get_if<cond_ineq>(&s.cond)) {
          if (!c->s1.is_var)
            out.push_back(c->s1.val);
          if (!c->s2.is_var)
            out.push_back(c->s2.val);
        }
        walk(s.then_body);
        walk(s.else_body);
      }
    }
  };
  walk(p.body);
  return out;
}

} // namespace

analysis_result analyze(program p, const analysis_options &opts) {
  // Values hold pointers into the program's variable universe, so the program
  // moves into the result before any value is built.
  analysis_result r{std::move(p), cfg{}, {}, {}};
  r.graph = build_cfg(r.prog);
  fixpoint_stats fs;

  if (r.prog.domain == domain_kind::const2) {
    const_domain dom(*r.prog.atoms);
    iteration_budget budget =
        default_budget(r.prog.vars.size(), dom.atoms().atom_count());
    std::vector<stable<const_domain>> state;
    state.reserve(r.graph.node_count());
    for (std::size_t i = 0; i < r.graph.node_count(); ++i)
      state.push_back(i == r.graph.entry ? stable_top(dom, r.prog.vars)
                                         : stable_bottom(dom, r.prog.vars));

    auto transfer = [&](const cfg_edge &e, const stable<const_domain> &v) {
      if (state_is_bottom(dom, v))
        return v;
      normalize_stats ns;
      stable<const_domain> out = v;
      switch (e.transfer.kind) {
      case cfg_transfer::tag::identity:
        break;
      case cfg_transfer::tag::assign:
        if (std::holds_alternative<unknown_rhs_t>(e.transfer.rhs)) {
          out = assign_unknown(dom, e.transfer.target, v);
        } else if (const auto *cp = std::get_if<const_copy_rhs>(&e.transfer.rhs)) {
          out = assign_copy(dom, e.transfer.target, cp->y, v, budget, &ns);
        } else if (const auto *ch = std::get_if<const_choice_rhs>(&e.transfer.rhs)) {
          out = assign_choice(dom, e.transfer.target, ch->aset, ch->ys, v, budget, &ns);
        } else {
          throw domain_error("directed right-hand side in a const2 program");
        }
        break;
      case cfg_transfer::tag::guard: {
        const auto &c = std::get<cond_in>(e.transfer.cond);
        out = c.negated ? guard_neg(dom, c.x, c.aset, v, budget, &ns)
                        : guard_pos(dom, c.x, c.aset, v, budget, &ns);
        break;
      }
      }
      accumulate(fs, ns);
      return out;
    };
    auto merge = [&](const stable<const_domain> &old_v, const stable<const_domain> &in_v) {
      return abstract_join(dom, old_v, in_v);
    };
    run_fixpoint(dom, r.graph, state, transfer, merge, opts.max_node_updates, fs);
    for (auto &s : state)
      r.values.emplace_back(std::move(s));
  } else {
    disj_domain dom(r.prog.order.get());
    auto consts = program_constants(r.prog);
    iteration_budget budget = default_budget(
        r.prog.vars.size(), std::max<std::size_t>(consts.size(), 1) * 4);
    const std::size_t merge_cap =
        r.prog.domain == domain_kind::directed_disj && opts.disjunctive_merge
            ? opts.max_disjuncts
            : 1;
    std::vector<stable<disj_domain>> state;
    state.reserve(r.graph.node_count());
    for (std::size_t i = 0; i < r.graph.node_count(); ++i)
      state.push_back(i == r.graph.entry ? stable_top(dom, r.prog.vars)
                                         : stable_bottom(dom, r.prog.vars));

    auto transfer = [&](const cfg_edge &e, const stable<disj_domain> &v) {
      if (state_is_bottom(dom, v))
        return v;
      normalize_stats ns;
      stable<disj_domain> out = v;
      switch (e.transfer.kind) {
      case cfg_transfer::tag::identity:
        break;
      case cfg_transfer::tag::assign: {
        assign_rhs rhs = std::holds_alternative<unknown_rhs_t>(e.transfer.rhs)
                             ? assign_rhs::unknown()
                             : std::get<assign_rhs>(e.transfer.rhs);
        out = assign(dom, e.transfer.target, rhs, v, budget, &ns);
        break;
      }
      case cfg_transfer::tag::guard: {
        const auto &c = std::get<cond_ineq>(e.transfer.cond);
        out = c.negated ? guard_neg_ineq(dom, c.s1, c.s2, v, budget, &ns)
                        : guard_ineq(dom, c.s1, c.s2, v, budget, &ns);
        break;
      }
      }
      accumulate(fs, ns);
      for (const auto &part : out.parts())
        r.stats.max_disjuncts = std::max(r.stats.max_disjuncts, part.disjuncts.size());
      return out;
    };
    auto merge = [&](const stable<disj_domain> &old_v, const stable<disj_domain> &in_v) {
      stable<disj_domain> joined = abstract_join(dom, old_v, in_v);
      collection<disj_domain> capped = joined.get();
      bool changed = false;
      for (auto &part : capped.parts) {
        disj_value c = dom.cap(part, merge_cap);
        if (!dom.equal(c, part)) {
          part = std::move(c);
          changed = true;
        }
      }
      if (!changed)
        return joined;
      normalize_stats ns;
      auto out = ensure_stable(dom, std::move(capped), budget, &ns);
      accumulate(fs, ns);
      return out;
    };
    run_fixpoint(dom, r.graph, state, transfer, merge, opts.max_node_updates, fs);
    for (auto &s : state)
      r.values.emplace_back(std::move(s));
  }

  r.stats.node_updates = fs.node_updates;
  r.stats.normalization_rounds = fs.norm.rounds;
  return r;
}

analysis_result analyze_source(const std::string &source, const program_overrides &overrides,
                               const analysis_options &opts) {
  return analyze(load_program(source, overrides), opts);
}

namespace {

template <relational_domain D, typename RenderPart>
std::string render_collection(const D &dom, const stable<D> &s, const variable_universe &vars,
                              RenderPart render_part) {
  if (dom.is_bottom(s.parts().front()))
    return "bot";
  auto cs = clusters(vars);
  std::string out;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (dom.equal(s.parts()[i], dom.top()))
      continue;
    if (!out.empty())
      out += "; ";
    out += vars.name(cs[i].lo());
    if (!cs[i].singleton())
      out += "," + vars.name(cs[i].hi());
    out += ": " + render_part(s.parts()[i]);
  }
  return out.empty() ? "top" : out;
}

template <relational_domain D, typename ParsePart>
stable<D> parse_collection(const D &dom, const variable_universe &vars, const std::string &text,
                           ParsePart parse_part) {
  if (text == "bot")
    return stable_bottom(dom, vars);
  collection<D> c = decomposed_top(dom, vars);
  if (text != "top") {
    std::size_t pos = 0;
    while (pos < text.size()) {
      std::size_t end = text.find("; ", pos);
      if (end == std::string::npos)
        end = text.size();
      std::string entry = text.substr(pos, end - pos);
      pos = end == text.size() ? end : end + 2;
      auto colon = entry.find(':');
      if (colon == std::string::npos)
        throw domain_error("malformed collection entry: " + entry);
      std::string key = entry.substr(0, colon);
      std::string part = entry.substr(colon + 2);
      auto comma = key.find(',');
      var_id x, y;
      if (comma == std::string::npos) {
        x = y = vars.id_of(key);
      } else {
        x = vars.id_of(key.substr(0, comma));
        y = vars.id_of(key.substr(comma + 1));
      }
      c.parts[cluster_index(vars.size(), x, y)] = parse_part(part);
    }
  }
  return stable<D>::checked(dom, std::move(c));
}

} // namespace

std::string render_state(const analysis_result &r, const abstract_state &s) {
  if (const auto *cs = std::get_if<stable<const_domain>>(&s)) {
    const_domain dom(*r.prog.atoms);
    return render_collection(dom, *cs, r.prog.vars, [&](const const_value &v) {
      return dom.render(v, r.prog.vars);
    });
  }
  const auto &ds = std::get<stable<disj_domain>>(s);
  disj_domain dom(r.prog.order.get());
  return render_collection(dom, ds, r.prog.vars, [&](const disj_value &v) {
    return format_disj_value(v, r.prog.vars, dom.order());
  });
}

abstract_state parse_state(const analysis_result &r, const std::string &text) {
  if (r.prog.domain == domain_kind::const2) {
    const_domain dom(*r.prog.atoms);
    return parse_collection(dom, r.prog.vars, text, [&](const std::string &part) {
      return dom.to_value(parse_const_formula(part, r.prog.vars, dom.atoms()));
    });
  }
  disj_domain dom(r.prog.order.get());
  return parse_collection(dom, r.prog.vars, text, [&](const std::string &part) {
    return parse_disj_value(part, r.prog.vars, dom);
  });
}

std::string report_text(const analysis_result &r) {
  std::string out;
  for (std::size_t i = 0; i < r.graph.node_count(); ++i) {
    out += "point " + std::to_string(i) + " (line " + std::to_string(r.graph.node_line[i]) + ")";
    if (i == r.graph.entry)
      out += " [entry]";
    if (i == r.graph.exit)
      out += " [exit]";
    out += ": " + render_state(r, r.values[i]) + "\n";
  }
  out += "stats: node_updates=" + std::to_string(r.stats.node_updates) +
         " normalization_rounds=" + std::to_string(r.stats.normalization_rounds) +
         " max_disjuncts=" + std::to_string(r.stats.max_disjuncts) + "\n";
  return out;
}

std::string report_json(const analysis_result &r) {
  nlohmann::ordered_json points = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < r.graph.node_count(); ++i) {
    nlohmann::ordered_json pt;
    pt["id"] = i;
    pt["line"] = r.graph.node_line[i];
    pt["value"] = render_state(r, r.values[i]);
    points.push_back(std::move(pt));
  }
  nlohmann::ordered_json doc;
  doc["points"] = std::move(points);
  doc["stats"] = {{"node_updates", r.stats.node_updates},
                  {"normalization_rounds", r.stats.normalization_rounds},
                  {"max_disjuncts", r.stats.max_disjuncts}};
  return doc.dump(2) + "\n";
}

} // namespace weakrel
