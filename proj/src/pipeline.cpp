#include "tiesmatch/pipeline.hpp"

#include <sstream>

#include <json.hpp>

#include "tiesmatch/output.hpp"

namespace tiesmatch {

std::string_view to_string(Mutation m) {
  switch (m) {
    case Mutation::None: return "none";
    case Mutation::NoForward: return "no-forward";
    case Mutation::NoSpecialReject: return "no-special-reject";
    case Mutation::NoPromotion: return "no-promotion";
  }
  return "?";
}

std::optional<Mutation> mutation_from_string(std::string_view s) {
  for (auto m : {Mutation::None, Mutation::NoForward, Mutation::NoSpecialReject, Mutation::NoPromotion})
    if (to_string(m) == s) return m;
  return std::nullopt;
}

EngineOptions engine_options(Mutation m) {
  EngineOptions o;
  o.forward_step = m != Mutation::NoForward;
  o.special_rejection = m != Mutation::NoSpecialReject;
  o.promotion = m != Mutation::NoPromotion;
  return o;
}

Evaluation evaluate(const Instance& instance, Policy& policy, const PipelineOptions& options,
                    const OracleResult* oracle) {
  Evaluation ev;
  ev.oracle = oracle ? *oracle : max_stable(instance, options.oracle_guard);

  try {
    ev.run = run(instance, policy, default_budget(instance, options.budget_factor),
                 engine_options(options.mutation));
  } catch (const BudgetExhausted&) {
    ev.log = policy.log();
    ev.failure = kBudgetCheck;
    return ev;
  }
  ev.events = ev.run->trace.size();
  ev.trace_text = serialize_trace(instance, ev.run->trace);
  ev.m = extract_matching(ev.run->graph, policy);
  ev.log = policy.log();

  ev.blocking = blocking_pairs(instance, ev.m);
  if (!ev.blocking.empty()) ev.failure = kStabilityCheck;

  for (const auto& opt : ev.oracle.witnesses) {
    ev.reports.push_back(audit(instance, ev.run->graph, ev.run->trace, ev.m, opt));
    if (ev.failure.empty()) ev.failure = ev.reports.back().first_failure();
  }
  return ev;
}

namespace {

using ojson = nlohmann::ordered_json;

std::vector<std::string> node_names(const Instance& inst, const std::vector<PersonId>& nodes) {
  std::vector<std::string> out;
  for (auto p : nodes) out.push_back(inst.name(p));
  return out;
}

std::vector<std::vector<std::string>> pair_names(const Instance& inst, const std::vector<Edge>& pairs) {
  std::vector<std::vector<std::string>> out;
  for (const auto& e : pairs) out.push_back({inst.name(man(e.man)), inst.name(woman(e.woman))});
  return out;
}

ojson witness_json(const Instance& inst, const Matching& opt, const AuditReport& r) {
  ojson w;
  w["opt"] = pair_names(inst, opt.pairs());
  w["totals"] = {{"sum_degree", r.totals.sum_degree},   {"cost", r.totals.cost},
                 {"effect", r.totals.effect},           {"good_inputs", r.totals.good_inputs},
                 {"bad_outputs", r.totals.bad_outputs}, {"four_m", 4 * r.totals.m_size},
                 {"three_opt", 3 * r.totals.opt_size}};
  ojson costs = ojson::object();
  for (Index a = 0; a < inst.men_count(); ++a) costs[inst.name(man(a))] = r.man_cost[a];
  for (Index b = 0; b < inst.women_count(); ++b) costs[inst.name(woman(b))] = r.woman_cost[b];
  w["node_cost"] = costs;
  ojson edges = ojson::array();
  for (const auto& e : r.classification.edges) {
    ojson je;
    je["man"] = inst.name(man(e.edge.man));
    je["woman"] = inst.name(woman(e.edge.woman));
    je["token"] = e.edge.token;
    je["association"] = e.in_m && e.in_opt ? "M+OPT" : e.in_m ? "M" : e.in_opt ? "OPT" : "free";
    if (e.free()) {
      je["input"] = e.input == Grade::Good ? "good" : "bad";
      je["output"] = e.output == Grade::Good ? "good" : "bad";
    }
    edges.push_back(je);
  }
  w["edges"] = edges;
  ojson comps = ojson::array();
  for (const auto& c : r.components) {
    comps.push_back({{"shape", std::string(to_string(c.shape))},
                     {"nodes", node_names(inst, c.nodes)},
                     {"opt", c.opt_count},
                     {"m", c.m_count},
                     {"cost", c.cost}});
  }
  w["components"] = comps;
  ojson checks = ojson::array();
  for (const auto& v : r.verdicts) {
    ojson jv{{"id", v.id}, {"pass", v.pass}};
    if (!v.pass) jv["witness"] = v.witness;
    checks.push_back(jv);
  }
  w["checks"] = checks;
  return w;
}

}  // namespace

std::string report_json(const Instance& instance, const Evaluation& ev, std::optional<std::uint64_t> seed) {
  ojson j;
  j["instance_digest"] = digest(serialize_instance(instance));
  j["seed"] = seed ? ojson(*seed) : ojson(nullptr);
  j["men"] = instance.men_count();
  j["women"] = instance.women_count();
  j["edges"] = instance.edge_count();
  j["events"] = ev.events;
  j["trace_digest"] = digest(ev.trace_text);
  j["m_size"] = ev.m.size();
  j["opt_size"] = ev.oracle.max_cardinality;
  j["ratio"] = ratio_string(ev.oracle.max_cardinality, ev.m.size());
  j["stable_matchings"] = ev.oracle.total_stable_count;
  j["m"] = pair_names(instance, ev.m.pairs());
  j["blocking_pairs"] = pair_names(instance, ev.blocking);
  ojson ws = ojson::array();
  for (std::size_t i = 0; i < ev.reports.size(); ++i)
    ws.push_back(witness_json(instance, ev.oracle.witnesses[i], ev.reports[i]));
  j["witnesses"] = ws;
  j["verdict"] = ev.ok() ? "pass" : "fail";
  if (!ev.ok()) j["failure"] = ev.failure;
  return j.dump(2) + "\n";
}

std::string report_text(const Instance& instance, const Evaluation& ev, std::optional<std::uint64_t> seed) {
  std::ostringstream out;
  out << "instance_digest: " << digest(serialize_instance(instance)) << '\n';
  out << "seed: " << (seed ? std::to_string(*seed) : std::string("-")) << '\n';
  out << "events: " << ev.events << '\n';
  out << "trace_digest: " << digest(ev.trace_text) << '\n';
  out << "m_size: " << ev.m.size() << '\n';
  out << "opt_size: " << ev.oracle.max_cardinality << '\n';
  out << "ratio: " << ratio_string(ev.oracle.max_cardinality, ev.m.size()) << '\n';
  out << "stable_matchings: " << ev.oracle.total_stable_count << '\n';
  out << "blocking_pairs: " << ev.blocking.size() << '\n';
  for (std::size_t i = 0; i < ev.reports.size(); ++i) {
    const auto& r = ev.reports[i];
    out << "witness " << i << ":";
    for (const auto& e : ev.oracle.witnesses[i].pairs())
      out << " (" << instance.name(man(e.man)) << ',' << instance.name(woman(e.woman)) << ')';
    out << '\n';
    out << "  totals: sum_degree=" << r.totals.sum_degree << " cost=" << r.totals.cost
        << " effect=" << r.totals.effect << " good_inputs=" << r.totals.good_inputs
        << " bad_outputs=" << r.totals.bad_outputs << '\n';
    for (const auto& c : r.components) {
      out << "  component " << to_string(c.shape) << " [";
      for (std::size_t k = 0; k < c.nodes.size(); ++k) out << (k ? " " : "") << instance.name(c.nodes[k]);
      out << "] opt=" << c.opt_count << " m=" << c.m_count << " cost=" << c.cost << '\n';
    }
    for (const auto& v : r.verdicts) {
      out << "  check " << v.id << ": " << (v.pass ? "pass" : "FAIL");
      if (!v.pass) out << " (" << v.witness << ')';
      out << '\n';
    }
  }
  out << "verdict: " << (ev.ok() ? "pass" : "fail " + ev.failure) << '\n';
  return out.str();
}

}  // namespace tiesmatch
