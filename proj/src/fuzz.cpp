#include "tiesmatch/fuzz.hpp"

#include <algorithm>
#include <future>
#include <memory>
#include <numeric>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace tiesmatch {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

void FuzzConfig::validate() const {
  if (!(edge_density > 0.0 && edge_density <= 1.0)) throw std::invalid_argument("edge density must be in (0, 1]");
  if (!(tie_probability >= 0.0 && tie_probability <= 1.0))
    throw std::invalid_argument("tie probability must be in [0, 1]");
  if (max_men < 1 || max_women < 1) throw std::invalid_argument("max men/women must be positive");
  if (policies_per_instance < 1) throw std::invalid_argument("need at least one policy per instance");
  if (budget_factor < 1) throw std::invalid_argument("budget factor must be positive");
}

Instance generate_instance(const FuzzConfig& config, std::size_t index) {
  std::mt19937_64 rng(splitmix(config.seed * 0x100000001b3ULL + index));
  std::uniform_int_distribution<Index> men_dist(1, config.max_men);
  std::uniform_int_distribution<Index> women_dist(1, config.max_women);
  std::bernoulli_distribution edge_coin(config.edge_density);
  std::bernoulli_distribution tie_coin(config.tie_probability);

  const Index men = men_dist(rng);
  const Index women = women_dist(rng);
  std::vector<Edge> edges;
  for (Index m = 0; m < men; ++m)
    for (Index w = 0; w < women; ++w)
      if (edge_coin(rng)) edges.push_back({m, w});
  if (edges.size() > config.max_edges) {
    std::shuffle(edges.begin(), edges.end(), rng);
    edges.resize(config.max_edges);
  }

  std::vector<std::vector<Index>> men_nbrs(men), women_nbrs(women);
  for (const auto& e : edges) {
    men_nbrs[e.man].push_back(e.woman);
    women_nbrs[e.woman].push_back(e.man);
  }
  auto order = [&](std::vector<Index>& nbrs) {
    std::sort(nbrs.begin(), nbrs.end());
    std::shuffle(nbrs.begin(), nbrs.end(), rng);
    PrefList list;
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      if (i + 1 < nbrs.size() && tie_coin(rng)) {
        list.groups.push_back({nbrs[i], nbrs[i + 1]});
        ++i;
      } else {
        list.groups.push_back({nbrs[i]});
      }
    }
    return list;
  };
  std::vector<PrefList> men_prefs, women_prefs;
  for (auto& n : men_nbrs) men_prefs.push_back(order(n));
  for (auto& n : women_nbrs) women_prefs.push_back(order(n));

  std::vector<std::string> men_names, women_names;
  for (Index m = 0; m < men; ++m) men_names.push_back("a" + std::to_string(m));
  for (Index w = 0; w < women; ++w) women_names.push_back("b" + std::to_string(w));
  return Instance::create(std::move(men_names), std::move(women_names), std::move(men_prefs),
                          std::move(women_prefs));
}

std::uint64_t policy_seed(const FuzzConfig& config, std::size_t index, std::size_t slot) {
  return splitmix(splitmix(config.seed ^ 0x5eedULL) + index * 1000003ULL + slot);
}

Instance restrict_instance(const Instance& inst, const std::function<bool(PersonId)>& keep_person,
                           const std::function<bool(Index, Index)>& keep_edge) {
  std::vector<Index> men_map(inst.men_count(), -1), women_map(inst.women_count(), -1);
  std::vector<std::string> men, women;
  for (Index m = 0; m < inst.men_count(); ++m)
    if (keep_person(man(m))) {
      men_map[m] = static_cast<Index>(men.size());
      men.push_back(inst.name(man(m)));
    }
  for (Index w = 0; w < inst.women_count(); ++w)
    if (keep_person(woman(w))) {
      women_map[w] = static_cast<Index>(women.size());
      women.push_back(inst.name(woman(w)));
    }

  auto rebuild = [&](Side side, Index owner, Index new_owner_unused) {
    (void)new_owner_unused;
    PrefList out;
    const auto& other_map = side == Side::Man ? women_map : men_map;
    for (const auto& g : inst.prefs({side, owner}).groups) {
      std::vector<Index> kept;
      for (Index o : g) {
        const Index m = side == Side::Man ? owner : o;
        const Index w = side == Side::Man ? o : owner;
        if (other_map[o] >= 0 && keep_edge(m, w)) kept.push_back(other_map[o]);
      }
      if (!kept.empty()) out.groups.push_back(std::move(kept));
    }
    return out;
  };
  std::vector<PrefList> men_prefs, women_prefs;
  for (Index m = 0; m < inst.men_count(); ++m)
    if (men_map[m] >= 0) men_prefs.push_back(rebuild(Side::Man, m, men_map[m]));
  for (Index w = 0; w < inst.women_count(); ++w)
    if (women_map[w] >= 0) women_prefs.push_back(rebuild(Side::Woman, w, women_map[w]));
  return Instance::create(std::move(men), std::move(women), std::move(men_prefs), std::move(women_prefs));
}

Instance untie(const Instance& inst, PersonId owner, std::size_t group) {
  std::vector<PrefList> men_prefs, women_prefs;
  for (Index m = 0; m < inst.men_count(); ++m) men_prefs.push_back(inst.prefs(man(m)));
  for (Index w = 0; w < inst.women_count(); ++w) women_prefs.push_back(inst.prefs(woman(w)));
  auto& groups = (owner.side == Side::Man ? men_prefs : women_prefs)[owner.index].groups;
  if (group >= groups.size() || groups[group].size() != 2) throw std::invalid_argument("not a tie");
  const Index second = groups[group][1];
  groups[group].pop_back();
  groups.insert(groups.begin() + static_cast<std::ptrdiff_t>(group) + 1, std::vector<Index>{second});
  return Instance::create(inst.names(Side::Man), inst.names(Side::Woman), std::move(men_prefs),
                          std::move(women_prefs));
}

std::string serialize_bundle(const ReproBundle& b) {
  nlohmann::ordered_json j;
  j["check"] = b.check;
  j["minimized"] = b.minimized;
  j["seed"] = b.seed;
  j["alternation"] = b.alternation;
  j["mutation"] = std::string(to_string(b.mutation));
  j["budget_factor"] = b.budget_factor;
  j["trace_digest"] = b.trace_digest;
  j["instance"] = b.instance_text;
  j["decisions"] = b.log_text;
  return j.dump(2) + "\n";
}

ReproBundle parse_bundle(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  ReproBundle b;
  b.check = j.value("check", std::string());
  b.minimized = j.value("minimized", false);
  b.seed = j.value("seed", std::uint64_t{0});
  b.alternation = j.value("alternation", std::size_t{0});
  const auto mutation = mutation_from_string(j.value("mutation", std::string("none")));
  if (!mutation) throw std::invalid_argument("unknown mutation in bundle");
  b.mutation = *mutation;
  b.budget_factor = j.value("budget_factor", std::size_t{50});
  b.trace_digest = j.value("trace_digest", std::string());
  b.instance_text = j.at("instance").get<std::string>();
  b.log_text = j.at("decisions").get<std::string>();
  return b;
}

Evaluation evaluate_seeded(const Instance& instance, std::uint64_t seed, std::size_t alternation,
                           const PipelineOptions& options, const OracleResult* oracle) {
  AlternationOverride policy(std::make_unique<SeededRandomPolicy>(seed), alternation);
  return evaluate(instance, policy, options, oracle);
}

Instance shrink(const Instance& start, std::uint64_t seed, std::size_t alternation,
                const PipelineOptions& options, const std::string& check) {
  auto still_fails = [&](const Instance& candidate) {
    return evaluate_seeded(candidate, seed, alternation, options).failure == check;
  };

  Instance cur = start;
  bool progress = true;
  while (progress) {
    progress = false;
    std::vector<std::function<Instance()>> moves;
    for (Index m = 0; m < cur.men_count(); ++m)
      moves.push_back([&, m] { return restrict_instance(cur, [m](PersonId p) { return p != man(m); },
                                                        [](Index, Index) { return true; }); });
    for (Index w = 0; w < cur.women_count(); ++w)
      moves.push_back([&, w] { return restrict_instance(cur, [w](PersonId p) { return p != woman(w); },
                                                        [](Index, Index) { return true; }); });
    for (const auto& e : cur.edges())
      moves.push_back([&, e] {
        return restrict_instance(cur, [](PersonId) { return true; },
                                 [e](Index m, Index w) { return !(m == e.man && w == e.woman); });
      });
    for (Side side : {Side::Man, Side::Woman})
      for (Index p = 0; p < cur.count(side); ++p) {
        const auto& groups = cur.prefs({side, p}).groups;
        for (std::size_t g = 0; g < groups.size(); ++g)
          if (groups[g].size() == 2) moves.push_back([&, side, p, g] { return untie(cur, {side, p}, g); });
      }

    for (const auto& move : moves) {
      Instance candidate = move();
      if (still_fails(candidate)) {
        cur = std::move(candidate);
        progress = true;
        break;
      }
    }
  }
  return cur;
}

ReplayOutcome replay(const ReproBundle& bundle, std::size_t oracle_guard) {
  const Instance instance = parse_instance(bundle.instance_text);
  ScriptedPolicy policy(parse_log(bundle.log_text));
  PipelineOptions options;
  options.budget_factor = bundle.budget_factor;
  options.oracle_guard = oracle_guard;
  options.mutation = bundle.mutation;

  ReplayOutcome out{evaluate(instance, policy, options)};
  if (out.evaluation.failure != kBudgetCheck && !policy.exhausted())
    throw ReplayMismatch("decision log has " + std::to_string(parse_log(bundle.log_text).size() - policy.consumed()) +
                         " unused entries");
  out.check_matches = out.evaluation.failure == bundle.check;
  if (!bundle.trace_digest.empty()) out.trace_matches = digest(out.evaluation.trace_text) == bundle.trace_digest;
  return out;
}

const std::vector<std::string>& failure_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v{kBudgetCheck, kStabilityCheck, kDeterminismCheck};
    for (const auto& id : check_ids()) v.push_back(id);
    return v;
  }();
  return ids;
}

std::string FuzzSummary::max_ratio_string() const { return ratio_string(max_opt_num, max_m_den); }

namespace {

std::size_t failure_index(const std::string& id) {
  const auto& ids = failure_ids();
  return static_cast<std::size_t>(std::find(ids.begin(), ids.end(), id) - ids.begin());
}

// Fuzzes one instance; the result is merged in index order by the caller.
FuzzSummary fuzz_one(const FuzzConfig& config, std::size_t index) {
  FuzzSummary s;
  s.instances = 1;
  s.failures_by_check.assign(failure_ids().size(), 0);

  const Instance inst = generate_instance(config, index);
  const OracleResult oracle = max_stable(inst, config.max_edges);
  if (oracle.min_cardinality != oracle.max_cardinality) s.stable_cardinality_spread = 1;

  PipelineOptions options;
  options.budget_factor = config.budget_factor;
  options.oracle_guard = config.max_edges;
  options.mutation = config.mutation;

  for (std::size_t slot = 0; slot < config.policies_per_instance; ++slot) {
    const std::uint64_t seed = policy_seed(config, index, slot);
    for (std::size_t alt = 0; alt < 2; ++alt) {
      ++s.runs;
      Evaluation ev = evaluate_seeded(inst, seed, alt, options, &oracle);

      if (ev.run) {
        const double edges = double(std::max<std::size_t>(inst.edge_count(), 1));
        const auto proposals = std::count_if(ev.run->trace.begin(), ev.run->trace.end(),
                                             [](const Event& e) { return e.type == EventType::Propose; });
        s.max_events_per_edge = std::max(s.max_events_per_edge, double(ev.events) / edges);
        s.max_proposals_per_edge = std::max(s.max_proposals_per_edge, double(proposals) / edges);
        s.max_events = std::max(s.max_events, ev.events);
        const std::size_t opt = oracle.max_cardinality;
        const std::size_t m = ev.m.size();
        if (m > 0 && opt * s.max_m_den > s.max_opt_num * m) {
          s.max_opt_num = opt;
          s.max_m_den = m;
        }
        if (3 * opt > 4 * m) ++s.ratio_violations;
        if (opt != m) ++s.ratio_not_one;
        if (!ev.blocking.empty()) ++s.unstable_outputs;
        for (const auto& r : ev.reports)
          for (const auto& c : r.components)
            if (c.shape == Shape::MAugmentingPath && c.length() >= 5) ++s.length5_paths;

        // Determinism: the recorded log must reproduce the trace exactly.
        if (ev.ok()) {
          ScriptedPolicy scripted(ev.log);
          try {
            Evaluation again = evaluate(inst, scripted, options, &oracle);
            if (again.trace_text != ev.trace_text || !(again.m == ev.m) || !scripted.exhausted())
              ev.failure = kDeterminismCheck;
          } catch (const ReplayMismatch&) {
            ev.failure = kDeterminismCheck;
          }
          if (!ev.ok()) ++s.nondeterministic;
        }
      }

      if (ev.ok()) continue;
      ++s.failures_total;
      ++s.failures_by_check[failure_index(ev.failure)];
      if (!s.failures.empty()) continue;  // one bundle per instance

      Instance small = inst;
      bool minimized = false;
      if (config.shrink && ev.failure != kDeterminismCheck) {
        small = shrink(inst, seed, alt, options, ev.failure);
        minimized = true;
      }
      Evaluation final_ev = evaluate_seeded(small, seed, alt, options);
      ReproBundle b;
      b.instance_text = serialize_instance(small);
      b.log_text = serialize_log(final_ev.log);
      b.check = final_ev.failure;
      b.minimized = minimized;
      b.seed = seed;
      b.alternation = alt;
      b.mutation = config.mutation;
      b.budget_factor = config.budget_factor;
      b.trace_digest = final_ev.run ? digest(final_ev.trace_text) : std::string();
      s.failures.push_back({index, std::move(b)});
    }
  }
  return s;
}

}  // namespace

void merge(FuzzSummary& into, const FuzzSummary& part) {
  into.instances += part.instances;
  into.runs += part.runs;
  into.failures_total += part.failures_total;
  for (const auto& f : part.failures) into.failures.push_back(f);
  if (part.max_opt_num * into.max_m_den > into.max_opt_num * part.max_m_den) {
    into.max_opt_num = part.max_opt_num;
    into.max_m_den = part.max_m_den;
  }
  into.max_events_per_edge = std::max(into.max_events_per_edge, part.max_events_per_edge);
  into.max_proposals_per_edge = std::max(into.max_proposals_per_edge, part.max_proposals_per_edge);
  into.max_events = std::max(into.max_events, part.max_events);
  into.ratio_violations += part.ratio_violations;
  into.unstable_outputs += part.unstable_outputs;
  into.nondeterministic += part.nondeterministic;
  into.ratio_not_one += part.ratio_not_one;
  into.length5_paths += part.length5_paths;
  into.stable_cardinality_spread += part.stable_cardinality_spread;
  if (into.failures_by_check.empty()) into.failures_by_check.assign(part.failures_by_check.size(), 0);
  for (std::size_t i = 0; i < part.failures_by_check.size(); ++i) into.failures_by_check[i] += part.failures_by_check[i];
}

FuzzSummary run_fuzz(const FuzzConfig& config) {
  config.validate();
  FuzzSummary total;
  total.failures_by_check.assign(failure_ids().size(), 0);

  const unsigned threads = std::max(1u, config.threads);
  if (threads == 1) {
    for (std::size_t i = 0; i < config.count; ++i) merge(total, fuzz_one(config, i));
    return total;
  }
  // Strided partition; results merged in instance order for stable output.
  std::vector<std::future<std::vector<FuzzSummary>>> workers;
  for (unsigned t = 0; t < threads; ++t) {
    workers.push_back(std::async(std::launch::async, [&config, t, threads] {
      std::vector<FuzzSummary> parts;
      for (std::size_t i = t; i < config.count; i += threads) parts.push_back(fuzz_one(config, i));
      return parts;
    }));
  }
  std::vector<std::vector<FuzzSummary>> results;
  for (auto& w : workers) results.push_back(w.get());
  for (std::size_t i = 0; i < config.count; ++i) merge(total, results[i % threads][i / threads]);
  return total;
}

}  // namespace tiesmatch
