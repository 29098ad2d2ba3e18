#include "tiesmatch/audit.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "tiesmatch/output.hpp"

namespace tiesmatch {

std::string_view to_string(Shape s) {
  switch (s) {
    case Shape::IsolatedNode: return "isolated";
    case Shape::TrivialCycle: return "trivial-cycle";
    case Shape::SharedEdge: return "shared-edge";
    case Shape::AlternatingPath: return "alternating-path";
    case Shape::AlternatingCycle: return "alternating-cycle";
    case Shape::OptAugmentingPath: return "opt-augmenting-path";
    case Shape::MAugmentingPath: return "m-augmenting-path";
  }
  return "?";
}

NodeFlags derive_flags(const Instance& instance, const ProposalGraph& graph, const Trace& trace) {
  NodeFlags f;
  f.popular.assign(instance.women_count(), false);
  f.final_status.assign(instance.men_count(), ManStatus::Basic);
  f.man_degree.assign(instance.men_count(), 0);
  f.woman_degree.assign(instance.women_count(), 0);
  for (const auto& e : graph.edges()) {
    ++f.man_degree[e.man];
    ++f.woman_degree[e.woman];
  }
  for (const auto& ev : trace) {
    switch (ev.type) {
      case EventType::Reject:
        f.popular[ev.woman] = true;
        f.rejected.insert({ev.woman, ev.man});
        break;
      case EventType::Promote: f.final_status[ev.man] = ev.status; break;
      case EventType::Stop: f.final_status[ev.man] = ManStatus::Stopped; break;
      default: break;
    }
  }
  return f;
}

bool Classification::has_good_input(Index w) const {
  return std::any_of(edges.begin(), edges.end(), [&](const EdgeClass& e) {
    return e.free() && e.edge.woman == w && e.input == Grade::Good;
  });
}

bool Classification::has_bad_output(Index m) const {
  return std::any_of(edges.begin(), edges.end(), [&](const EdgeClass& e) {
    return e.free() && e.edge.man == m && e.output == Grade::Bad;
  });
}

int Classification::good_inputs() const {
  return static_cast<int>(std::count_if(edges.begin(), edges.end(), [](const EdgeClass& e) {
    return e.free() && e.input == Grade::Good;
  }));
}

int Classification::bad_outputs() const {
  return static_cast<int>(std::count_if(edges.begin(), edges.end(), [](const EdgeClass& e) {
    return e.free() && e.output == Grade::Bad;
  }));
}

namespace {

std::string pair_name(const Instance& inst, Index m, Index w) {
  return "(" + inst.name(man(m)) + "," + inst.name(woman(w)) + ")";
}

}  // namespace

Classification classify(const Instance& instance, const ProposalGraph& graph, const Trace& trace,
                        const Matching& m, const Matching& opt) {
  if (auto bp = blocking_pairs(instance, opt); !bp.empty())
    throw AuditInputError("OPT is not stable: blocking pair " + pair_name(instance, bp[0].man, bp[0].woman));
  for (const auto& p : m.pairs())
    if (graph.multiplicity(p.man, p.woman) == 0)
      throw AuditInputError("M pair " + pair_name(instance, p.man, p.woman) + " is not an edge of G'");

  Classification c;
  c.flags = derive_flags(instance, graph, trace);
  const auto& f = c.flags;

  std::set<std::pair<Index, Index>> seen;
  for (const auto& e : graph.edges()) {
    EdgeClass ec{e};
    const bool first_copy = seen.insert({e.man, e.woman}).second;
    const bool paired_in_m = m.contains(e.man, e.woman);
    const bool paired_in_opt = opt.contains(e.man, e.woman);
    if (graph.multiplicity(e.man, e.woman) == 2) {
      ec.in_m = first_copy && paired_in_m;
      ec.in_opt = !first_copy && paired_in_opt;
    } else {
      ec.in_m = paired_in_m;
      ec.in_opt = paired_in_opt;
    }

    if (ec.free()) {
      const Index a = e.man;
      const Index b = e.woman;
      const auto opt_b = opt.partner_of_woman(b);
      const auto opt_a = opt.partner_of_man(a);

      const auto by_b = instance.compare(woman(b), a, opt_b);
      const bool bad_input =
          f.popular[b] && (by_b == Preference::StrictlyPrefersX ||
                           (by_b == Preference::Indifferent && !f.successful(man(*opt_b))));
      ec.input = bad_input ? Grade::Bad : Grade::Good;

      const auto by_a = instance.compare(man(a), b, opt_a);
      const bool bad_output =
          (by_a == Preference::StrictlyPrefersX && !is_two_promoted(f.final_status[a])) ||
          (by_a == Preference::Indifferent && !f.successful(woman(*opt_a)));
      ec.output = bad_output ? Grade::Bad : Grade::Good;
    }
    c.edges.push_back(ec);
  }
  return c;
}

int node_cost(PersonId p, const Classification& c) {
  const int deg = c.flags.degree(p);
  if (p.side == Side::Man) return c.has_bad_output(p.index) ? deg + 1 : deg;
  return c.has_good_input(p.index) ? deg - 1 : deg;
}

std::vector<Component> decompose(const Instance& instance, const Matching& m, const Matching& opt,
                                  const ProposalGraph& graph, const Classification* costs) {
  std::vector<Component> out;
  const Index men = instance.men_count();
  const Index women = instance.women_count();
  std::vector<bool> seen_man(men), seen_woman(women);
  auto seen = [&](PersonId p) -> std::vector<bool>::reference {
    return p.side == Side::Man ? seen_man[p.index] : seen_woman[p.index];
  };

  // Neighbor of p through matching `x`, as a PersonId.
  auto across = [](const Matching& x, PersonId p) -> std::optional<PersonId> {
    auto q = x.partner(p);
    if (!q) return std::nullopt;
    return PersonId{opposite(p.side), *q};
  };

  std::vector<PersonId> all;
  for (Index i = 0; i < men; ++i) all.push_back(man(i));
  for (Index j = 0; j < women; ++j) all.push_back(woman(j));

  for (PersonId start : all) {
    if (seen(start)) continue;
    Component comp;
    const auto in_m = across(m, start);
    const auto in_opt = across(opt, start);

    if (!in_m && !in_opt) {
      comp.shape = Shape::IsolatedNode;
      comp.nodes = {start};
    } else if (in_m && in_opt && *in_m == *in_opt) {
      const Index a = start.side == Side::Man ? start.index : in_m->index;
      const Index b = start.side == Side::Man ? in_m->index : start.index;
      comp.shape = graph.multiplicity(a, b) == 2 ? Shape::TrivialCycle : Shape::SharedEdge;
      comp.nodes = {man(a), woman(b)};
      comp.opt_pairs = comp.m_pairs = {{a, b}};
      comp.opt_count = comp.m_count = 1;
    } else {
      // Find an endpoint (a node missing one of the two matchings); if none
      // exists the component is a cycle and we start at the smallest man.
      std::vector<PersonId> members{start};
      std::set<PersonId> inside{start};
      for (std::size_t i = 0; i < members.size(); ++i)
        for (const Matching* x : {&m, &opt})
          if (auto q = across(*x, members[i]); q && inside.insert(*q).second) members.push_back(*q);

      std::optional<PersonId> endpoint;
      for (auto p : members) {
        if (!across(m, p) || !across(opt, p)) {
          // Prefer the man endpoint so M-augmenting paths read a0 b0 ... ak bk.
          if (!endpoint || (p.side == Side::Man && endpoint->side == Side::Woman) ||
              (p.side == endpoint->side && p < *endpoint))
            endpoint = p;
        }
      }
      const bool cycle = !endpoint;
      PersonId cur = cycle ? *std::min_element(members.begin(), members.end()) : *endpoint;
      // Cycles start along OPT so the first pair is an OPT pair.
      const Matching* next = cycle || across(opt, cur) ? &opt : &m;
      comp.nodes.push_back(cur);
      while (true) {
        auto q = across(*next, cur);
        if (!q) break;
        const Edge pair = cur.side == Side::Man ? Edge{cur.index, q->index} : Edge{q->index, cur.index};
        (next == &opt ? comp.opt_pairs : comp.m_pairs).push_back(pair);
        (next == &opt ? comp.opt_count : comp.m_count)++;
        if (cycle && *q == comp.nodes.front()) break;
        comp.nodes.push_back(*q);
        cur = *q;
        next = next == &opt ? &m : &opt;
      }
      if (cycle) {
        comp.shape = Shape::AlternatingCycle;
      } else if (comp.opt_count == comp.m_count) {
        comp.shape = Shape::AlternatingPath;
      } else if (comp.opt_count > comp.m_count) {
        comp.shape = Shape::MAugmentingPath;
      } else {
        comp.shape = Shape::OptAugmentingPath;
      }
    }
    for (auto p : comp.nodes) seen(p) = true;
    if (costs)
      for (auto p : comp.nodes) comp.cost += node_cost(p, *costs);
    out.push_back(std::move(comp));
  }
  return out;
}

bool points_right(const Instance& instance, const Component& path, std::size_t i, const NodeFlags& flags) {
  const Index ai = path.nodes.at(2 * i).index;
  const Index bi = path.nodes.at(2 * i + 1).index;
  const Index next = path.nodes.at(2 * i + 2).index;
  switch (instance.compare(woman(bi), next, ai)) {
    case Preference::StrictlyPrefersX: return true;
    case Preference::Indifferent: return flags.final_status[next] != ManStatus::Basic;
    case Preference::StrictlyPrefersY: return false;
  }
  return false;
}

bool AuditReport::all_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

std::string AuditReport::first_failure() const {
  for (const auto& v : verdicts)
    if (!v.pass) return v.id;
  return {};
}

const std::vector<std::string>& check_ids() {
  static const std::vector<std::string> ids{
      "double_bad",          // no edge is both a bad input and a bad output
      "inputs_cover_outputs",  // #good inputs >= #bad outputs
      "pair_cost",           // OPT pairs cost >= 2, >= 3 with deg(a) >= 1
      "no_short_augmenting",   // no M-augmenting path of length 1 or 3
      "component_cost",      // cost(C) >= 3 |OPT ∩ C|
      "effect_identity",     // sum deg - cost == #good inputs - #bad outputs
      "ratio_chain",         // 4|M| >= cost(A∪B) >= 3|OPT|, ratio <= 4/3
      "bounce_remark",       // end-held (a,b) with unsuccessful tie partner => b unpopular
      "path_start",
      "path_last_pair",
      "path_interior",
      "path_induction",
      "path_end",
  };
  return ids;
}

namespace {

class Checker {
 public:
  Checker(const Instance& inst, const AuditReport& r) : inst_(inst), r_(r), c_(r.classification) {
    for (const auto& id : check_ids()) verdicts_.push_back({id, true, {}});
  }

  std::vector<Verdict> run() {
    const auto& f = c_.flags;

    for (const auto& e : c_.edges)
      if (e.free() && e.input == Grade::Bad && e.output == Grade::Bad)
        fail("double_bad", pair_name(inst_, e.edge.man, e.edge.woman));

    const int good = c_.good_inputs();
    const int bad = c_.bad_outputs();
    if (good < bad)
      fail("inputs_cover_outputs", std::to_string(good) + " good inputs < " + std::to_string(bad) + " bad outputs");

    for (const auto& comp : r_.components) {
      for (const auto& e : comp.opt_pairs) {
        const int cost = cost_of(man(e.man)) + cost_of(woman(e.woman));
        const int need = f.man_degree[e.man] >= 1 ? 3 : 2;
        if (cost < need)
          fail("pair_cost", pair_name(inst_, e.man, e.woman) + " cost " + std::to_string(cost) + " < " +
                                std::to_string(need));
      }
    }

    int total_cost = 0;
    int sum_degree = 0;
    for (Index a = 0; a < inst_.men_count(); ++a) {
      total_cost += cost_of(man(a));
      sum_degree += f.man_degree[a];
    }
    for (Index b = 0; b < inst_.women_count(); ++b) {
      total_cost += cost_of(woman(b));
      sum_degree += f.woman_degree[b];
    }

    std::size_t opt_size = 0;
    for (const auto& comp : r_.components) {
      opt_size += static_cast<std::size_t>(comp.opt_count);
      const int cost = component_cost(comp);
      if (comp.shape == Shape::MAugmentingPath && (comp.length() == 1 || comp.length() == 3))
        fail("no_short_augmenting", describe(comp));
      if (cost < 3 * comp.opt_count)
        fail("component_cost", describe(comp) + " cost " + std::to_string(cost) + " < " +
                                   std::to_string(3 * comp.opt_count));
      if (comp.shape == Shape::MAugmentingPath && comp.length() >= 5) deep(comp);
    }

    const std::size_t m_size = r_.totals.m_size;
    const int effect = sum_degree - total_cost;
    if (effect != good - bad)
      fail("effect_identity", "effect " + std::to_string(effect) + " != good - bad " + std::to_string(good - bad));
    if (4 * static_cast<long>(m_size) < sum_degree - effect)
      fail("ratio_chain", "4|M| = " + std::to_string(4 * m_size) + " < cost(A∪B) = " + std::to_string(total_cost));
    if (total_cost < 3 * static_cast<long>(opt_size))
      fail("ratio_chain", "cost(A∪B) = " + std::to_string(total_cost) + " < 3|OPT| = " + std::to_string(3 * opt_size));
    if (3 * opt_size > 4 * m_size)
      fail("ratio_chain", "|OPT|/|M| = " + ratio_string(opt_size, m_size) + " > 4/3");

    for (const auto& e : c_.edges) {
      auto partner = inst_.tie_partner(man(e.edge.man), e.edge.woman);
      if (partner && !f.successful(woman(*partner)) && f.popular[e.edge.woman])
        fail("bounce_remark", pair_name(inst_, e.edge.man, e.edge.woman) + " held by popular " +
                                  inst_.name(woman(e.edge.woman)) + " while " + inst_.name(woman(*partner)) +
                                  " is unsuccessful");
    }
    return std::move(verdicts_);
  }

 private:
  void fail(const std::string& id, const std::string& witness) {
    for (auto& v : verdicts_) {
      if (v.id != id) continue;
      if (v.pass) {
        v.pass = false;
        v.witness = witness;
      }
      return;
    }
  }

  int cost_of(PersonId p) const { return node_cost(p, c_); }

  int component_cost(const Component& comp) const {
    int sum = 0;
    for (auto p : comp.nodes) sum += cost_of(p);
    return sum;
  }

  std::string describe(const Component& comp) const {
    std::string s(to_string(comp.shape));
    s += " [";
    for (std::size_t i = 0; i < comp.nodes.size(); ++i) s += (i ? " " : "") + inst_.name(comp.nodes[i]);
    return s + "]";
  }

  void deep(const Component& path) {
    const auto& f = c_.flags;
    const std::size_t k = (path.nodes.size() - 2) / 2;
    auto A = [&](std::size_t i) { return path.nodes[2 * i].index; };
    auto B = [&](std::size_t i) { return path.nodes[2 * i + 1].index; };
    auto pair_cost = [&](std::size_t i) { return cost_of(man(A(i))) + cost_of(woman(B(i))); };
    auto rejected = [&](std::size_t i) { return f.did_reject(B(i), A(i)); };
    auto right = [&](std::size_t i) { return points_right(inst_, path, i, f); };
    auto chain = [&](std::size_t i) { return rejected(i) && right(i); };
    const std::string where = describe(path);

    if (pair_cost(0) < 2) fail("path_start", where + ": cost(a0,b0) < 2");
    if (!rejected(0)) fail("path_start", where + ": b0 never rejected a0");
    if (!right(0)) fail("path_start", where + ": b0 does not point right");

    if (pair_cost(k) < 3) fail("path_last_pair", where + ": cost(ak,bk) < 3");

    for (std::size_t i = 1; i < k; ++i) {
      const bool holds = pair_cost(i) >= 4 || chain(i) || !rejected(i - 1) ||
                         (f.final_status[A(i)] == ManStatus::Basic &&
                          inst_.prefers(man(A(i)), B(i - 1), B(i)));
      if (!holds) fail("path_interior", where + ": i=" + std::to_string(i));
      if (pair_cost(i) == 3 && chain(i - 1) && !chain(i))
        fail("path_induction", where + ": i=" + std::to_string(i));
    }

    if (chain(k - 2)) {
      const int last_four = pair_cost(k - 1) + pair_cost(k);
      if (last_four < 7) fail("path_end", where + ": last four cost " + std::to_string(last_four) + " < 7");
    }
  }

  const Instance& inst_;
  const AuditReport& r_;
  const Classification& c_;
  std::vector<Verdict> verdicts_;
};

}  // namespace

std::vector<Verdict> check_all(const Instance& instance, const AuditReport& report) {
  return Checker(instance, report).run();
}

AuditReport audit(const Instance& instance, const ProposalGraph& graph, const Trace& trace,
                  const Matching& m, const Matching& opt) {
  AuditReport r;
  r.classification = classify(instance, graph, trace, m, opt);
  for (Index a = 0; a < instance.men_count(); ++a) r.man_cost.push_back(node_cost(man(a), r.classification));
  for (Index b = 0; b < instance.women_count(); ++b) r.woman_cost.push_back(node_cost(woman(b), r.classification));
  r.components = decompose(instance, m, opt, graph, &r.classification);

  auto& t = r.totals;
  t.m_size = m.size();
  t.opt_size = opt.size();
  t.good_inputs = r.classification.good_inputs();
  t.bad_outputs = r.classification.bad_outputs();
  t.sum_degree = std::accumulate(r.classification.flags.man_degree.begin(), r.classification.flags.man_degree.end(), 0) +
                 std::accumulate(r.classification.flags.woman_degree.begin(), r.classification.flags.woman_degree.end(), 0);
  t.cost = std::accumulate(r.man_cost.begin(), r.man_cost.end(), 0) +
           std::accumulate(r.woman_cost.begin(), r.woman_cost.end(), 0);
  t.effect = t.sum_degree - t.cost;

  r.verdicts = check_all(instance, r);
  return r;
}

std::string ratio_string(std::size_t opt, std::size_t m) {
  if (m == 0) return opt == 0 ? "1" : "inf";
  const std::size_t g = std::gcd(opt, m);
  if (m / g == 1) return std::to_string(opt / g);
  return std::to_string(opt / g) + "/" + std::to_string(m / g);
}

}  // namespace tiesmatch
