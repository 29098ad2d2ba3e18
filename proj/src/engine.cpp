#include "tiesmatch/engine.hpp"

#include <algorithm>
#include <sstream>

namespace tiesmatch {

std::string_view to_string(ManStatus s) {
  switch (s) {
    case ManStatus::Basic: return "basic";
    case ManStatus::Promoted1: return "promoted1";
    case ManStatus::Promoted2: return "promoted2";
    case ManStatus::Stopped: return "stopped";
  }
  return "?";
}

std::string serialize_trace(const Instance& inst, const Trace& trace) {
  std::ostringstream out;
  auto M = [&](Index m) -> const std::string& { return inst.name(man(m)); };
  auto W = [&](Index w) -> const std::string& { return inst.name(woman(w)); };
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& e = trace[i];
    out << i << ' ';
    switch (e.type) {
      case EventType::Propose: out << "PROPOSE " << M(e.man) << ' ' << e.token << ' ' << W(e.woman); break;
      case EventType::Accept: out << "ACCEPT " << W(e.woman) << ' ' << M(e.man) << ' ' << e.token; break;
      case EventType::Bounce:
        out << "BOUNCE " << M(e.man) << ' ' << e.token << ' ' << W(e.woman) << ' ' << W(e.to);
        break;
      case EventType::Forward:
        out << "FORWARD " << M(e.man) << ' ' << e.token << ' ' << W(e.woman) << ' ' << W(e.to);
        break;
      case EventType::Reject: out << "REJECT " << W(e.woman) << ' ' << M(e.man) << ' ' << e.token; break;
      case EventType::Promote: out << "PROMOTE " << M(e.man) << ' ' << to_string(e.status); break;
      case EventType::Stop: out << "STOP " << M(e.man); break;
    }
    out << '\n';
  }
  return out.str();
}

std::size_t default_budget(const Instance& instance, std::size_t factor) {
  return factor * (instance.edge_count() + 1);
}

Engine::Engine(const Instance& instance, Policy& policy, std::size_t budget, EngineOptions options)
    : instance_(&instance), policy_(&policy), budget_(budget), options_(options) {
  const auto men = static_cast<std::size_t>(instance.men_count());
  const auto women = static_cast<std::size_t>(instance.women_count());
  state_.tokens.assign(men, {});
  state_.status.assign(men, ManStatus::Basic);
  state_.rejected_by.assign(men, std::vector<bool>(women, false));
  state_.held.assign(women, {});
  for (Index m = 0; m < instance.men_count(); ++m) {
    if (instance.degree(man(m)) == 0) {
      state_.status[m] = ManStatus::Stopped;
      state_.tokens[m][0].location = TokenLocation::Retired;
      state_.tokens[m][1].location = TokenLocation::Retired;
      emit({.type = EventType::Stop, .man = m});
      continue;
    }
    state_.pending.push_back({m, 1});
    state_.pending.push_back({m, 2});
  }
}

void Engine::emit(Event e) {
  if (state_.trace.size() >= budget_)
    throw BudgetExhausted("event budget of " + std::to_string(budget_) + " exhausted");
  state_.trace.push_back(e);
}

void Engine::run() {
  while (step()) {
  }
}

namespace {

std::string token_label(const Instance& inst, TokenRef t) {
  return inst.name(man(t.man)) + "/" + std::to_string(t.token);
}

}  // namespace

bool Engine::step() {
  if (state_.pending.empty()) return false;
  DecisionPoint point{DecisionKind::NextProposer, "pending", {}};
  for (auto t : state_.pending) point.candidates.push_back(token_label(*instance_, t));
  const TokenRef t = state_.pending[policy_->decide(point)];
  state_.pending.erase(std::find(state_.pending.begin(), state_.pending.end(), t));

  auto target = choose_target(t.man, t.token);
  // A live man always has a target: promotion empties the history as soon
  // as it covers the list.
  if (!target) throw std::logic_error("pending token without a target");
  emit({.type = EventType::Propose, .man = t.man, .token = t.token, .woman = *target});
  deliver(t, *target);
  return true;
}

std::optional<Index> Engine::choose_target(Index m, int token) {
  const auto& hist = state_.rejected_by[m];
  for (const auto& group : instance_->prefs(man(m)).groups) {
    std::vector<Index> open;
    for (Index w : group)
      if (!hist[w]) open.push_back(w);
    if (open.empty()) continue;
    if (open.size() == 1) return open.front();
    DecisionPoint point{DecisionKind::TargetTieBreak,
                        token_label(*instance_, {m, token}), {}};
    for (Index w : open) point.candidates.push_back(instance_->name(woman(w)));
    return open[policy_->decide(point)];
  }
  return std::nullopt;
}

void Engine::seat(TokenRef t, Index w) {
  auto& pend = state_.pending;
  pend.erase(std::remove(pend.begin(), pend.end(), t), pend.end());
  auto& ts = state_.token(t);
  if (ts.location == TokenLocation::Held) unseat(t, ts.woman);
  ts = {TokenLocation::Held, w};
  state_.held[w].push_back(t);
}

void Engine::accept(TokenRef t, Index w) {
  state_.token(t) = {TokenLocation::Held, w};
  state_.held[w].push_back(t);
  emit({.type = EventType::Accept, .man = t.man, .token = t.token, .woman = w});
}

void Engine::unseat(TokenRef t, Index w) {
  auto& h = state_.held[w];
  h.erase(std::remove(h.begin(), h.end(), t), h.end());
}

void Engine::enqueue(TokenRef t) {
  state_.token(t) = {TokenLocation::Unplaced, -1};
  auto& pend = state_.pending;
  pend.insert(std::upper_bound(pend.begin(), pend.end(), t), t);
}

void Engine::retire(TokenRef t) {
  state_.token(t) = {TokenLocation::Retired, -1};
  auto& pend = state_.pending;
  pend.erase(std::remove(pend.begin(), pend.end(), t), pend.end());
}

void Engine::deliver(TokenRef t, Index w) {
  if (state_.held[w].size() <= 1) {
    accept(t, w);
    return;
  }
  if (try_bounce(w, t)) return;
  if (options_.forward_step && try_forward(w, t)) return;
  reject_least_desirable(w, t);
}

bool Engine::try_bounce(Index w, TokenRef incoming) {
  struct Option {
    TokenRef token;
    Index to;
  };
  std::vector<Option> options;
  std::vector<TokenRef> three = state_.held[w];
  three.push_back(incoming);
  for (auto t : three) {
    auto beta = instance_->tie_partner(man(t.man), w);
    if (beta && state_.held[*beta].size() <= 1) options.push_back({t, *beta});
  }
  if (options.empty()) return false;

  DecisionPoint point{DecisionKind::BounceChoice, instance_->name(woman(w)), {}};
  for (const auto& o : options)
    point.candidates.push_back(token_label(*instance_, o.token) + "->" + instance_->name(woman(o.to)));
  const Option pick = options[policy_->decide(point)];

  if (pick.token != incoming) unseat(pick.token, w);
  emit({.type = EventType::Bounce, .man = pick.token.man, .token = pick.token.token, .woman = w,
        .to = pick.to});
  accept(pick.token, pick.to);
  if (pick.token != incoming) accept(incoming, w);
  return true;
}

bool Engine::try_forward(Index w, TokenRef incoming) {
  std::vector<TokenRef> three = state_.held[w];
  three.push_back(incoming);
  std::optional<Index> dup;
  for (std::size_t i = 0; i < three.size() && !dup; ++i)
    for (std::size_t j = i + 1; j < three.size(); ++j)
      if (three[i].man == three[j].man) dup = three[i].man;
  if (!dup) return false;

  const Index alpha = *dup;
  auto beta = instance_->tie_partner(man(alpha), w);
  if (!beta || state_.rejected_by[alpha][*beta]) return false;

  const TokenRef first{alpha, 1};
  if (first != incoming) unseat(first, w);
  emit({.type = EventType::Forward, .man = alpha, .token = 1, .woman = w, .to = *beta});
  if (first != incoming) accept(incoming, w);
  deliver(first, *beta);
  return true;
}

bool Engine::superior(TokenRef p, TokenRef q, Index judge) const {
  switch (instance_->compare(woman(judge), p.man, q.man)) {
    case Preference::StrictlyPrefersX: return true;
    case Preference::StrictlyPrefersY: return false;
    case Preference::Indifferent:
      return promotion_level(state_.status[p.man]) > promotion_level(state_.status[q.man]);
  }
  return false;
}

void Engine::reject_least_desirable(Index w, TokenRef incoming) {
  std::vector<TokenRef> three = state_.held[w];
  three.push_back(incoming);

  const auto rank_of = [&](TokenRef t) { return *instance_->rank(woman(w), t.man); };
  const auto level_of = [&](TokenRef t) { return promotion_level(state_.status[t.man]); };
  const bool all_equal = std::all_of(three.begin(), three.end(), [&](TokenRef t) {
    return rank_of(t) == rank_of(three[0]) && level_of(t) == level_of(three[0]);
  });

  TokenRef victim;
  if (all_equal && options_.special_rejection) {
    // Tie groups have size two, so two of the three share an owner.
    Index dup = -1;
    for (std::size_t i = 0; i < three.size(); ++i)
      for (std::size_t j = i + 1; j < three.size(); ++j)
        if (three[i].man == three[j].man) dup = three[i].man;
    if (dup < 0) throw std::logic_error("three tied proposals from three distinct men");
    const std::vector<TokenRef> pair{{dup, 2}, {dup, 1}};
    DecisionPoint point{DecisionKind::SpecialRejectChoice, instance_->name(woman(w)), {}};
    for (auto t : pair) point.candidates.push_back(token_label(*instance_, t));
    victim = pair[policy_->decide(point)];
  } else {
    std::vector<TokenRef> least;
    for (auto p : three) {
      const bool beats_some = std::any_of(three.begin(), three.end(),
                                          [&](TokenRef q) { return q != p && superior(p, q, w); });
      if (!beats_some) least.push_back(p);
    }
    DecisionPoint point{DecisionKind::RejectChoice, instance_->name(woman(w)), {}};
    for (auto t : least) point.candidates.push_back(token_label(*instance_, t));
    victim = least[policy_->decide(point)];
  }

  if (victim != incoming) unseat(victim, w);
  emit({.type = EventType::Reject, .man = victim.man, .token = victim.token, .woman = w});
  if (victim != incoming) accept(incoming, w);

  const Index m = victim.man;
  if (state_.status[m] == ManStatus::Stopped) {
    retire(victim);
    return;
  }
  state_.rejected_by[m][w] = true;
  enqueue(victim);
  if (history_full(m)) promote_or_stop(m);
}

bool Engine::history_full(Index m) const {
  for (Index w : instance_->neighbors(man(m)))
    if (!state_.rejected_by[m][w]) return false;
  return true;
}

void Engine::promote_or_stop(Index m) {
  auto& status = state_.status[m];
  const bool stop = status == ManStatus::Promoted2 || !options_.promotion;
  if (stop) {
    // The history stays full so no forward step can move a stopped man.
    status = ManStatus::Stopped;
    emit({.type = EventType::Stop, .man = m});
    for (int i = 1; i <= 2; ++i)
      if (state_.token({m, i}).location == TokenLocation::Unplaced) retire({m, i});
    return;
  }
  status = status == ManStatus::Basic ? ManStatus::Promoted1 : ManStatus::Promoted2;
  std::fill(state_.rejected_by[m].begin(), state_.rejected_by[m].end(), false);
  emit({.type = EventType::Promote, .man = m, .status = status});
}

RunResult run(const Instance& instance, Policy& policy, std::size_t budget, EngineOptions options) {
  Engine engine(instance, policy, budget, options);
  engine.run();
  RunResult out;
  out.graph = engine.graph();
  out.state = engine.state();
  out.trace = out.state.trace;
  return out;
}

}  // namespace tiesmatch
