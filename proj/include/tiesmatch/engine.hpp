#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tiesmatch/graph.hpp"
#include "tiesmatch/instance.hpp"
#include "tiesmatch/policy.hpp"

namespace tiesmatch {

/// Transitions only advance: Basic -> Promoted1 -> Promoted2 -> Stopped.
enum class ManStatus : std::uint8_t { Basic, Promoted1, Promoted2, Stopped };

std::string_view to_string(ManStatus s);

/// Promotion level used by superiority. A stopped man keeps the level of
/// the 2-promoted status he stopped in.
constexpr int promotion_level(ManStatus s) {
  switch (s) {
    case ManStatus::Basic: return 0;
    case ManStatus::Promoted1: return 1;
    default: return 2;
  }
}
constexpr bool is_two_promoted(ManStatus s) { return promotion_level(s) == 2; }

struct TokenRef {
  Index man = 0;
  int token = 1;  // 1 or 2

  friend auto operator<=>(const TokenRef&, const TokenRef&) = default;
};

enum class TokenLocation : std::uint8_t { Unplaced, Held, Retired };

struct TokenState {
  TokenLocation location = TokenLocation::Unplaced;
  Index woman = -1;  // valid when Held
};

enum class EventType : std::uint8_t { Propose, Accept, Bounce, Forward, Reject, Promote, Stop };

/// Field use by type:
///   Propose(man, token, woman)       Accept(woman, man, token)
///   Bounce(man, token, woman -> to)  Forward(man, token=1, woman -> to)
///   Reject(woman, man, token)        Promote(man, status)   Stop(man)
struct Event {
  EventType type = EventType::Propose;
  Index man = -1;
  int token = 0;
  Index woman = -1;
  Index to = -1;
  ManStatus status = ManStatus::Basic;

  friend bool operator==(const Event&, const Event&) = default;
};

using Trace = std::vector<Event>;

/// `<seq> <EVENT> <args...>` per line, names from the instance.
std::string serialize_trace(const Instance& instance, const Trace& trace);

class BudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Switches used only by mutation testing; the algorithm runs with all on.
struct EngineOptions {
  bool forward_step = true;
  bool special_rejection = true;
  bool promotion = true;
};

struct EngineState {
  std::vector<std::array<TokenState, 2>> tokens;  // per man, token 1 at [0]
  std::vector<ManStatus> status;
  std::vector<std::vector<bool>> rejected_by;  // rejection history, [man][woman]
  std::vector<std::vector<TokenRef>> held;     // per woman, arrival order, size <= 2
  std::vector<TokenRef> pending;               // unplaced live tokens, sorted
  Trace trace;

  TokenState& token(TokenRef t) { return tokens[t.man][t.token - 1]; }
  const TokenState& token(TokenRef t) const { return tokens[t.man][t.token - 1]; }
};

/// Proposal phase of the two-token algorithm. Every arbitrary choice goes
/// through the policy; every state change is appended to the trace.
class Engine {
 public:
  Engine(const Instance& instance, Policy& policy, std::size_t budget, EngineOptions options = {});

  /// Delivers pending tokens until none remain.
  void run();
  /// Picks one pending token (NextProposer) and proposes it. Returns false
  /// when nothing is pending.
  bool step();

  /// Offers `t` to `w`; `t` must not be held anywhere.
  void deliver(TokenRef t, Index w);
  bool try_bounce(Index w, TokenRef incoming);
  bool try_forward(Index w, TokenRef incoming);
  void reject_least_desirable(Index w, TokenRef incoming);
  bool superior(TokenRef p, TokenRef q, Index judge) const;
  /// Precondition: the man's history covers his whole list.
  void promote_or_stop(Index m);

  /// Places `t` at `w` without events, for setting up fixtures.
  void seat(TokenRef t, Index w);
  void set_status(Index m, ManStatus s) { state_.status[m] = s; }

  const EngineState& state() const { return state_; }
  const Instance& instance() const { return *instance_; }
  ProposalGraph graph() const;

 private:
  void emit(Event e);
  void accept(TokenRef t, Index w);
  void unseat(TokenRef t, Index w);
  void enqueue(TokenRef t);
  void retire(TokenRef t);
  bool history_full(Index m) const;
  /// Best group member that has not rejected the man; policy breaks ties.
  std::optional<Index> choose_target(Index m, int token);

  const Instance* instance_;
  Policy* policy_;
  std::size_t budget_;
  EngineOptions options_;
  EngineState state_;
};

struct RunResult {
  EngineState state;
  ProposalGraph graph;
  Trace trace;
};

/// 50 * (|E| + 1) by default.
std::size_t default_budget(const Instance& instance, std::size_t factor = 50);

/// Throws BudgetExhausted when the trace would exceed `budget` events.
RunResult run(const Instance& instance, Policy& policy, std::size_t budget,
              EngineOptions options = {});

}  // namespace tiesmatch
