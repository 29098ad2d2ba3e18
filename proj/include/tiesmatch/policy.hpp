#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tiesmatch {

/// Every choice the proposal algorithm leaves open.
enum class DecisionKind : std::uint8_t {
  NextProposer,
  TargetTieBreak,
  BounceChoice,
  RejectChoice,
  SpecialRejectChoice,
  ComponentAlternation,
};

std::string_view to_string(DecisionKind kind);
std::optional<DecisionKind> decision_kind_from_string(std::string_view s);

struct DecisionPoint {
  DecisionKind kind = DecisionKind::NextProposer;
  std::string context;                  // entities involved, free-form
  std::vector<std::string> candidates;  // nonempty, ordered
};

struct DecisionRecord {
  DecisionKind kind = DecisionKind::NextProposer;
  std::size_t chosen = 0;
  std::size_t candidate_count = 0;
  std::string context;

  /// Context is descriptive only; replay validates kind and count.
  friend bool operator==(const DecisionRecord& a, const DecisionRecord& b) {
    return a.kind == b.kind && a.chosen == b.chosen && a.candidate_count == b.candidate_count;
  }
};

using DecisionLog = std::vector<DecisionRecord>;

/// `<seq> <kind> <chosen-index> <candidate-count>` per line.
std::string serialize_log(const DecisionLog& log);
DecisionLog parse_log(std::string_view text);

/// Raised when a scripted policy runs out of entries or the live decision
/// point disagrees with the recorded one.
class ReplayMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Policy {
 public:
  virtual ~Policy() = default;

  /// Returns the index of the chosen candidate and records the decision.
  std::size_t decide(const DecisionPoint& point);

  const DecisionLog& log() const { return log_; }

 protected:
  virtual std::size_t choose(const DecisionPoint& point) = 0;

 private:
  DecisionLog log_;
};

class CanonicalFirstPolicy final : public Policy {
 protected:
  std::size_t choose(const DecisionPoint&) override { return 0; }
};

class SeededRandomPolicy final : public Policy {
 public:
  explicit SeededRandomPolicy(std::uint64_t seed) : rng_(seed) {}

 protected:
  std::size_t choose(const DecisionPoint& point) override;

 private:
  std::mt19937_64 rng_;
};

class ScriptedPolicy final : public Policy {
 public:
  explicit ScriptedPolicy(DecisionLog script) : script_(std::move(script)) {}

  std::size_t consumed() const { return next_; }
  bool exhausted() const { return next_ >= script_.size(); }

 protected:
  std::size_t choose(const DecisionPoint& point) override;

 private:
  DecisionLog script_;
  std::size_t next_ = 0;
};

/// Pins every ComponentAlternation decision to one alternation (clamped to
/// the candidate count) and forwards all other decisions to `inner`.
class AlternationOverride final : public Policy {
 public:
  AlternationOverride(std::unique_ptr<Policy> inner, std::size_t alternation)
      : inner_(std::move(inner)), alternation_(alternation) {}

 protected:
  std::size_t choose(const DecisionPoint& point) override;

 private:
  std::unique_ptr<Policy> inner_;
  std::size_t alternation_;
};

}  // namespace tiesmatch
