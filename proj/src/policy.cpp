#include "tiesmatch/policy.hpp"

#include <array>
#include <sstream>

namespace tiesmatch {

namespace {

constexpr std::array<std::pair<DecisionKind, std::string_view>, 6> kKindNames{{
    {DecisionKind::NextProposer, "NextProposer"},
    {DecisionKind::TargetTieBreak, "TargetTieBreak"},
    {DecisionKind::BounceChoice, "BounceChoice"},
    {DecisionKind::RejectChoice, "RejectChoice"},
    {DecisionKind::SpecialRejectChoice, "SpecialRejectChoice"},
    {DecisionKind::ComponentAlternation, "ComponentAlternation"},
}};

}  // namespace

std::string_view to_string(DecisionKind kind) {
  for (const auto& [k, n] : kKindNames)
    if (k == kind) return n;
  return "?";
}

std::optional<DecisionKind> decision_kind_from_string(std::string_view s) {
  for (const auto& [k, n] : kKindNames)
    if (n == s) return k;
  return std::nullopt;
}

std::string serialize_log(const DecisionLog& log) {
  std::ostringstream out;
  for (std::size_t i = 0; i < log.size(); ++i)
    out << i << ' ' << to_string(log[i].kind) << ' ' << log[i].chosen << ' '
        << log[i].candidate_count << '\n';
  return out.str();
}

DecisionLog parse_log(std::string_view text) {
  DecisionLog log;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::size_t seq = 0;
    std::string kind;
    DecisionRecord rec;
    if (!(fields >> seq)) continue;  // blank line
    if (!(fields >> kind >> rec.chosen >> rec.candidate_count))
      throw ReplayMismatch("decision log line " + std::to_string(line_no) + ": malformed");
    auto k = decision_kind_from_string(kind);
    if (!k) throw ReplayMismatch("decision log line " + std::to_string(line_no) + ": unknown kind " + kind);
    if (seq != log.size())
      throw ReplayMismatch("decision log line " + std::to_string(line_no) + ": sequence gap");
    if (rec.chosen >= rec.candidate_count)
      throw ReplayMismatch("decision log line " + std::to_string(line_no) + ": choice out of range");
    rec.kind = *k;
    log.push_back(std::move(rec));
  }
  return log;
}

std::size_t Policy::decide(const DecisionPoint& point) {
  if (point.candidates.empty())
    throw std::logic_error("decision point " + std::string(to_string(point.kind)) + " has no candidates");
  const std::size_t chosen = choose(point);
  if (chosen >= point.candidates.size())
    throw std::logic_error("policy chose an index outside the candidate list");
  log_.push_back({point.kind, chosen, point.candidates.size(), point.context});
  return chosen;
}

std::size_t SeededRandomPolicy::choose(const DecisionPoint& point) {
  if (point.candidates.size() == 1) return 0;
  std::uniform_int_distribution<std::size_t> pick(0, point.candidates.size() - 1);
  return pick(rng_);
}

std::size_t ScriptedPolicy::choose(const DecisionPoint& point) {
  if (next_ >= script_.size())
    throw ReplayMismatch("script exhausted at decision " + std::to_string(next_) + " (" +
                         std::string(to_string(point.kind)) + ")");
  const auto& rec = script_[next_];
  if (rec.kind != point.kind || rec.candidate_count != point.candidates.size()) {
    throw ReplayMismatch("decision " + std::to_string(next_) + ": recorded " +
                         std::string(to_string(rec.kind)) + "/" + std::to_string(rec.candidate_count) +
                         ", live " + std::string(to_string(point.kind)) + "/" +
                         std::to_string(point.candidates.size()));
  }
  ++next_;
  return rec.chosen;
}

std::size_t AlternationOverride::choose(const DecisionPoint& point) {
  if (point.kind == DecisionKind::ComponentAlternation) {
    const auto n = point.candidates.size();
    return alternation_ < n ? alternation_ : n - 1;
  }
  return inner_->decide(point);
}

}  // namespace tiesmatch
