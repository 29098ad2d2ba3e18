#include "tiesmatch/oracle.hpp"

#include <algorithm>
#include <optional>

namespace tiesmatch {

namespace {

class Search {
 public:
  explicit Search(const Instance& inst)
      : inst_(inst),
        man_partner_(inst.men_count()),
        woman_partner_(inst.women_count()),
        last_suitor_(inst.women_count(), -1) {
    for (const auto& e : inst.edges()) last_suitor_[e.woman] = std::max(last_suitor_[e.woman], e.man);
  }

  std::vector<Matching> run() {
    recurse(0);
    return std::move(found_);
  }

 private:
  // A woman is settled once matched or once every man on her list is assigned.
  bool settled(Index w, Index assigned_upto) const {
    return woman_partner_[w].has_value() || last_suitor_[w] < assigned_upto;
  }

  bool blocks(Index m, Index w) const {
    return inst_.prefers(man(m), w, man_partner_[m]) && inst_.prefers(woman(w), m, woman_partner_[w]);
  }

  // Men [0, upto) are assigned. Reject when a settled pair blocks.
  bool consistent(Index upto) const {
    for (Index m = 0; m < upto; ++m)
      for (Index w : inst_.neighbors(man(m)))
        if (settled(w, upto) && blocks(m, w)) return false;
    return true;
  }

  void recurse(Index m) {
    if (!consistent(m)) return;
    if (m == inst_.men_count()) {
      std::vector<Edge> pairs;
      for (Index i = 0; i < m; ++i)
        if (man_partner_[i]) pairs.push_back({i, *man_partner_[i]});
      found_.emplace_back(pairs);
      return;
    }
    man_partner_[m].reset();
    recurse(m + 1);
    for (Index w : inst_.neighbors(man(m))) {
      if (woman_partner_[w]) continue;
      man_partner_[m] = w;
      woman_partner_[w] = m;
      recurse(m + 1);
      woman_partner_[w].reset();
      man_partner_[m].reset();
    }
  }

  const Instance& inst_;
  std::vector<std::optional<Index>> man_partner_;
  std::vector<std::optional<Index>> woman_partner_;
  std::vector<Index> last_suitor_;
  std::vector<Matching> found_;
};

}  // namespace

std::vector<Matching> enumerate_stable(const Instance& instance, std::size_t guard) {
  if (instance.edge_count() > guard) {
    throw InstanceTooLarge("instance has " + std::to_string(instance.edge_count()) +
                           " edges; oracle guard is " + std::to_string(guard));
  }
  auto all = Search(instance).run();
  std::sort(all.begin(), all.end());
  return all;
}

OracleResult max_stable(const Instance& instance, std::size_t guard) {
  OracleResult r;
  auto all = enumerate_stable(instance, guard);
  r.total_stable_count = all.size();
  r.min_cardinality = all.empty() ? 0 : all.front().size();
  for (const auto& m : all) {
    r.max_cardinality = std::max(r.max_cardinality, m.size());
    r.min_cardinality = std::min(r.min_cardinality, m.size());
  }
  for (auto& m : all)
    if (m.size() == r.max_cardinality) r.witnesses.push_back(std::move(m));
  return r;
}

}  // namespace tiesmatch
