#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tiesmatch {

using Index = std::int32_t;

enum class Side : std::uint8_t { Man, Woman };

constexpr Side opposite(Side s) { return s == Side::Man ? Side::Woman : Side::Man; }

struct PersonId {
  Side side = Side::Man;
  Index index = 0;

  friend auto operator<=>(const PersonId&, const PersonId&) = default;
};

constexpr PersonId man(Index i) { return {Side::Man, i}; }
constexpr PersonId woman(Index i) { return {Side::Woman, i}; }

/// Tie groups from most to least preferred. Each group holds one or two
/// indices into the opposite side.
struct PrefList {
  std::vector<std::vector<Index>> groups;

  friend bool operator==(const PrefList&, const PrefList&) = default;
};

enum class Preference { StrictlyPrefersX, Indifferent, StrictlyPrefersY };

enum class InstanceErrorKind {
  Syntax,
  DuplicateIdentifier,
  TieTooLarge,
  DuplicateNeighbor,
  AsymmetricEdge,
  UnknownIdentifier,
  NotOnList,
};

std::string_view to_string(InstanceErrorKind kind);

class InstanceError : public std::runtime_error {
 public:
  InstanceError(InstanceErrorKind kind, const std::string& what, int line = 0);

  InstanceErrorKind kind() const { return kind_; }
  /// 1-based source line, 0 when not produced by the parser.
  int line() const { return line_; }

 private:
  InstanceErrorKind kind_;
  int line_;
};

struct Edge {
  Index man = 0;
  Index woman = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Bipartite preference system with ties of size at most two. Immutable
/// once constructed; every constructor path validates mutual consistency.
class Instance {
 public:
  Instance() = default;

  /// Validates and builds. `men_prefs[i]` lists women indices for man i and
  /// `women_prefs[j]` lists men indices for woman j.
  static Instance create(std::vector<std::string> men, std::vector<std::string> women,
                         std::vector<PrefList> men_prefs, std::vector<PrefList> women_prefs);

  Index men_count() const { return static_cast<Index>(men_.size()); }
  Index women_count() const { return static_cast<Index>(women_.size()); }
  Index count(Side side) const { return side == Side::Man ? men_count() : women_count(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const { return men_.empty() && women_.empty(); }

  const std::string& name(PersonId p) const;
  const std::vector<std::string>& names(Side side) const {
    return side == Side::Man ? men_ : women_;
  }
  std::optional<PersonId> find(std::string_view name) const;
  std::optional<Index> find(Side side, std::string_view name) const;

  const PrefList& prefs(PersonId p) const;
  /// Neighbors of p in preference order (tie members in listed order).
  std::vector<Index> neighbors(PersonId p) const;
  std::size_t degree(PersonId p) const;

  /// Group rank of `other` on judge's list; nullopt when not listed.
  std::optional<int> rank(PersonId judge, Index other) const;
  bool is_neighbor(PersonId judge, Index other) const { return rank(judge, other).has_value(); }
  /// The other member of `other`'s tie group on judge's list, if any.
  std::optional<Index> tie_partner(PersonId judge, Index other) const;

  /// Nobody (nullopt) ranks below every neighbor. Throws NotOnList when x
  /// or y is neither Nobody nor on judge's list.
  Preference compare(PersonId judge, std::optional<Index> x, std::optional<Index> y) const;
  bool prefers(PersonId judge, std::optional<Index> x, std::optional<Index> y) const {
    return compare(judge, x, y) == Preference::StrictlyPrefersX;
  }
  bool indifferent(PersonId judge, std::optional<Index> x, std::optional<Index> y) const {
    return compare(judge, x, y) == Preference::Indifferent;
  }

  /// Edges sorted by (man, woman).
  const std::vector<Edge>& edges() const { return edges_; }
  bool has_edge(Index m, Index w) const { return rank(man(m), w).has_value(); }

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.men_ == b.men_ && a.women_ == b.women_ && a.men_prefs_ == b.men_prefs_ &&
           a.women_prefs_ == b.women_prefs_;
  }

 private:
  std::vector<std::string> men_;
  std::vector<std::string> women_;
  std::vector<PrefList> men_prefs_;
  std::vector<PrefList> women_prefs_;
  // rank tables: [person][other] -> group rank or -1
  std::vector<std::vector<int>> men_rank_;
  std::vector<std::vector<int>> women_rank_;
  std::vector<Edge> edges_;
};

/// Parses the line-oriented instance format. Throws InstanceError.
Instance parse_instance(std::string_view text);

/// Canonical document: `men:`, `women:`, then one `pref` line per person
/// with a nonempty list, men first, in declaration order.
std::string serialize_instance(const Instance& instance);

/// 64-bit FNV-1a over bytes, rendered as 16 hex digits.
std::string digest(std::string_view bytes);

}  // namespace tiesmatch
