#include "tiesmatch/instance.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

namespace tiesmatch {

std::string_view to_string(InstanceErrorKind kind) {
  switch (kind) {
    case InstanceErrorKind::Syntax: return "syntax";
    case InstanceErrorKind::DuplicateIdentifier: return "duplicate-identifier";
    case InstanceErrorKind::TieTooLarge: return "tie-too-large";
    case InstanceErrorKind::DuplicateNeighbor: return "duplicate-neighbor";
    case InstanceErrorKind::AsymmetricEdge: return "asymmetric-edge";
    case InstanceErrorKind::UnknownIdentifier: return "unknown-identifier";
    case InstanceErrorKind::NotOnList: return "not-on-list";
  }
  return "unknown";
}

namespace {

std::string with_line(const std::string& what, int line) {
  if (line <= 0) return what;
  return "line " + std::to_string(line) + ": " + what;
}

bool valid_token(std::string_view s) {
  if (s.empty()) return false;
  return std::none_of(s.begin(), s.end(), [](char c) {
    return c == '(' || c == ')' || c == ':' || c == '#' || static_cast<unsigned char>(c) <= ' ';
  });
}

}  // namespace

InstanceError::InstanceError(InstanceErrorKind kind, const std::string& what, int line)
    : std::runtime_error(with_line(std::string(to_string(kind)) + ": " + what, line)),
      kind_(kind),
      line_(line) {}

Instance Instance::create(std::vector<std::string> men, std::vector<std::string> women,
                          std::vector<PrefList> men_prefs, std::vector<PrefList> women_prefs) {
  using K = InstanceErrorKind;
  if (men_prefs.size() != men.size() || women_prefs.size() != women.size())
    throw InstanceError(K::Syntax, "preference table size does not match roster");

  // Names must be unique across both sides so `pref <name>:` is unambiguous.
  std::map<std::string, int, std::less<>> seen;
  for (const auto* roster : {&men, &women}) {
    for (const auto& n : *roster) {
      if (!valid_token(n)) throw InstanceError(K::Syntax, "invalid identifier '" + n + "'");
      if (!seen.emplace(n, 0).second) throw InstanceError(K::DuplicateIdentifier, n);
    }
  }

  Instance inst;
  inst.men_ = std::move(men);
  inst.women_ = std::move(women);
  inst.men_prefs_ = std::move(men_prefs);
  inst.women_prefs_ = std::move(women_prefs);

  auto build_rank = [](const std::vector<PrefList>& prefs, const std::vector<std::string>& owners,
                       const std::vector<std::string>& others) {
    std::vector<std::vector<int>> table(prefs.size(), std::vector<int>(others.size(), -1));
    for (std::size_t p = 0; p < prefs.size(); ++p) {
      const auto& groups = prefs[p].groups;
      for (std::size_t g = 0; g < groups.size(); ++g) {
        if (groups[g].empty() || groups[g].size() > 2) {
          throw InstanceError(groups[g].empty() ? K::Syntax : K::TieTooLarge,
                              "group " + std::to_string(g) + " of " + owners[p]);
        }
        for (Index o : groups[g]) {
          if (o < 0 || static_cast<std::size_t>(o) >= others.size())
            throw InstanceError(K::UnknownIdentifier, "index out of range in list of " + owners[p]);
          if (table[p][o] >= 0)
            throw InstanceError(K::DuplicateNeighbor, others[o] + " in list of " + owners[p]);
          table[p][o] = static_cast<int>(g);
        }
      }
    }
    return table;
  };
  inst.men_rank_ = build_rank(inst.men_prefs_, inst.men_, inst.women_);
  inst.women_rank_ = build_rank(inst.women_prefs_, inst.women_, inst.men_);

  for (Index m = 0; m < inst.men_count(); ++m) {
    for (Index w = 0; w < inst.women_count(); ++w) {
      const bool fwd = inst.men_rank_[m][w] >= 0;
      const bool back = inst.women_rank_[w][m] >= 0;
      if (fwd != back) {
        const auto& lister = fwd ? inst.men_[m] : inst.women_[w];
        const auto& listed = fwd ? inst.women_[w] : inst.men_[m];
        throw InstanceError(K::AsymmetricEdge,
                            lister + " lists " + listed + " but not conversely");
      }
      if (fwd) inst.edges_.push_back({m, w});
    }
  }
  return inst;
}

const std::string& Instance::name(PersonId p) const {
  return p.side == Side::Man ? men_.at(p.index) : women_.at(p.index);
}

std::optional<Index> Instance::find(Side side, std::string_view n) const {
  const auto& roster = names(side);
  auto it = std::find(roster.begin(), roster.end(), n);
  if (it == roster.end()) return std::nullopt;
  return static_cast<Index>(it - roster.begin());
}

std::optional<PersonId> Instance::find(std::string_view n) const {
  if (auto m = find(Side::Man, n)) return man(*m);
  if (auto w = find(Side::Woman, n)) return woman(*w);
  return std::nullopt;
}

const PrefList& Instance::prefs(PersonId p) const {
  return p.side == Side::Man ? men_prefs_.at(p.index) : women_prefs_.at(p.index);
}

std::vector<Index> Instance::neighbors(PersonId p) const {
  std::vector<Index> out;
  for (const auto& g : prefs(p).groups) out.insert(out.end(), g.begin(), g.end());
  return out;
}

std::size_t Instance::degree(PersonId p) const {
  std::size_t d = 0;
  for (const auto& g : prefs(p).groups) d += g.size();
  return d;
}

std::optional<int> Instance::rank(PersonId judge, Index other) const {
  const auto& table = judge.side == Side::Man ? men_rank_ : women_rank_;
  const auto& row = table.at(judge.index);
  if (other < 0 || static_cast<std::size_t>(other) >= row.size() || row[other] < 0)
    return std::nullopt;
  return row[other];
}

std::optional<Index> Instance::tie_partner(PersonId judge, Index other) const {
  auto r = rank(judge, other);
  if (!r) return std::nullopt;
  const auto& group = prefs(judge).groups[*r];
  if (group.size() < 2) return std::nullopt;
  return group[0] == other ? group[1] : group[0];
}

Preference Instance::compare(PersonId judge, std::optional<Index> x,
                             std::optional<Index> y) const {
  auto rank_of = [&](std::optional<Index> o) -> int {
    if (!o) return static_cast<int>(prefs(judge).groups.size());
    auto r = rank(judge, *o);
    if (!r) {
      throw InstanceError(InstanceErrorKind::NotOnList,
                          name({opposite(judge.side), *o}) + " is not on the list of " + name(judge));
    }
    return *r;
  };
  const int rx = rank_of(x);
  const int ry = rank_of(y);
  if (rx < ry) return Preference::StrictlyPrefersX;
  if (rx > ry) return Preference::StrictlyPrefersY;
  return Preference::Indifferent;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

struct RawPref {
  std::string owner;
  std::vector<std::vector<std::string>> groups;
  int line = 0;
};

std::vector<std::vector<std::string>> parse_groups(std::string_view body, int line) {
  using K = InstanceErrorKind;
  std::vector<std::vector<std::string>> groups;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < body.size() && (body[i] == ' ' || body[i] == '\t')) ++i;
  };
  auto read_token = [&] {
    std::size_t j = i;
    while (j < body.size() && body[j] != ' ' && body[j] != '\t' && body[j] != '(' && body[j] != ')') ++j;
    std::string tok(body.substr(i, j - i));
    i = j;
    return tok;
  };
  for (skip_ws(); i < body.size(); skip_ws()) {
    if (body[i] == ')') throw InstanceError(K::Syntax, "unbalanced ')'", line);
    if (body[i] == '(') {
      ++i;
      std::vector<std::string> group;
      for (skip_ws(); i < body.size() && body[i] != ')'; skip_ws()) {
        if (body[i] == '(') throw InstanceError(K::Syntax, "nested '('", line);
        group.push_back(read_token());
      }
      if (i >= body.size()) throw InstanceError(K::Syntax, "unterminated '('", line);
      ++i;
      if (group.empty()) throw InstanceError(K::Syntax, "empty tie group", line);
      if (group.size() > 2)
        throw InstanceError(K::TieTooLarge, "group of size " + std::to_string(group.size()), line);
      groups.push_back(std::move(group));
    } else {
      groups.push_back({read_token()});
    }
  }
  return groups;
}

}  // namespace

Instance parse_instance(std::string_view text) {
  using K = InstanceErrorKind;
  std::optional<std::vector<std::string>> men, women;
  std::vector<RawPref> raw;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw InstanceError(K::Syntax, "missing ':'", line_no);
    const auto head = split_ws(line.substr(0, colon));
    const auto body = line.substr(colon + 1);

    if (head.size() == 1 && (head[0] == "men" || head[0] == "women")) {
      auto& slot = head[0] == "men" ? men : women;
      if (slot) throw InstanceError(K::Syntax, "repeated '" + head[0] + ":' section", line_no);
      slot = split_ws(body);
    } else if (head.size() == 2 && head[0] == "pref") {
      raw.push_back({head[1], parse_groups(body, line_no), line_no});
    } else {
      throw InstanceError(K::Syntax, "unrecognized statement", line_no);
    }
  }
  if (!men) men.emplace();
  if (!women) women.emplace();

  for (const auto* roster : {&*men, &*women}) {
    std::map<std::string_view, int> seen;
    for (const auto& n : *roster)
      if (!seen.emplace(n, 0).second) throw InstanceError(K::DuplicateIdentifier, n);
  }

  auto lookup = [](const std::vector<std::string>& roster, std::string_view n) -> std::optional<Index> {
    auto it = std::find(roster.begin(), roster.end(), n);
    if (it == roster.end()) return std::nullopt;
    return static_cast<Index>(it - roster.begin());
  };

  std::vector<PrefList> men_prefs(men->size()), women_prefs(women->size());
  std::vector<bool> men_done(men->size()), women_done(women->size());
  for (const auto& r : raw) {
    auto m = lookup(*men, r.owner);
    auto w = lookup(*women, r.owner);
    if (m && w) throw InstanceError(K::DuplicateIdentifier, r.owner + " on both sides", r.line);
    if (!m && !w) throw InstanceError(K::UnknownIdentifier, r.owner, r.line);
    const bool is_man = m.has_value();
    const Index owner = is_man ? *m : *w;
    auto& done = is_man ? men_done : women_done;
    if (done[owner]) throw InstanceError(K::DuplicateIdentifier, "second pref line for " + r.owner, r.line);
    done[owner] = true;

    const auto& others = is_man ? *women : *men;
    PrefList list;
    std::vector<bool> listed(others.size());
    for (const auto& g : r.groups) {
      std::vector<Index> group;
      for (const auto& n : g) {
        auto o = lookup(others, n);
        if (!o) throw InstanceError(K::UnknownIdentifier, n + " in list of " + r.owner, r.line);
        if (listed[*o]) throw InstanceError(K::DuplicateNeighbor, n + " in list of " + r.owner, r.line);
        listed[*o] = true;
        group.push_back(*o);
      }
      list.groups.push_back(std::move(group));
    }
    (is_man ? men_prefs : women_prefs)[owner] = std::move(list);
  }

  return Instance::create(std::move(*men), std::move(*women), std::move(men_prefs),
                          std::move(women_prefs));
}

std::string serialize_instance(const Instance& instance) {
  std::ostringstream out;
  auto roster = [&](const char* label, Side side) {
    out << label << ':';
    for (const auto& n : instance.names(side)) out << ' ' << n;
    out << '\n';
  };
  roster("men", Side::Man);
  roster("women", Side::Woman);
  for (Side side : {Side::Man, Side::Woman}) {
    for (Index p = 0; p < instance.count(side); ++p) {
      const PersonId who{side, p};
      const auto& groups = instance.prefs(who).groups;
      if (groups.empty()) continue;
      out << "pref " << instance.name(who) << ':';
      for (const auto& g : groups) {
        out << ' ';
        if (g.size() == 2) {
          out << '(' << instance.name({opposite(side), g[0]}) << ' '
              << instance.name({opposite(side), g[1]}) << ')';
        } else {
          out << instance.name({opposite(side), g[0]});
        }
      }
      out << '\n';
    }
  }
  return out.str();
}

std::string digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace tiesmatch
