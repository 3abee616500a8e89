// Copyright 2026 The ufls Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/// \file ufls/charfun_io.hpp
///
/// Text form of a pair of characteristic functions (frequency rise and
/// initial ROCOF) sharing one player list. One coalition per line:
///
///     members=5,8, delta_f_hz=2.2727, rocof_hz_s=2.0092
///
/// Blank lines and lines starting with '#' are ignored. The player order is
/// the order of first appearance. The empty coalition may be omitted; every
/// non-empty coalition must be present exactly once.

#ifndef UFLS_CHARFUN_IO_HPP
#define UFLS_CHARFUN_IO_HPP

#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ufls/coalition_game.hpp"
#include "ufls/detail/text.hpp"
#include "ufls/error.hpp"

namespace ufls {

/// The two games used for the equivalent Shapley value.
struct GamePair {
  CoalitionGame deltaf;
  CoalitionGame rocof;

  const std::vector<std::string>& players() const { return deltaf.players(); }

  GamePair restrict_to(std::span<const std::string> ids) const {
    return {deltaf.restrict_to(ids), rocof.restrict_to(ids)};
  }
};

inline GamePair parse_charfun(std::string_view text, std::string_view origin = "<input>") {
  struct Row {
    std::vector<std::string> members;
    double deltaf;
    double rocof;
    std::size_t line;
  };
  const std::string where(origin);
  auto fail = [&](std::size_t line, const std::string& what) -> void {
    throw ParseError(where + ":" + std::to_string(line) + ": " + what);
  };

  std::vector<Row> rows;
  std::vector<std::string> players;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = detail::trim(raw);
    if (line.empty() || line.front() == '#') {
      continue;
    }
    constexpr std::string_view kMembers = "members=";
    constexpr std::string_view kDeltaF = "delta_f_hz=";
    constexpr std::string_view kRocof = "rocof_hz_s=";
    const auto pd = line.find(kDeltaF);
    const auto pr = line.find(kRocof);
    if (!line.starts_with(kMembers) || pd == line.npos || pr == line.npos || pr < pd) {
      fail(line_no, "expected 'members=<ids>, delta_f_hz=<real>, rocof_hz_s=<real>'");
    }
    std::string_view members = detail::trim(line.substr(kMembers.size(), pd - kMembers.size()));
    if (!members.empty() && members.back() == ',') {
      members.remove_suffix(1);
    }
    std::string_view deltaf_text = detail::trim(line.substr(pd + kDeltaF.size(),
                                                            pr - pd - kDeltaF.size()));
    if (!deltaf_text.empty() && deltaf_text.back() == ',') {
      deltaf_text.remove_suffix(1);
    }
    const auto deltaf = detail::parse_double(deltaf_text);
    if (!deltaf) {
      fail(line_no, "delta_f_hz: not a number");
    }
    const auto rocof = detail::parse_double(line.substr(pr + kRocof.size()));
    if (!rocof) {
      fail(line_no, "rocof_hz_s: not a number");
    }

    Row row{detail::split_list(members), *deltaf, *rocof, line_no};
    for (const auto& id : row.members) {
      if (id.empty()) {
        fail(line_no, "empty member id");
      }
      if (std::find(players.begin(), players.end(), id) == players.end()) {
        players.push_back(id);
      }
    }
    rows.push_back(std::move(row));
  }

  if (players.size() > kMaxPlayers) {
    throw CapacityError(where + ": at most " + std::to_string(kMaxPlayers) +
                        " players are supported, file names " + std::to_string(players.size()));
  }
  GamePair games{CoalitionGame(players), CoalitionGame(players)};
  std::vector<bool> seen(games.deltaf.coalition_count(), false);
  seen[0] = true;
  for (const auto& row : rows) {
    Coalition s;
    for (const auto& id : row.members) {
      const std::size_t i = games.deltaf.index_of(id);
      if (s.contains(i)) {
        fail(row.line, "member '" + id + "' listed twice");
      }
      s = s.with(i);
    }
    if (s.empty()) {
      if (row.deltaf != 0.0 || row.rocof != 0.0) {
        fail(row.line, "the empty coalition must have worth 0");
      }
      continue;
    }
    if (seen[s.bits()]) {
      fail(row.line, "coalition listed twice");
    }
    seen[s.bits()] = true;
    games.deltaf.set_worth(s, row.deltaf);
    games.rocof.set_worth(s, row.rocof);
  }
  for (std::size_t mask = 1; mask < seen.size(); ++mask) {
    if (!seen[mask]) {
      std::string names;
      for (const auto i : Coalition(static_cast<Coalition::mask_type>(mask)).members()) {
        names += (names.empty() ? "" : ",") + players[i];
      }
      throw ValidationError(where + ": missing coalition {" + names + "}");
    }
  }
  return games;
}

inline GamePair load_charfun(const std::filesystem::path& path) {
  return parse_charfun(detail::read_text_file(path), path.string());
}

/// One line per non-empty coalition in ascending mask order; values use the
/// shortest text that reads back to the same double.
inline std::string serialize_charfun(const GamePair& games) {
  if (games.deltaf.players() != games.rocof.players()) {
    throw ValidationError("the two games must share one player list");
  }
  const auto& players = games.players();
  std::string out = "# players:";
  for (std::size_t i = 0; i < players.size(); ++i) {
    out += (i == 0 ? " " : ",") + players[i];
  }
  out += "\n";
  for (std::size_t mask = 1; mask < games.deltaf.coalition_count(); ++mask) {
    const Coalition s(static_cast<Coalition::mask_type>(mask));
    std::string names;
    for (const auto i : s.members()) {
      names += (names.empty() ? "" : ",") + players[i];
    }
    out += "members=" + names + ", delta_f_hz=" + detail::format_shortest(games.deltaf.worth(s)) +
           ", rocof_hz_s=" + detail::format_shortest(games.rocof.worth(s)) + "\n";
  }
  return out;
}

}  // namespace ufls

#endif  // UFLS_CHARFUN_IO_HPP
