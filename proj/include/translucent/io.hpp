#pragma once

// JSON documents for games, mixed profiles and counterfactual structures.
//
// Numbers may be written as JSON numbers (read as the shortest decimal that
// round-trips, so 0.05 is exactly 1/20) or as strings holding a decimal or a
// fraction ("1/3"). Errors name the offending path, e.g. "game.params.b".

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "translucent/counterfactual.hpp"

namespace translucent {

using Json = nlohmann::ordered_json;

namespace io {

[[noreturn]] inline void fail(const std::string& path, const std::string& message) {
  throw InputError(path + ": " + message);
}

inline const Json& require(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "missing");
  return *it;
}

inline Rational read_rational(const Json& v, const std::string& path) {
  if (v.is_number_integer()) return Rational(static_cast<long>(v.get<long long>()));
  if (v.is_number_float()) return exact_decimal(v.get<double>());
  if (v.is_string()) {
    const std::string text = v.get<std::string>();
    if (text.find('/') != std::string::npos) {
      auto slash = text.find('/');
      try {
        Rational num = parse_decimal(text.substr(0, slash));
        Rational den = parse_decimal(text.substr(slash + 1));
        if (den == 0) fail(path, "zero denominator");
        Rational out = num / den;
        return out;
      } catch (const InputError&) {
        fail(path, "not a fraction: '" + text + "'");
      }
    }
    try {
      return parse_decimal(text);
    } catch (const InputError&) {
      fail(path, "not a number: '" + text + "'");
    }
  }
  fail(path, "expected a number");
}

inline Number read_number(const Json& v, const std::string& path) { return Number(read_rational(v, path)); }

inline int read_int(const Json& v, const std::string& path) {
  if (v.is_number_integer()) {
    long long x = v.get<long long>();
    if (x < -1'000'000'000LL || x > 1'000'000'000LL) fail(path, "integer out of range");
    return static_cast<int>(x);
  }
  if (v.is_number_float()) {
    double x = v.get<double>();
    if (x == static_cast<double>(static_cast<long long>(x)) && std::abs(x) <= 1e9) return static_cast<int>(x);
  }
  fail(path, "expected an integer");
}

inline std::string read_string(const Json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

inline std::vector<Rational> read_rational_array(const Json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array");
  std::vector<Rational> out;
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(read_rational(v[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

inline std::vector<int> read_int_array(const Json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array");
  std::vector<int> out;
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(read_int(v[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

/// "1/3" for non-integers, "2" for integers.
inline Json rational_json(const Rational& q) {
  if (q.get_den() == 1) {
    if (q.get_num().fits_slong_p()) return Json(q.get_num().get_si());
    return Json(q.get_str());
  }
  return Json(q.get_str());
}

/// Line and column of a byte offset, for parse errors.
inline std::string position_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t k = 0; k < text.size() && k + 1 < byte; ++k) {
    if (text[k] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

inline Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(source + ": JSON parse error at " + position_of(text, e.byte));
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline Json load_json_file(const std::string& path) { return parse_json_text(read_file(path), path); }

}  // namespace io

/// {"kind": "pd"|"pgg"|"bertrand"|"td", "params": {...}, "grid": int?}
///   pd: b, c   pgg: n, rho   bertrand: n, l, h   td: l, h, bonus
inline DilemmaParams dilemma_params_from_json(const Json& doc, const std::string& path = "game") {
  DilemmaParams p;
  std::string kind_text = io::read_string(io::require(doc, "kind", path), path + ".kind");
  try {
    p.kind = parse_kind(kind_text);
  } catch (const InputError& e) {
    io::fail(path + ".kind", e.what());
  }
  const std::string pp = path + ".params";
  const Json& params = io::require(doc, "params", path);
  if (!params.is_object()) io::fail(pp, "expected an object");
  auto num = [&](const char* key) { return io::read_number(io::require(params, key, pp), pp + "." + key); };
  auto integer = [&](const char* key) { return io::read_int(io::require(params, key, pp), pp + "." + key); };
  switch (p.kind) {
    case DilemmaKind::kPrisonersDilemma:
      p.b = num("b");
      p.c = num("c");
      break;
    case DilemmaKind::kPublicGoods:
      p.n = integer("n");
      p.rho = num("rho");
      break;
    case DilemmaKind::kBertrand:
      p.n = integer("n");
      p.l = integer("l");
      p.h = integer("h");
      break;
    case DilemmaKind::kTravelersDilemma:
      p.l = integer("l");
      p.h = integer("h");
      p.bonus = num("bonus");
      break;
  }
  if (doc.contains("grid")) p.grid = io::read_int(doc["grid"], path + ".grid");
  return p;
}

inline Json dilemma_params_to_json(const DilemmaParams& p) {
  Json params = Json::object();
  switch (p.kind) {
    case DilemmaKind::kPrisonersDilemma:
      params["b"] = io::rational_json(p.b.exact());
      params["c"] = io::rational_json(p.c.exact());
      break;
    case DilemmaKind::kPublicGoods:
      params["n"] = p.n;
      params["rho"] = io::rational_json(p.rho.exact());
      break;
    case DilemmaKind::kBertrand:
      params["n"] = p.n;
      params["l"] = p.l;
      params["h"] = p.h;
      break;
    case DilemmaKind::kTravelersDilemma:
      params["l"] = p.l;
      params["h"] = p.h;
      params["bonus"] = io::rational_json(p.bonus.exact());
      break;
  }
  Json doc = {{"kind", kind_name(p.kind)}, {"params", params}};
  if (p.kind == DilemmaKind::kPublicGoods) doc["grid"] = p.grid;
  return doc;
}

/// A game document: one of the four dilemmas, or
/// {"kind": "table", "strategy_counts": [...], "payoffs": [...], "labels"?: [[...]]}
/// with payoffs laid out as payoffs[profile_index * N + player].
inline Game game_from_json(const Json& doc, const std::string& path = "game") {
  std::string kind = io::read_string(io::require(doc, "kind", path), path + ".kind");
  if (kind != "table") {
    DilemmaParams p = dilemma_params_from_json(doc, path);
    switch (p.kind) {
      case DilemmaKind::kPrisonersDilemma: return Game(PrisonersDilemmaRule{p.b, p.c});
      case DilemmaKind::kPublicGoods: return Game(PublicGoodsRule{p.n, p.rho, p.grid});
      case DilemmaKind::kBertrand: return Game(BertrandRule{p.n, p.l, p.h});
      case DilemmaKind::kTravelersDilemma: return Game(TravelersDilemmaRule{p.l, p.h, p.bonus});
    }
  }
  PayoffTableRule rule;
  rule.strategy_counts = io::read_int_array(io::require(doc, "strategy_counts", path), path + ".strategy_counts");
  for (const auto& q : io::read_rational_array(io::require(doc, "payoffs", path), path + ".payoffs")) {
    rule.payoffs.emplace_back(q);
  }
  if (doc.contains("labels")) {
    const Json& labels = doc["labels"];
    if (!labels.is_array()) io::fail(path + ".labels", "expected an array");
    for (std::size_t i = 0; i < labels.size(); ++i) {
      std::vector<std::string> row;
      if (!labels[i].is_array()) io::fail(path + ".labels[" + std::to_string(i) + "]", "expected an array");
      for (std::size_t s = 0; s < labels[i].size(); ++s) {
        row.push_back(io::read_string(labels[i][s], path + ".labels[" + std::to_string(i) + "][" + std::to_string(s) + "]"));
      }
      rule.labels.push_back(std::move(row));
    }
  }
  try {
    return Game(std::move(rule));
  } catch (const InputError& e) {
    io::fail(path, e.what());
  }
}

inline MixedProfile<Rational> mixed_profile_from_json(const Json& doc, const std::string& path = "sigma") {
  if (!doc.is_array()) io::fail(path, "expected an array of per-player distributions");
  MixedProfile<Rational> sigma;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    sigma.probs.push_back(io::read_rational_array(doc[i], path + "[" + std::to_string(i) + "]"));
  }
  return sigma;
}

namespace io {

inline std::map<std::pair<Profile, std::vector<int>>, int> state_lookup(const CounterfactualStructure<Rational>& m) {
  std::map<std::pair<Profile, std::vector<int>>, int> lookup;
  for (int w = 0; w < m.num_states(); ++w) {
    lookup.emplace(std::make_pair(m.profiles[static_cast<std::size_t>(w)], m.aux[static_cast<std::size_t>(w)]), w);
  }
  return lookup;
}

/// The closest state a switch lands on unless the file says otherwise: the
/// same state with player i's strategy replaced, or the state itself for no
/// switch. -1 when no such state exists.
inline int default_closest(const CounterfactualStructure<Rational>& m,
                           const std::map<std::pair<Profile, std::vector<int>>, int>& lookup, int w, int i,
                           int s) {
  if (m.strategy(w, i) == s) return w;
  Profile target = with_strategy(m.profiles[static_cast<std::size_t>(w)], i, s);
  auto it = lookup.find({target, m.aux[static_cast<std::size_t>(w)]});
  return it == lookup.end() ? -1 : it->second;
}

}  // namespace io

/// {"strategy_counts": [...], "game"?: {...},
///  "states": [{"profile": [...], "aux"?: [...]}, ...],
///  "closest": [{"state", "player", "strategy", "target"}, ...],   only non-defaults
///  "beliefs": [{"player", "state", "row": [[state, p], ...]}, ...]}
inline CounterfactualStructure<Rational> structure_from_json(const Json& doc, const std::string& path = "structure") {
  CounterfactualStructure<Rational> m;
  m.strategy_counts = io::read_int_array(io::require(doc, "strategy_counts", path), path + ".strategy_counts");
  const int n = static_cast<int>(m.strategy_counts.size());
  if (n < 2) io::fail(path + ".strategy_counts", "need at least 2 players");
  for (int c : m.strategy_counts) {
    if (c < 1 || c > 1'000'000) io::fail(path + ".strategy_counts", "strategy counts must lie in [1, 1e6]");
  }

  const Json& states = io::require(doc, "states", path);
  if (!states.is_array()) io::fail(path + ".states", "expected an array");
  for (std::size_t w = 0; w < states.size(); ++w) {
    const std::string sp = path + ".states[" + std::to_string(w) + "]";
    Profile profile = io::read_int_array(io::require(states[w], "profile", sp), sp + ".profile");
    if (static_cast<int>(profile.size()) != n) io::fail(sp + ".profile", "wrong length");
    for (int i = 0; i < n; ++i) {
      if (profile[static_cast<std::size_t>(i)] < 0 ||
          profile[static_cast<std::size_t>(i)] >= m.strategy_counts[static_cast<std::size_t>(i)]) {
        io::fail(sp + ".profile", "strategy out of range");
      }
    }
    m.profiles.push_back(std::move(profile));
    m.aux.push_back(states[w].contains("aux") ? io::read_int_array(states[w]["aux"], sp + ".aux") : std::vector<int>{});
  }
  const int count = m.num_states();
  auto lookup = io::state_lookup(m);
  if (static_cast<int>(lookup.size()) != count) io::fail(path + ".states", "duplicate state");

  m.closest.resize(static_cast<std::size_t>(count));
  for (int w = 0; w < count; ++w) {
    auto& row = m.closest[static_cast<std::size_t>(w)];
    row.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      for (int s = 0; s < m.strategy_counts[static_cast<std::size_t>(i)]; ++s) {
        row[static_cast<std::size_t>(i)].push_back(io::default_closest(m, lookup, w, i, s));
      }
    }
  }
  auto index_in = [&](const Json& v, const std::string& p, int limit) {
    int x = io::read_int(v, p);
    if (x < 0 || x >= limit) io::fail(p, "out of range");
    return x;
  };
  if (doc.contains("closest")) {
    const Json& entries = doc["closest"];
    if (!entries.is_array()) io::fail(path + ".closest", "expected an array");
    for (std::size_t k = 0; k < entries.size(); ++k) {
      const std::string ep = path + ".closest[" + std::to_string(k) + "]";
      int w = index_in(io::require(entries[k], "state", ep), ep + ".state", count);
      int i = index_in(io::require(entries[k], "player", ep), ep + ".player", n);
      int s = index_in(io::require(entries[k], "strategy", ep), ep + ".strategy",
                       m.strategy_counts[static_cast<std::size_t>(i)]);
      int target = index_in(io::require(entries[k], "target", ep), ep + ".target", count);
      m.closest[static_cast<std::size_t>(w)][static_cast<std::size_t>(i)][static_cast<std::size_t>(s)] = target;
    }
  }

  m.beliefs.assign(static_cast<std::size_t>(n), std::vector<BeliefRow<Rational>>(static_cast<std::size_t>(count)));
  const Json& beliefs = io::require(doc, "beliefs", path);
  if (!beliefs.is_array()) io::fail(path + ".beliefs", "expected an array");
  for (std::size_t k = 0; k < beliefs.size(); ++k) {
    const std::string bp = path + ".beliefs[" + std::to_string(k) + "]";
    int i = index_in(io::require(beliefs[k], "player", bp), bp + ".player", n);
    int w = index_in(io::require(beliefs[k], "state", bp), bp + ".state", count);
    const Json& row = io::require(beliefs[k], "row", bp);
    if (!row.is_array()) io::fail(bp + ".row", "expected an array");
    BeliefRow<Rational> entries;
    for (std::size_t e = 0; e < row.size(); ++e) {
      const std::string rp = bp + ".row[" + std::to_string(e) + "]";
      if (!row[e].is_array() || row[e].size() != 2) io::fail(rp, "expected [state, probability]");
      int target = index_in(row[e][0], rp + "[0]", count);
      entries.emplace_back(target, io::read_rational(row[e][1], rp + "[1]"));
    }
    // Keep zero and negative entries visible to the validator.
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    m.beliefs[static_cast<std::size_t>(i)][static_cast<std::size_t>(w)] = std::move(entries);
  }
  return m;
}

inline Json structure_to_json(const CounterfactualStructure<Rational>& m, const Json* game = nullptr) {
  Json doc = Json::object();
  doc["strategy_counts"] = m.strategy_counts;
  if (game != nullptr) doc["game"] = *game;
  Json states = Json::array();
  for (int w = 0; w < m.num_states(); ++w) {
    Json state = {{"profile", m.profiles[static_cast<std::size_t>(w)]}};
    if (!m.aux[static_cast<std::size_t>(w)].empty()) state["aux"] = m.aux[static_cast<std::size_t>(w)];
    states.push_back(std::move(state));
  }
  doc["states"] = std::move(states);
  auto lookup = io::state_lookup(m);
  Json closest = Json::array();
  for (int w = 0; w < m.num_states(); ++w) {
    for (int i = 0; i < m.num_players(); ++i) {
      for (int s = 0; s < m.strategy_counts[static_cast<std::size_t>(i)]; ++s) {
        int target = m.closest_state(w, i, s);
        if (target != io::default_closest(m, lookup, w, i, s)) {
          closest.push_back({{"state", w}, {"player", i}, {"strategy", s}, {"target", target}});
        }
      }
    }
  }
  doc["closest"] = std::move(closest);
  Json beliefs = Json::array();
  for (int i = 0; i < m.num_players(); ++i) {
    for (int w = 0; w < m.num_states(); ++w) {
      Json row = Json::array();
      for (const auto& [target, p] : m.belief(i, w)) row.push_back(Json::array({target, io::rational_json(p)}));
      beliefs.push_back({{"player", i}, {"state", w}, {"row", std::move(row)}});
    }
  }
  doc["beliefs"] = std::move(beliefs);
  return doc;
}

}  // namespace translucent
