#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dmg/edge_list.hpp"
#include "dmg/families.hpp"
#include "dmg/game.hpp"
#include "dmg/policy.hpp"

namespace dmg {

enum class StopReason { AllCaught, StableCycle, MaxRounds, ScriptComplete };

inline const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::AllCaught: return "all_caught";
    case StopReason::StableCycle: return "stable_cycle";
    case StopReason::MaxRounds: return "max_rounds";
    case StopReason::ScriptComplete: return "script_complete";
  }
  return "?";
}

inline std::optional<StopReason> parse_stop_reason(std::string_view s) {
  for (auto r : {StopReason::AllCaught, StopReason::StableCycle, StopReason::MaxRounds, StopReason::ScriptComplete})
    if (s == to_string(r)) return r;
  return std::nullopt;
}

struct RoundRecord {
  std::size_t round = 0;
  Vertex cop_move = kNoVertex;
  std::vector<std::size_t> captured;        // by the cop's move
  std::vector<Vertex> damage_added;
  std::optional<JointRobberMove> robber_move;  // absent when the match stopped after the cop's move
  std::vector<std::size_t> robber_captures;    // robbers that stepped onto the cop

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

struct Transcript {
  std::string graph;  // edge-list text
  std::optional<Landmarks> landmarks;
  std::size_t s = 0;
  std::string cop_spec;
  std::string robber_spec;
  std::uint64_t seed = 0;
  std::size_t max_rounds = 0;
  Vertex cop_start = kNoVertex;
  std::vector<Vertex> robber_start;
  std::vector<std::size_t> placement_captures;
  std::vector<RoundRecord> rounds;
  StopReason stop = StopReason::MaxRounds;
  VertexSet final_damaged;
  std::vector<std::string> flags;
  std::optional<std::string> fault;  // illegal move that ended the match

  std::size_t damage() const { return final_damaged.size(); }
  std::size_t vertex_count() const { return final_damaged.universe(); }
  std::size_t saved() const { return vertex_count() - damage(); }
  bool has_flag(std::string_view f) const { return std::find(flags.begin(), flags.end(), f) != flags.end(); }
};

// A policy produced an illegal action. The partial transcript is kept.
class PolicyFault : public std::runtime_error {
 public:
  PolicyFault(const std::string& what, Transcript partial)
      : std::runtime_error(what), transcript_(std::move(partial)) {}
  const Transcript& transcript() const noexcept { return transcript_; }

 private:
  Transcript transcript_;
};

namespace detail {

inline std::string repetition_key(const GameState& st, const PolicyMemory& cm, const PolicyMemory& rm) {
  std::ostringstream os;
  os << st.cop << '|';
  for (const auto& r : st.robbers) os << (r ? static_cast<std::int64_t>(*r) : -1) << ',';
  os << '|';
  for (auto w : st.damaged.words()) os << w << ',';
  os << '|';
  for (auto w : cm.words) os << w << ',';
  os << '|';
  for (auto w : rm.words) os << w << ',';
  return os.str();
}

inline std::vector<std::string> merged_flags(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace detail

inline std::size_t default_max_rounds(const Graph& g) { return 40 * g.vertex_count(); }

// Plays one match. Round order: cop move (captures, damage); stop if all caught; stop
// if the robber script has finished; robber move; stop on an exact repetition of
// (state, memories); stop at max_rounds.
inline Transcript run_match(const Board& b, std::size_t s, const CopPolicy& cop, const RobberTeamPolicy& robbers,
                            std::size_t max_rounds, std::uint64_t seed) {
  if (max_rounds < 1) throw std::invalid_argument("max_rounds must be at least 1");
  const Graph& g = b.graph;
  Transcript t;
  t.graph = serialize_edge_list(g);
  t.landmarks = b.landmarks;
  t.s = s;
  t.cop_spec = cop.spec();
  t.robber_spec = robbers.spec();
  t.seed = seed;
  t.max_rounds = max_rounds;
  t.final_damaged = VertexSet(g.vertex_count());

  PolicyMemory cm = cop.initial_memory(seed);
  PolicyMemory rm = robbers.initial_memory(seed);
  auto fault = [&](const std::string& who, std::size_t round, const std::string& what) {
    t.fault = who + " at round " + std::to_string(round) + ": " + what;
    t.flags = detail::merged_flags(cop.flags(cm), robbers.flags(rm));
    return PolicyFault(*t.fault, t);
  };

  GameState st = initial_state(g, s);
  const Vertex c0 = cop.place(st, cm);
  try {
    st = place_cop(g, st, c0);
  } catch (const std::exception& e) {
    throw fault("cop policy " + t.cop_spec, 0, e.what());
  }
  t.cop_start = c0;
  const auto r0 = robbers.place(st, rm);
  try {
    st = place_robbers(g, st, r0);
  } catch (const std::exception& e) {
    throw fault("robber policy " + t.robber_spec, 0, e.what());
  }
  t.robber_start = r0;
  for (std::size_t i = 0; i < st.robbers.size(); ++i)
    if (!st.robbers[i]) t.placement_captures.push_back(i);

  std::set<std::string> seen;
  t.stop = StopReason::MaxRounds;
  for (std::size_t round = 1;; ++round) {
    if (st.live_count() == 0) {
      t.stop = StopReason::AllCaught;
      break;
    }
    if (!seen.insert(detail::repetition_key(st, cm, rm)).second) {
      t.stop = StopReason::StableCycle;
      break;
    }
    if (round > max_rounds) {
      t.stop = StopReason::MaxRounds;
      break;
    }
    RoundRecord rec;
    rec.round = round;
    const Vertex cdest = cop.move(st, cm);
    rec.cop_move = cdest;
    CopStep cs;
    try {
      cs = step_cop(g, st, cdest);
    } catch (const std::exception& e) {
      throw fault("cop policy " + t.cop_spec, round, e.what());
    }
    st = cs.state;
    rec.captured = cs.captured;
    rec.damage_added = cs.newly_damaged;
    if (st.live_count() == 0) {
      t.rounds.push_back(std::move(rec));
      t.stop = StopReason::AllCaught;
      break;
    }
    if (robbers.finished(st, rm)) {
      t.rounds.push_back(std::move(rec));
      t.stop = StopReason::ScriptComplete;
      break;
    }
    const JointRobberMove mv = robbers.move(st, rm);
    rec.robber_move = mv;
    RobberStep rs;
    try {
      rs = step_robbers(g, st, mv);
    } catch (const std::exception& e) {
      t.rounds.push_back(rec);
      throw fault("robber policy " + t.robber_spec, round, e.what());
    }
    st = rs.state;
    rec.robber_captures = rs.captured;
    t.rounds.push_back(std::move(rec));
  }
  t.final_damaged = st.damaged;
  t.flags = detail::merged_flags(cop.flags(cm), robbers.flags(rm));
  return t;
}

// Result of replaying a transcript through the game rules.
struct ReplayReport {
  bool ok = true;
  std::string mismatch;  // first disagreement
  std::vector<VertexSet> damage_by_round;
};

inline ReplayReport replay(const Transcript& t) {
  ReplayReport out;
  auto fail = [&](std::string m) {
    out.ok = false;
    out.mismatch = std::move(m);
    return out;
  };
  Graph g;
  try {
    g = parse_edge_list(t.graph);
  } catch (const std::exception& e) {
    return fail(std::string("graph: ") + e.what());
  }
  try {
    GameState st = place_cop(g, initial_state(g, t.s), t.cop_start);
    st = place_robbers(g, st, t.robber_start);
    std::vector<std::size_t> caught;
    for (std::size_t i = 0; i < st.robbers.size(); ++i)
      if (!st.robbers[i]) caught.push_back(i);
    if (caught != t.placement_captures) return fail("placement captures differ");
    std::size_t prev_round = 0;
    for (const auto& rec : t.rounds) {
      if (rec.round <= prev_round) return fail("rounds not strictly increasing at " + std::to_string(rec.round));
      prev_round = rec.round;
      if (st.round != rec.round) return fail("round numbering differs at " + std::to_string(rec.round));
      const auto cs = step_cop(g, st, rec.cop_move);
      if (cs.captured != rec.captured) return fail("cop captures differ in round " + std::to_string(rec.round));
      if (cs.newly_damaged != rec.damage_added) return fail("damage differs in round " + std::to_string(rec.round));
      st = cs.state;
      out.damage_by_round.push_back(st.damaged);
      if (!rec.robber_move) continue;
      const auto rs = step_robbers(g, st, *rec.robber_move);
      if (rs.captured != rec.robber_captures)
        return fail("robber captures differ in round " + std::to_string(rec.round));
      st = rs.state;
    }
    if (!t.fault && !(st.damaged == t.final_damaged)) return fail("final damaged set differs");
  } catch (const std::exception& e) {
    return fail(e.what());
  }
  return out;
}

// JSON -------------------------------------------------------------------------------

inline nlohmann::ordered_json to_json(const JointRobberMove& mv) {
  auto j = nlohmann::ordered_json::array();
  for (const auto& d : mv.dest) j.push_back(d ? nlohmann::ordered_json(*d) : nlohmann::ordered_json(nullptr));
  return j;
}

inline JointRobberMove joint_move_from_json(const nlohmann::json& j) {
  JointRobberMove mv;
  for (const auto& d : j) mv.dest.push_back(d.is_null() ? RobberStatus{} : RobberStatus{d.get<Vertex>()});
  return mv;
}

inline nlohmann::ordered_json to_json(const Transcript& t) {
  nlohmann::ordered_json j;
  j["version"] = "v1";
  j["graph"] = t.graph;
  j["landmarks"] = t.landmarks ? landmarks_to_json(*t.landmarks) : nlohmann::ordered_json(nullptr);
  j["robbers"] = t.s;
  j["cop_policy"] = t.cop_spec;
  j["robber_policy"] = t.robber_spec;
  j["seed"] = t.seed;
  j["max_rounds"] = t.max_rounds;
  j["cop_start"] = t.cop_start;
  j["robber_start"] = t.robber_start;
  j["placement_captures"] = t.placement_captures;
  auto rounds = nlohmann::ordered_json::array();
  for (const auto& r : t.rounds) {
    nlohmann::ordered_json jr;
    jr["round"] = r.round;
    jr["cop_move"] = r.cop_move;
    jr["captured"] = r.captured;
    jr["damage_added"] = r.damage_added;
    jr["robber_move"] = r.robber_move ? to_json(*r.robber_move) : nlohmann::ordered_json(nullptr);
    jr["robber_captures"] = r.robber_captures;
    rounds.push_back(std::move(jr));
  }
  j["rounds"] = std::move(rounds);
  j["stop"] = to_string(t.stop);
  j["final_damaged"] = t.final_damaged.to_vector();
  j["damage"] = t.damage();
  j["saved"] = t.saved();
  j["flags"] = t.flags;
  j["fault"] = t.fault ? nlohmann::ordered_json(*t.fault) : nlohmann::ordered_json(nullptr);
  return j;
}

inline Transcript transcript_from_json(const nlohmann::json& j) {
  if (j.at("version") != "v1") throw std::invalid_argument("unsupported transcript version");
  Transcript t;
  t.graph = j.at("graph").get<std::string>();
  const Graph g = parse_edge_list(t.graph);
  if (!j.at("landmarks").is_null()) t.landmarks = landmarks_from_json(j.at("landmarks"));
  t.s = j.at("robbers").get<std::size_t>();
  t.cop_spec = j.at("cop_policy").get<std::string>();
  t.robber_spec = j.at("robber_policy").get<std::string>();
  t.seed = j.at("seed").get<std::uint64_t>();
  t.max_rounds = j.at("max_rounds").get<std::size_t>();
  t.cop_start = j.at("cop_start").get<Vertex>();
  t.robber_start = j.at("robber_start").get<std::vector<Vertex>>();
  t.placement_captures = j.at("placement_captures").get<std::vector<std::size_t>>();
  for (const auto& jr : j.at("rounds")) {
    RoundRecord r;
    r.round = jr.at("round").get<std::size_t>();
    r.cop_move = jr.at("cop_move").get<Vertex>();
    r.captured = jr.at("captured").get<std::vector<std::size_t>>();
    r.damage_added = jr.at("damage_added").get<std::vector<Vertex>>();
    if (!jr.at("robber_move").is_null()) r.robber_move = joint_move_from_json(jr.at("robber_move"));
    r.robber_captures = jr.at("robber_captures").get<std::vector<std::size_t>>();
    t.rounds.push_back(std::move(r));
  }
  const auto stop = parse_stop_reason(j.at("stop").get<std::string>());
  if (!stop) throw std::invalid_argument("unknown stop reason");
  t.stop = *stop;
  t.final_damaged = VertexSet(g.vertex_count());
  for (auto v : j.at("final_damaged").get<std::vector<Vertex>>()) t.final_damaged.insert(v);
  t.flags = j.at("flags").get<std::vector<std::string>>();
  if (!j.at("fault").is_null()) t.fault = j.at("fault").get<std::string>();
  return t;
}

inline std::string dump(const Transcript& t) { return to_json(t).dump(2) + "\n"; }

// Suites -----------------------------------------------------------------------------

using CopPtr = std::shared_ptr<const CopPolicy>;

// guard(v1), guard(v2), greedy, patrol of the central edge, stationary(v2), random walks 1..20.
inline std::vector<CopPtr> standard_cop_suite(const BoardPtr& b) {
  if (!b->landmarks) throw GraphError(GraphErrc::MissingLandmarks, "the standard suite needs hub vertices");
  const auto& lm = *b->landmarks;
  std::vector<CopPtr> out;
  out.push_back(std::make_shared<GuardCop>(b, lm.v1));
  out.push_back(std::make_shared<GuardCop>(b, lm.v2));
  out.push_back(std::make_shared<GreedyCop>(b));
  const auto [a, c] = central_edge(b->graph).value();
  out.push_back(std::make_shared<PatrolCop>(b, a, c));
  out.push_back(std::make_shared<StationaryCop>(b, lm.v2));
  for (std::uint64_t k = 1; k <= 20; ++k) out.push_back(std::make_shared<RandomWalkCop>(b, k));
  return out;
}

struct SuiteSummary {
  std::vector<Transcript> matches;  // one per suite cop, in suite order
  std::size_t min_damage = 0;
  std::size_t max_damage = 0;
  double mean_damage = 0.0;
};

inline SuiteSummary run_suite(const Board& b, std::size_t s, const RobberTeamPolicy& robbers,
                              const std::vector<CopPtr>& suite, std::size_t max_rounds, std::uint64_t seed) {
  if (suite.empty()) throw std::invalid_argument("empty cop suite");
  SuiteSummary out;
  out.min_damage = std::numeric_limits<std::size_t>::max();
  double total = 0;
  for (const auto& cop : suite) {
    out.matches.push_back(run_match(b, s, *cop, robbers, max_rounds, seed));
    const auto d = out.matches.back().damage();
    out.min_damage = std::min(out.min_damage, d);
    out.max_damage = std::max(out.max_damage, d);
    total += static_cast<double>(d);
  }
  out.mean_damage = total / static_cast<double>(suite.size());
  return out;
}

inline nlohmann::ordered_json to_json(const SuiteSummary& s) {
  nlohmann::ordered_json j;
  j["min_damage"] = s.min_damage;
  j["max_damage"] = s.max_damage;
  j["mean_damage"] = s.mean_damage;
  auto m = nlohmann::ordered_json::array();
  for (const auto& t : s.matches) {
    m.push_back({{"cop_policy", t.cop_spec},
                 {"robber_policy", t.robber_spec},
                 {"damage", t.damage()},
                 {"saved", t.saved()},
                 {"stop", to_string(t.stop)},
                 {"rounds", t.rounds.size()}});
  }
  j["matches"] = std::move(m);
  return j;
}

inline std::string to_csv(const SuiteSummary& s) {
  std::string out = "cop_policy,robber_policy,damage,saved,stop,rounds\n";
  for (const auto& t : s.matches) {
    out += t.cop_spec + "," + t.robber_spec + "," + std::to_string(t.damage()) + "," + std::to_string(t.saved()) +
           "," + to_string(t.stop) + "," + std::to_string(t.rounds.size()) + "\n";
  }
  return out;
}

}  // namespace dmg
