#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dmg/edge_list.hpp"
#include "dmg/graph.hpp"

namespace dmg {

enum class Phase : std::uint8_t { CopPlacement, RobberPlacement, CopToMove, RobbersToMove };

inline const char* to_string(Phase p) {
  switch (p) {
    case Phase::CopPlacement: return "cop_placement";
    case Phase::RobberPlacement: return "robber_placement";
    case Phase::CopToMove: return "cop_to_move";
    case Phase::RobbersToMove: return "robbers_to_move";
  }
  return "?";
}

// Live(vertex) or Caught (nullopt).
using RobberStatus = std::optional<Vertex>;

enum class RulesErrc { InvalidArgument, WrongPhase, IllegalMove };

class RulesError : public std::runtime_error {
 public:
  RulesError(RulesErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  RulesErrc code() const noexcept { return code_; }

 private:
  RulesErrc code_;
};

struct GameState {
  Vertex cop = kNoVertex;
  std::size_t robber_count = 0;
  std::vector<RobberStatus> robbers;  // empty until the robbers are placed
  VertexSet damaged;
  Phase phase = Phase::CopPlacement;
  std::size_t round = 0;

  std::size_t live_count() const {
    return static_cast<std::size_t>(std::count_if(robbers.begin(), robbers.end(), [](auto r) { return r.has_value(); }));
  }
  bool is_live(std::size_t id) const { return id < robbers.size() && robbers[id].has_value(); }

  // Sorted positions of live robbers.
  std::vector<Vertex> live_positions() const {
    std::vector<Vertex> out;
    for (const auto& r : robbers)
      if (r) out.push_back(*r);
    std::sort(out.begin(), out.end());
    return out;
  }

  friend bool operator==(const GameState&, const GameState&) = default;
};

// Per-robber destination indexed by robber id; caught robbers carry nullopt.
struct JointRobberMove {
  std::vector<RobberStatus> dest;
  friend bool operator==(const JointRobberMove&, const JointRobberMove&) = default;
};

namespace detail {
inline void require_phase(const GameState& s, Phase p, const char* op) {
  if (s.phase != p) {
    throw RulesError(RulesErrc::WrongPhase,
                     std::string(op) + ": expected phase " + to_string(p) + ", got " + to_string(s.phase));
  }
}
}  // namespace detail

inline GameState initial_state(const Graph& g, std::size_t s) {
  if (s == 0) throw RulesError(RulesErrc::InvalidArgument, "at least one robber is required");
  if (g.empty()) throw RulesError(RulesErrc::InvalidArgument, "graph has no vertices");
  GameState st;
  st.robber_count = s;
  st.damaged = VertexSet(g.vertex_count());
  return st;
}

inline GameState place_cop(const Graph& g, GameState st, Vertex v) {
  detail::require_phase(st, Phase::CopPlacement, "place_cop");
  if (v >= g.vertex_count()) throw RulesError(RulesErrc::IllegalMove, "cop placement out of range");
  st.cop = v;
  st.phase = Phase::RobberPlacement;
  return st;
}

// Robbers placed on the cop's vertex are caught on the spot.
inline GameState place_robbers(const Graph& g, GameState st, const std::vector<Vertex>& at) {
  detail::require_phase(st, Phase::RobberPlacement, "place_robbers");
  if (at.size() != st.robber_count) {
    throw RulesError(RulesErrc::IllegalMove, "expected " + std::to_string(st.robber_count) + " robber placements");
  }
  st.robbers.clear();
  for (Vertex v : at) {
    if (v >= g.vertex_count()) throw RulesError(RulesErrc::IllegalMove, "robber placement out of range");
    st.robbers.push_back(v == st.cop ? RobberStatus{} : RobberStatus{v});
  }
  st.phase = Phase::CopToMove;
  st.round = 1;
  return st;
}

inline std::vector<Vertex> legal_cop_moves(const Graph& g, const GameState& st) {
  detail::require_phase(st, Phase::CopToMove, "legal_cop_moves");
  return g.closed_neighborhood(st.cop);
}

struct CopStep {
  GameState state;
  std::vector<std::size_t> captured;   // robber ids
  std::vector<Vertex> newly_damaged;   // ascending
};

// Capture first, then damage assessment of every robber still live.
inline CopStep step_cop(const Graph& g, const GameState& st, Vertex dest) {
  detail::require_phase(st, Phase::CopToMove, "apply_cop_move");
  if (dest >= g.vertex_count() || !g.in_closed_neighborhood(st.cop, dest)) {
    throw RulesError(RulesErrc::IllegalMove, "cop cannot move from " + std::to_string(st.cop) + " to " +
                                                 std::to_string(dest));
  }
  CopStep out{st, {}, {}};
  auto& next = out.state;
  next.cop = dest;
  for (std::size_t i = 0; i < next.robbers.size(); ++i) {
    if (next.robbers[i] && *next.robbers[i] == dest) {
      next.robbers[i].reset();
      out.captured.push_back(i);
    }
  }
  for (const auto& r : next.robbers) {
    if (r && !next.damaged.contains(*r)) {
      next.damaged.insert(*r);
      out.newly_damaged.push_back(*r);
    }
  }
  std::sort(out.newly_damaged.begin(), out.newly_damaged.end());
  out.newly_damaged.erase(std::unique(out.newly_damaged.begin(), out.newly_damaged.end()), out.newly_damaged.end());
  next.phase = Phase::RobbersToMove;
  return out;
}

inline GameState apply_cop_move(const Graph& g, const GameState& st, Vertex dest) {
  return step_cop(g, st, dest).state;
}

struct RobberStep {
  GameState state;
  std::vector<std::size_t> captured;  // robbers that stepped onto the cop
};

inline RobberStep step_robbers(const Graph& g, const GameState& st, const JointRobberMove& mv) {
  detail::require_phase(st, Phase::RobbersToMove, "apply_robber_move");
  if (mv.dest.size() != st.robbers.size()) throw RulesError(RulesErrc::IllegalMove, "joint move has wrong arity");
  RobberStep out{st, {}};
  auto& next = out.state;
  for (std::size_t i = 0; i < st.robbers.size(); ++i) {
    const auto& from = st.robbers[i];
    const auto& to = mv.dest[i];
    if (!from) {
      if (to) throw RulesError(RulesErrc::IllegalMove, "caught robber " + std::to_string(i) + " cannot move");
      continue;
    }
    if (!to || *to >= g.vertex_count() || !g.in_closed_neighborhood(*from, *to)) {
      throw RulesError(RulesErrc::IllegalMove, "robber " + std::to_string(i) + " cannot move from " +
                                                   std::to_string(*from) + " to " +
                                                   (to ? std::to_string(*to) : std::string("nothing")));
    }
    if (*to == st.cop) {
      next.robbers[i].reset();
      out.captured.push_back(i);
    } else {
      next.robbers[i] = *to;
    }
  }
  next.phase = Phase::CopToMove;
  ++next.round;
  return out;
}

inline GameState apply_robber_move(const Graph& g, const GameState& st, const JointRobberMove& mv) {
  return step_robbers(g, st, mv).state;
}

// One representative per multiset of destinations. Robbers sharing a position are
// interchangeable, so their destination tuples are taken non-decreasing; the final
// filter removes coincidences between robbers at different positions.
inline std::vector<JointRobberMove> legal_joint_robber_moves(const Graph& g, const GameState& st) {
  detail::require_phase(st, Phase::RobbersToMove, "legal_joint_robber_moves");
  std::vector<std::size_t> live;
  for (std::size_t i = 0; i < st.robbers.size(); ++i)
    if (st.robbers[i]) live.push_back(i);
  std::sort(live.begin(), live.end(), [&](auto a, auto b) {
    return std::pair(*st.robbers[a], a) < std::pair(*st.robbers[b], b);
  });

  std::vector<JointRobberMove> out;
  std::set<std::vector<Vertex>> seen;
  JointRobberMove cur{std::vector<RobberStatus>(st.robbers.size())};
  std::vector<std::vector<Vertex>> options;
  for (auto id : live) options.push_back(g.closed_neighborhood(*st.robbers[id]));

  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (k == live.size()) {
      std::vector<Vertex> ms;
      for (auto id : live) ms.push_back(*cur.dest[id]);
      std::sort(ms.begin(), ms.end());
      if (seen.insert(ms).second) out.push_back(cur);
      return;
    }
    const auto id = live[k];
    const bool same_as_prev = k > 0 && *st.robbers[live[k - 1]] == *st.robbers[id];
    for (Vertex d : options[k]) {
      if (same_as_prev && d < *cur.dest[live[k - 1]]) continue;
      cur.dest[id] = d;
      self(self, k + 1);
    }
    cur.dest[id].reset();
  };
  rec(rec, 0);
  return out;
}

struct ClassKey {
  std::size_t live = 0;
  VertexSet damaged;
  friend bool operator==(const ClassKey&, const ClassKey&) = default;
};

inline ClassKey class_key(const GameState& st) { return {st.live_count(), st.damaged}; }

inline bool is_settled(const GameState& st) {
  return (st.phase == Phase::CopToMove || st.phase == Phase::RobbersToMove) && st.live_count() == 0;
}

// `later` is no larger than `earlier` in the progress order: fewer live robbers, or
// the same number and a superset of damage.
inline bool class_not_above(const ClassKey& later, const ClassKey& earlier) {
  if (later.live < earlier.live) return earlier.damaged.is_subset_of(later.damaged);
  return later.live == earlier.live && earlier.damaged.is_subset_of(later.damaged);
}

inline DotOverlay overlay(const GameState& st) {
  DotOverlay o;
  o.cop = st.cop;
  o.robbers = st.live_positions();
  o.damaged = st.damaged;
  return o;
}

// Stable 64-bit fingerprint of a state (round excluded).
inline std::uint64_t fingerprint(const GameState& st) {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  auto mix = [&h](std::uint64_t x) {
    h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
  };
  mix(st.cop);
  mix(static_cast<std::uint64_t>(st.phase));
  mix(st.robber_count);
  for (const auto& r : st.robbers) mix(r ? *r + 1 : 0);
  for (auto w : st.damaged.words()) mix(w);
  return h;
}

}  // namespace dmg
