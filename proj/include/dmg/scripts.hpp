#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dmg/families.hpp"
#include "dmg/game.hpp"
#include "dmg/policy.hpp"

namespace dmg {

// Configuration of a robber-team script on a landmarked gprime/g instance.
struct ScriptConfig {
  std::string name;
  std::vector<GreatCycle> cycles;         // cycle attacks, in order
  bool finish = true;                     // run the finishing phase after the cycle attacks
  bool pair_attack = false;               // all-out-attack-2 (pairs of matched paths) instead of single paths
  std::size_t dash_team = 2;              // robbers used by converging attacks on a non-hub centre
  std::optional<Vertex> fixed_center;     // skip the cycle attacks and attack N[center] directly
  bool single_attack = false;             // stop after one completed all-out attack
  std::int64_t halt_window = 2;           // rotators count as both halted if each halted within this many rounds
};

// Mutable script state, flattened into PolicyMemory words.
struct ScriptState {
  enum Phase : std::int64_t { kCycles = 0, kFinish = 1, kDone = 2 };
  enum Mode : std::int64_t { kGather = 0, kMarch = 1, kIntermission = 2, kConverge = 3 };
  enum Leg : std::int64_t { kToHub = 0, kDown = 1, kReturn = 2 };
  enum RobberLeg : std::int64_t { kOut = 0, kPartner = 1, kBack = 2, kHome = 3 };
  static constexpr std::int64_t kNone = -1;

  std::int64_t phase = kCycles;
  std::int64_t cycle = 0;
  std::int64_t stage = 1;
  std::int64_t r1 = kNone, r2 = kNone, r3 = kNone;
  std::int64_t dir1 = 1, dir2 = -1;
  std::int64_t hub = kNone, path = 0, leg = kToHub;
  std::int64_t center = kNone;
  std::int64_t neighborhood_ok = kNone;  // -1 unchecked, 0 violated, 1 held
  std::int64_t mode = kGather;
  std::int64_t attacks = 0;
  std::int64_t intermissions = 0;
  std::int64_t route_failures = 0;
  std::int64_t phase_a_round = kNone;
  std::int64_t halt1 = kNone, halt2 = kNone;  // last rounds in which the rotators were halted
  std::int64_t last_damage = 0, stall = 0;     // finishing phase: rounds without new damage
  std::int64_t no_targets = 0;
  std::vector<std::int64_t> assigned;  // per robber: path (or pair) index, -1 if none
  std::vector<std::int64_t> rleg;      // per robber: RobberLeg

  static constexpr std::size_t kHeader = 24;

  PolicyMemory encode() const {
    PolicyMemory m;
    m.words = {phase, cycle, stage, r1, r2, r3, dir1, dir2, hub, path, leg, center, neighborhood_ok,
               mode, attacks, intermissions, route_failures, phase_a_round, halt1, halt2, last_damage, stall, no_targets,
               static_cast<std::int64_t>(assigned.size())};
    m.words.insert(m.words.end(), assigned.begin(), assigned.end());
    m.words.insert(m.words.end(), rleg.begin(), rleg.end());
    return m;
  }

  static ScriptState decode(const PolicyMemory& m, std::size_t s) {
    ScriptState st;
    st.assigned.assign(s, kNone);
    st.rleg.assign(s, kHome);
    if (m.words.size() < kHeader) return st;
    const auto& w = m.words;
    st.phase = w[0], st.cycle = w[1], st.stage = w[2], st.r1 = w[3], st.r2 = w[4], st.r3 = w[5];
    st.dir1 = w[6], st.dir2 = w[7], st.hub = w[8], st.path = w[9], st.leg = w[10], st.center = w[11];
    st.neighborhood_ok = w[12], st.mode = w[13], st.attacks = w[14], st.intermissions = w[15];
    st.route_failures = w[16], st.phase_a_round = w[17], st.halt1 = w[18], st.halt2 = w[19];
    st.last_damage = w[20], st.stall = w[21], st.no_targets = w[22];
    const auto k = static_cast<std::size_t>(w[23]);
    for (std::size_t i = 0; i < k && i < s && kHeader + k + i < w.size(); ++i) {
      st.assigned[i] = w[kHeader + i];
      st.rleg[i] = w[kHeader + k + i];
    }
    return st;
  }
};

// Breadth-first route from `from` to the nearest vertex of `goals`, avoiding `forbidden`
// (the start itself is exempt). Lowest ids are expanded first.
inline std::optional<std::vector<Vertex>> route_to_any(const Graph& g, Vertex from, const VertexSet& goals,
                                                       const VertexSet& forbidden) {
  std::vector<Vertex> parent(g.vertex_count(), kNoVertex);
  std::vector<char> seen(g.vertex_count(), 0);
  std::queue<Vertex> q;
  q.push(from);
  seen[from] = 1;
  while (!q.empty()) {
    const Vertex x = q.front();
    q.pop();
    if (goals.contains(x)) {
      std::vector<Vertex> path{x};
      for (Vertex y = x; y != from;) {
        y = parent[y];
        path.push_back(y);
      }
      std::reverse(path.begin(), path.end());
      return path;
    }
    for (Vertex y : g.neighbors(x)) {
      if (seen[y] || forbidden.contains(y)) continue;
      seen[y] = 1;
      parent[y] = x;
      q.push(y);
    }
  }
  return std::nullopt;
}

// Robber-team program built from cautious play, cycle attacks and all-out attacks.
//
// Cycle attack on a great cycle C with robbers r1, r2, r3:
//   stage 1  two robbers get onto C (the one not farther from v1 heads for v1, the other for v2);
//   stage 2  r1 rotates along increasing cycle index, r2 along decreasing, both cautiously;
//   stage 3  once both are halted (within `halt_window` rounds of each other), directions swap;
//   stage 4  once both are halted again, r3 walks each hub-to-hub path from the hub the
//            cop is farther from, as far as is safe, returning to that hub in between.
// The attack ends as soon as every vertex of C is damaged.
//
// Finishing phase: the undamaged vertices must fit in one closed neighbourhood N[x].
// For a hub x the team runs all-out attacks from the other hub; otherwise (and for the
// last three robbers of a pair attack) robbers converge on the remaining targets along
// disjoint routes and step onto them in the same round.
class RobberScript : public RobberTeamPolicy {
 public:
  RobberScript(BoardPtr b, ScriptConfig cfg) : b_(std::move(b)), cfg_(std::move(cfg)) {
    if (!b_->landmarks) throw GraphError(GraphErrc::MissingLandmarks, "robber scripts need a gprime or g instance");
  }

  std::string spec() const override { return cfg_.name; }
  const ScriptConfig& config() const noexcept { return cfg_; }

  PolicyMemory initial_memory(std::uint64_t) const override { return {}; }

  std::vector<Vertex> place(const GameState& st, PolicyMemory& mem) const override {
    ScriptState ss = fresh(st.robber_count);
    mem = ss.encode();
    return far_placement(*b_, st.cop, st.robber_count);
  }

  bool finished(const GameState& st, const PolicyMemory& mem) const override {
    return ScriptState::decode(mem, st.robbers.size()).phase == ScriptState::kDone;
  }

  std::vector<std::string> flags(const PolicyMemory& mem) const override {
    std::vector<std::string> out;
    if (mem.words.size() < ScriptState::kHeader) return out;
    const auto ss = ScriptState::decode(mem, 0);
    if (ss.neighborhood_ok == 1) out.push_back("neighborhood-ok");
    if (ss.neighborhood_ok == 0) out.push_back("neighborhood-violated");
    if (ss.center != ScriptState::kNone) out.push_back("center=" + std::to_string(ss.center));
    if (ss.phase_a_round != ScriptState::kNone) out.push_back("finish-from-round=" + std::to_string(ss.phase_a_round));
    if (ss.route_failures > 0) out.push_back("disjoint-routes-unavailable");
    if (ss.no_targets) out.push_back("no-undamaged-targets");
    out.push_back("attacks=" + std::to_string(ss.attacks));
    out.push_back("intermissions=" + std::to_string(ss.intermissions));
    return out;
  }

  JointRobberMove move(const GameState& st, PolicyMemory& mem) const override {
    ScriptState ss = mem.words.size() < ScriptState::kHeader ? fresh(st.robbers.size())
                                                              : ScriptState::decode(mem, st.robbers.size());
    JointRobberMove mv{st.robbers};
    for (std::size_t i = 0; i < st.robbers.size(); ++i)
      if (st.robbers[i]) mv.dest[i] = idle(st, *st.robbers[i]);

    for (int guard = 0; guard < 64; ++guard) {
      if (ss.phase == ScriptState::kCycles) {
        if (cycle_turn(st, ss, mv)) break;
      } else if (ss.phase == ScriptState::kFinish) {
        if (finish_turn(st, ss, mv)) break;
      } else {
        break;
      }
    }
    mem = ss.encode();
    return mv;
  }

 private:
  ScriptState fresh(std::size_t s) const {
    ScriptState ss;
    ss.assigned.assign(s, ScriptState::kNone);
    ss.rleg.assign(s, ScriptState::kHome);
    if (cfg_.fixed_center) {
      ss.phase = ScriptState::kFinish;
      ss.center = *cfg_.fixed_center;
      ss.mode = start_mode(*cfg_.fixed_center);
    }
    return ss;
  }

  const Landmarks& lm() const { return *b_->landmarks; }

  Vertex idle(const GameState& st, Vertex pos) const { return cautious_step(*b_, st.cop, pos, pos); }

  static std::vector<std::size_t> live_ids(const GameState& st) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < st.robbers.size(); ++i)
      if (st.robbers[i]) out.push_back(i);
    return out;
  }

  static VertexSet undamaged(const Graph& g, const GameState& st) {
    VertexSet u(g.vertex_count());
    for (Vertex v = 0; v < g.vertex_count(); ++v)
      if (!st.damaged.contains(v)) u.insert(v);
    return u;
  }

  std::int64_t start_mode(Vertex x) const {
    return (x == lm().v1 || x == lm().v2) ? ScriptState::kGather : ScriptState::kConverge;
  }

  // Cycle attacks ---------------------------------------------------------------

  // Returns true when the moves for this turn are final.
  bool cycle_turn(const GameState& st, ScriptState& ss, JointRobberMove& mv) const {
    if (static_cast<std::size_t>(ss.cycle) >= cfg_.cycles.size()) {
      if (!cfg_.finish) {
        ss.phase = ScriptState::kDone;
        return true;
      }
      enter_finish(st, ss);
      return false;
    }
    const GreatCycle& c = cfg_.cycles[static_cast<std::size_t>(ss.cycle)];
    const bool all_damaged =
        std::all_of(c.vertices.begin(), c.vertices.end(), [&](Vertex v) { return st.damaged.contains(v); });
    auto trio = live_ids(st);
    if (trio.size() > 3) trio.resize(3);
    if (all_damaged || trio.size() < 2) {
      next_cycle(ss);
      return false;
    }
    auto on_cycle = [&](Vertex v) { return c.contains(v); };
    auto live = [&](std::int64_t r) { return r >= 0 && st.is_live(static_cast<std::size_t>(r)); };

    if (ss.stage >= 2 && (!live(ss.r1) || !live(ss.r2))) ss.stage = 1;

    if (ss.stage == 1) {
      std::vector<std::size_t> on, off;
      for (auto r : trio) (on_cycle(*st.robbers[r]) ? on : off).push_back(r);
      if (on.size() >= 2) {
        ss.r1 = static_cast<std::int64_t>(on[0]);
        ss.r2 = static_cast<std::int64_t>(on[1]);
        ss.r3 = ScriptState::kNone;
        for (auto r : trio)
          if (static_cast<std::int64_t>(r) != ss.r1 && static_cast<std::int64_t>(r) != ss.r2)
            ss.r3 = static_cast<std::int64_t>(r);
        ss.dir1 = 1;
        ss.dir2 = -1;
        ss.halt1 = ss.halt2 = ScriptState::kNone;
        ss.stage = 2;
      } else {
        for (auto r : on) mv.dest[r] = cautious_step(*b_, st.cop, *st.robbers[r], *st.robbers[r], on_cycle);
        if (off.size() >= 2) {
          const auto a = off[0], b = off[1];
          const bool a_first = b_->dist(*st.robbers[a], lm().v1) <= b_->dist(*st.robbers[b], lm().v1);
          head_for(st, a, a_first ? lm().v1 : lm().v2, mv);
          head_for(st, b, a_first ? lm().v2 : lm().v1, mv);
        } else if (off.size() == 1) {
          const auto a = off[0];
          const Vertex pos = *st.robbers[a];
          head_for(st, a, b_->dist(pos, lm().v1) <= b_->dist(pos, lm().v2) ? lm().v1 : lm().v2, mv);
        }
        return true;
      }
    }

    // Stages 2-4: rotation.
    // With a window of 2, both rotators count as halted when each was halted in this
    // round or the previous one; a cop shuttling between them stops them on alternate rounds.
    const auto now = static_cast<std::int64_t>(st.round);
    if (rotate(st, c, static_cast<std::size_t>(ss.r1), ss.dir1, mv)) ss.halt1 = now;
    if (rotate(st, c, static_cast<std::size_t>(ss.r2), ss.dir2, mv)) ss.halt2 = now;
    const bool both = ss.halt1 != ScriptState::kNone && ss.halt2 != ScriptState::kNone &&
                      std::min(ss.halt1, ss.halt2) > now - cfg_.halt_window;
    if (ss.stage == 2 && both) {
      ss.stage = 3;
      ss.dir1 = -1;
      ss.dir2 = 1;
      ss.halt1 = ss.halt2 = ScriptState::kNone;
      return true;
    }
    if (ss.stage == 3 && both) {
      if (!live(ss.r3)) {
        next_cycle(ss);
        return true;
      }
      ss.stage = 4;
      const auto d1 = b_->dist(st.cop, lm().v1), d2 = b_->dist(st.cop, lm().v2);
      ss.hub = d2 <= d1 ? lm().v1 : lm().v2;
      ss.path = 0;
      ss.leg = ScriptState::kToHub;
    }
    if (ss.stage == 4) {
      if (!live(ss.r3)) {
        next_cycle(ss);
        return true;
      }
      if (!stage4_helper(st, ss, mv)) {
        next_cycle(ss);
        return false;
      }
    }
    return true;
  }

  void next_cycle(ScriptState& ss) const {
    ++ss.cycle;
    ss.stage = 1;
    ss.r1 = ss.r2 = ss.r3 = ScriptState::kNone;
    ss.halt1 = ss.halt2 = ScriptState::kNone;
    ss.hub = ScriptState::kNone;
    ss.path = 0;
    ss.leg = ScriptState::kToHub;
  }

  void head_for(const GameState& st, std::size_t r, Vertex goal, JointRobberMove& mv) const {
    const Vertex pos = *st.robbers[r];
    const auto step = safe_route_step(*b_, st.cop, pos, goal);
    mv.dest[r] = cautious_step(*b_, st.cop, pos, step.value_or(pos));
  }

  // One rotation step; returns true if the robber is halted this round.
  bool rotate(const GameState& st, const GreatCycle& c, std::size_t r, std::int64_t dir, JointRobberMove& mv) const {
    const Vertex pos = *st.robbers[r];
    const auto idx = c.index_of(pos);
    if (idx == kUnreachable) {
      const Vertex hub = b_->dist(pos, lm().v1) <= b_->dist(pos, lm().v2) ? lm().v1 : lm().v2;
      head_for(st, r, hub, mv);
      return true;
    }
    const Vertex next = c.at(static_cast<std::ptrdiff_t>(idx) + dir);
    if (b_->safe(st.cop, next)) {
      mv.dest[r] = next;
      return false;
    }
    mv.dest[r] = cautious_step(*b_, st.cop, pos, pos, [&](Vertex v) { return c.contains(v); });
    return true;
  }

  // Path sequence starting at `hub`.
  std::vector<Vertex> path_from(std::size_t i, Vertex hub) const {
    auto seq = lm().paths.at(i);
    if (hub != seq.front()) std::reverse(seq.begin(), seq.end());
    return seq;
  }

  // Stage-4 helper robber; returns false once every path has been walked.
  bool stage4_helper(const GameState& st, ScriptState& ss, JointRobberMove& mv) const {
    const auto r = static_cast<std::size_t>(ss.r3);
    const Vertex pos = *st.robbers[r];
    const auto hub = static_cast<Vertex>(ss.hub);
    for (int guard = 0; guard < 64; ++guard) {
      if (static_cast<std::size_t>(ss.path) >= lm().path_count()) return false;
      if (ss.leg == ScriptState::kToHub || ss.leg == ScriptState::kReturn) {
        if (pos == hub) {
          if (ss.leg == ScriptState::kReturn) ++ss.path;
          ss.leg = ScriptState::kDown;
          continue;
        }
        head_for(st, r, hub, mv);
        return true;
      }
      const auto seq = path_from(static_cast<std::size_t>(ss.path), hub);
      if (pos == hub && std::all_of(seq.begin() + 1, seq.end() - 1,
                                    [&](Vertex v) { return st.damaged.contains(v) || !b_->safe(st.cop, v); })) {
        // Nothing on this path can be damaged cautiously right now.
        ++ss.path;
        continue;
      }
      const auto it = std::find(seq.begin(), seq.end(), pos);
      if (it == seq.end() || it + 1 == seq.end()) {
        ss.leg = ScriptState::kReturn;
        continue;
      }
      const Vertex next = *(it + 1);
      if (b_->safe(st.cop, next)) {
        mv.dest[r] = next;
        return true;
      }
      ss.leg = ScriptState::kReturn;
    }
    return true;
  }

  // Finishing phase ---------------------------------------------------------------

  void enter_finish(const GameState& st, ScriptState& ss) const {
    ss.phase = ScriptState::kFinish;
    ss.phase_a_round = static_cast<std::int64_t>(st.round);
    const auto u = undamaged(b_->graph, st);
    auto covers = [&](Vertex x) {
      for (Vertex v : u.to_vector())
        if (!b_->graph.in_closed_neighborhood(x, v)) return false;
      return true;
    };
    std::optional<Vertex> center;
    for (Vertex x : {lm().v1, lm().v2})
      if (!center && covers(x)) center = x;
    for (Vertex x = 0; x < b_->graph.vertex_count() && !center; ++x)
      if (covers(x)) center = x;
    ss.neighborhood_ok = center ? 1 : 0;
    if (!center) {
      // Best effort: the vertex whose closed neighbourhood holds most undamaged vertices.
      std::size_t best = 0;
      for (Vertex x = 0; x < b_->graph.vertex_count(); ++x) {
        std::size_t cnt = 0;
        for (Vertex v : u.to_vector()) cnt += b_->graph.in_closed_neighborhood(x, v) ? 1 : 0;
        if (!center || cnt > best) {
          best = cnt;
          center = x;
        }
      }
    }
    ss.center = *center;
    ss.mode = start_mode(*center);
    std::fill(ss.assigned.begin(), ss.assigned.end(), ScriptState::kNone);
    std::fill(ss.rleg.begin(), ss.rleg.end(), ScriptState::kHome);
  }

  bool finish_turn(const GameState& st, ScriptState& ss, JointRobberMove& mv) const {
    const auto u = undamaged(b_->graph, st);
    const auto live = live_ids(st);
    if (u.size() <= 2 || live.empty()) {
      ss.phase = ScriptState::kDone;
      return true;
    }
    const auto damage = static_cast<std::int64_t>(st.damaged.size());
    if (damage != ss.last_damage) {
      ss.last_damage = damage;
      ss.stall = 0;
    }
    const auto x = static_cast<Vertex>(ss.center);
    if (ss.mode == ScriptState::kConverge) return converge(st, ss, mv);

    const Vertex far = x == lm().v1 ? lm().v2 : lm().v1;
    // Intermission: a robber within distance two of a cop outside N[x].
    if (ss.mode != ScriptState::kIntermission && !b_->graph.in_closed_neighborhood(x, st.cop)) {
      for (auto r : live) {
        if (b_->dist(*st.robbers[r], st.cop) <= 2) {
          ss.mode = ScriptState::kIntermission;
          ++ss.intermissions;
          break;
        }
      }
    }
    if (ss.mode == ScriptState::kIntermission) {
      if (st.cop == x) {
        ss.mode = ScriptState::kGather;
        std::fill(ss.assigned.begin(), ss.assigned.end(), ScriptState::kNone);
        std::fill(ss.rleg.begin(), ss.rleg.end(), ScriptState::kHome);
      } else {
        intermission(st, x, mv);
        return true;
      }
    }

    if (ss.mode == ScriptState::kGather) {
      if (cfg_.pair_attack && (live.size() <= 3 || u.size() <= 3)) {
        enter_converge(ss);
        return false;
      }
      const bool gathered = std::all_of(live.begin(), live.end(), [&](auto r) { return *st.robbers[r] == far; });
      if (!gathered) {
        for (auto r : live)
          if (*st.robbers[r] != far) head_for(st, r, far, mv);
        return true;
      }
      if (!assign_targets(st, ss, x)) {
        if (cfg_.single_attack) {
          ss.no_targets = 1;
          ss.phase = ScriptState::kDone;
          return true;
        }
        enter_converge(ss);
        return false;
      }
      ss.mode = ScriptState::kMarch;
    }

    // March.
    bool all_home = true;
    for (auto r : live) {
      const Vertex pos = *st.robbers[r];
      auto& leg = ss.rleg[r];
      const auto a = ss.assigned[r];
      if (a == ScriptState::kNone || leg == ScriptState::kHome) {
        if (pos != far) {
          head_for(st, r, far, mv);
          all_home = false;
        }
        continue;
      }
      all_home = false;
      const auto [first, second] = targets_of(st, a);
      if (leg == ScriptState::kOut) {
        const auto seq = path_from(first, far);
        const Vertex target = seq[seq.size() - 2];
        if (pos == target) {
          leg = second ? ScriptState::kPartner : ScriptState::kBack;
        } else {
          const auto it = std::find(seq.begin(), seq.end(), pos);
          const Vertex next = it == seq.end() ? route_step(*b_, pos, target) : *(it + 1);
          mv.dest[r] = next == st.cop ? pos : next;
          continue;
        }
      }
      if (leg == ScriptState::kPartner) {
        const Vertex partner = path_from(*second, far)[kPathInterior];
        if (pos != partner) {
          mv.dest[r] = partner == st.cop ? pos : partner;
          if (b_->graph.adjacent(pos, partner)) {
            if (partner != st.cop) leg = ScriptState::kBack;
            continue;
          }
          mv.dest[r] = route_step(*b_, pos, partner);
          continue;
        }
        leg = ScriptState::kBack;
      }
      if (leg == ScriptState::kBack) {
        if (pos == far) {
          leg = ScriptState::kHome;
          continue;
        }
        head_for(st, r, far, mv);
      }
    }
    if (all_home) {
      ++ss.attacks;
      ss.mode = ScriptState::kGather;
      std::fill(ss.assigned.begin(), ss.assigned.end(), ScriptState::kNone);
      std::fill(ss.rleg.begin(), ss.rleg.end(), ScriptState::kHome);
      if (cfg_.single_attack) {
        ss.phase = ScriptState::kDone;
        return true;
      }
      return false;
    }
    return true;
  }

  // Path indices of an assignment: (first path, optional partner path).
  std::pair<std::size_t, std::optional<std::size_t>> targets_of(const GameState& st, std::int64_t a) const {
    (void)st;
    if (!cfg_.pair_attack) return {static_cast<std::size_t>(a), std::nullopt};
    // Pair assignments are 2p (walk path 2p first) or 2p+1 (walk path 2p+1 first).
    const auto first = static_cast<std::size_t>(a);
    return {first, first ^ 1u};
  }

  Vertex target_vertex(std::size_t path, Vertex x) const {
    const auto& seq = lm().paths.at(path);
    return x == seq.back() ? seq[seq.size() - 2] : seq[1];
  }

  bool assign_targets(const GameState& st, ScriptState& ss, Vertex x) const {
    const auto live = live_ids(st);
    std::fill(ss.assigned.begin(), ss.assigned.end(), ScriptState::kNone);
    std::fill(ss.rleg.begin(), ss.rleg.end(), ScriptState::kHome);
    std::vector<std::int64_t> options;
    if (!cfg_.pair_attack) {
      for (std::size_t i = 0; i < lm().path_count(); ++i)
        if (!st.damaged.contains(target_vertex(i, x)) && target_vertex(i, x) != st.cop)
          options.push_back(static_cast<std::int64_t>(i));
    } else {
      // Pairs with both ends undamaged first, then pairs with one.
      for (int want = 2; want >= 1; --want) {
        for (std::size_t p = 0; 2 * p + 1 < lm().path_count(); ++p) {
          const int undamaged_ends = (st.damaged.contains(target_vertex(2 * p, x)) ? 0 : 1) +
                                     (st.damaged.contains(target_vertex(2 * p + 1, x)) ? 0 : 1);
          if (undamaged_ends == want) options.push_back(static_cast<std::int64_t>(p));
        }
      }
    }
    std::size_t k = 0;
    for (auto r : live) {
      if (k == options.size()) break;
      auto a = options[k++];
      if (cfg_.pair_attack) {
        // Go down an undamaged end first.
        a *= 2;
        if (st.damaged.contains(target_vertex(static_cast<std::size_t>(a), x))) a += 1;
      }
      ss.assigned[r] = a;
      ss.rleg[r] = ScriptState::kOut;
    }
    return k > 0;
  }

  // Cautious walk towards distinct undamaged vertices of N(x) along routes that avoid
  // N[cop] and each other.
  void intermission(const GameState& st, Vertex x, JointRobberMove& mv) const {
    const auto& g = b_->graph;
    VertexSet open(g.vertex_count());
    for (Vertex y : g.neighbors(x))
      if (!st.damaged.contains(y)) open.insert(y);
    VertexSet forbidden(g.vertex_count());
    for (Vertex y : g.closed_neighborhood(st.cop)) forbidden.insert(y);
    for (auto r : live_ids(st)) {
      const Vertex pos = *st.robbers[r];
      auto route = open.empty() ? std::nullopt : route_to_any(g, pos, open, forbidden);
      if (!route) {
        mv.dest[r] = idle(st, pos);
        continue;
      }
      if (open.size() > 1) open.erase(route->back());
      for (Vertex y : *route)
        if (y != pos) forbidden.insert(y);
      mv.dest[r] = route->size() == 1 ? idle(st, pos) : (*route)[1];
    }
  }

  void enter_converge(ScriptState& ss) const {
    ss.mode = ScriptState::kConverge;
    std::fill(ss.assigned.begin(), ss.assigned.end(), ScriptState::kNone);
    std::fill(ss.rleg.begin(), ss.rleg.end(), ScriptState::kHome);
  }

  // Rounds without new damage after which a lone robber next to a target dashes.
  static constexpr std::int64_t kStallLimit = 12;

  // Each team robber keeps an undamaged target (its `assigned` entry holds the vertex)
  // and cautiously approaches a vertex next to it, routes avoiding N[cop] and each
  // other. Robbers standing next to distinct undamaged targets other than the cop's
  // vertex step onto them together once there are two of them (a lone robber only
  // after a stall); the cop can stop at most one.
  bool converge(const GameState& st, ScriptState& ss, JointRobberMove& mv) const {
    const auto& g = b_->graph;
    const auto u = undamaged(g, st);
    auto team = live_ids(st);
    if (team.size() > cfg_.dash_team) team.resize(cfg_.dash_team);
    ++ss.stall;

    // Dash check over every live robber.
    std::vector<std::pair<std::size_t, Vertex>> dash;
    VertexSet used(g.vertex_count());
    for (auto r : live_ids(st)) {
      const Vertex pos = *st.robbers[r];
      if (!b_->safe(st.cop, pos) && pos != st.cop) continue;
      std::optional<Vertex> pick;
      const auto a = ss.assigned[r];
      if (a != ScriptState::kNone && g.adjacent(pos, static_cast<Vertex>(a)) && u.contains(static_cast<Vertex>(a)) &&
          static_cast<Vertex>(a) != st.cop && !used.contains(static_cast<Vertex>(a)))
        pick = static_cast<Vertex>(a);
      for (Vertex y : g.neighbors(pos))
        if (!pick && u.contains(y) && y != st.cop && !used.contains(y)) pick = y;
      if (!pick) continue;
      used.insert(*pick);
      dash.emplace_back(r, *pick);
    }
    if (dash.size() >= 2 || (dash.size() == 1 && ss.stall > kStallLimit)) {
      for (const auto& [r, t] : dash) mv.dest[r] = t;
      ss.stall = 0;
      return true;
    }

    // Keep or pick targets.
    VertexSet claimed(g.vertex_count());
    for (auto r : team) {
      const auto a = ss.assigned[r];
      if (a != ScriptState::kNone && u.contains(static_cast<Vertex>(a)) && !claimed.contains(static_cast<Vertex>(a)))
        claimed.insert(static_cast<Vertex>(a));
      else
        ss.assigned[r] = ScriptState::kNone;
    }
    for (auto r : team) {
      if (ss.assigned[r] != ScriptState::kNone) continue;
      for (Vertex v : u.to_vector()) {
        if (claimed.contains(v)) continue;
        ss.assigned[r] = v;
        claimed.insert(v);
        break;
      }
    }

    VertexSet forbidden(g.vertex_count());
    for (Vertex y : g.closed_neighborhood(st.cop)) forbidden.insert(y);
    for (auto r : team) {
      const auto a = ss.assigned[r];
      if (a == ScriptState::kNone) continue;
      const auto t = static_cast<Vertex>(a);
      const Vertex pos = *st.robbers[r];
      if (g.adjacent(pos, t) && b_->safe(st.cop, pos)) continue;  // staged; wait
      VertexSet staging(g.vertex_count());
      for (Vertex y : g.neighbors(t))
        if (!u.contains(y)) staging.insert(y);
      if (staging.empty())
        for (Vertex y : g.neighbors(t)) staging.insert(y);
      const auto route = route_to_any(g, pos, staging, forbidden);
      if (!route) {
        ++ss.route_failures;
        continue;
      }
      for (Vertex y : *route)
        if (y != pos) forbidden.insert(y);
      mv.dest[r] = route->size() == 1 ? pos : (*route)[1];
    }
    return true;
  }

  BoardPtr b_;
  ScriptConfig cfg_;
};

// Factories -------------------------------------------------------------------------

inline std::shared_ptr<RobberScript> make_cycle_attack(BoardPtr b, std::size_t i, std::size_t j) {
  if (!b->landmarks) throw GraphError(GraphErrc::MissingLandmarks, "cycle attack needs a gprime or g instance");
  const auto& lm = *b->landmarks;
  if (i >= lm.path_count() || j >= lm.path_count() || !lm.great_pair(i, j)) {
    throw std::invalid_argument("paths " + std::to_string(i) + " and " + std::to_string(j) +
                                " do not form a great cycle");
  }
  ScriptConfig cfg;
  cfg.name = "cycleattack:" + std::to_string(i) + "-" + std::to_string(j);
  cfg.cycles = {make_great_cycle(lm, std::min(i, j), std::max(i, j))};
  cfg.finish = false;
  return std::make_shared<RobberScript>(std::move(b), std::move(cfg));
}

inline std::shared_ptr<RobberScript> make_lower_bound_script(BoardPtr b) {
  if (!b->landmarks) throw GraphError(GraphErrc::MissingLandmarks, "lower-bound scripts need a gprime or g instance");
  const bool pairs = b->landmarks->spec.family == Family::G;
  ScriptConfig cfg;
  cfg.name = pairs ? "script:g" : "script:gprime";
  cfg.cycles = great_cycles({b->graph, b->landmarks});
  cfg.pair_attack = pairs;
  cfg.dash_team = pairs ? 3 : 2;
  return std::make_shared<RobberScript>(std::move(b), std::move(cfg));
}

// A single all-out attack on N(center) from the opposite hub.
inline std::shared_ptr<RobberScript> make_all_out_attack(BoardPtr b, Vertex center, bool pairs) {
  if (!b->landmarks) throw GraphError(GraphErrc::MissingLandmarks, "all-out attacks need a gprime or g instance");
  if (center != b->landmarks->v1 && center != b->landmarks->v2)
    throw std::invalid_argument("all-out attacks target a hub neighbourhood");
  ScriptConfig cfg;
  cfg.name = pairs ? "allout2:" + std::to_string(center) : "allout:" + std::to_string(center);
  cfg.pair_attack = pairs;
  cfg.fixed_center = center;
  cfg.single_attack = true;
  cfg.dash_team = pairs ? 3 : 2;
  return std::make_shared<RobberScript>(std::move(b), std::move(cfg));
}

}  // namespace dmg
