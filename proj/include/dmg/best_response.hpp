#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dmg/arena.hpp"
#include "dmg/game.hpp"
#include "dmg/policy.hpp"
#include "dmg/solver.hpp"

namespace dmg {

struct RobberBestResponse {
  std::size_t value = 0;       // maximum damage the robbers can force
  Transcript witness;          // a match reaching that damage
  std::size_t explored_states = 0;
  VertexSet ever_damaged;      // union of the damaged sets of all reachable states
};

namespace detail {

// Robbers sorted by position (caught ones last) together with the permutation used:
// canonical slot j holds original robber order[j].
inline std::pair<GameState, std::vector<std::size_t>> canonical_robbers(const GameState& st) {
  std::vector<std::size_t> order(st.robbers.size());
  std::iota(order.begin(), order.end(), 0);
  auto rank = [&](std::size_t i) {
    return st.robbers[i] ? static_cast<std::uint64_t>(*st.robbers[i]) : std::numeric_limits<std::uint64_t>::max();
  };
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return rank(a) < rank(b); });
  GameState c = st;
  for (std::size_t j = 0; j < order.size(); ++j) c.robbers[j] = st.robbers[order[j]];
  c.round = 0;
  return {c, order};
}

inline std::string product_key(const GameState& st, const PolicyMemory& mem) {
  std::string k;
  k.reserve(16 + 4 * st.robbers.size() + 8 * (st.damaged.words().size() + mem.words.size()));
  auto put = [&k](std::uint64_t x) { k.append(reinterpret_cast<const char*>(&x), sizeof x); };
  put(st.cop);
  put(static_cast<std::uint64_t>(st.phase));
  for (const auto& r : st.robbers) put(r ? *r : std::numeric_limits<std::uint64_t>::max());
  for (auto w : st.damaged.words()) put(w);
  put(mem.words.size());
  for (auto w : mem.words) put(static_cast<std::uint64_t>(w));
  return k;
}

class Deadline {
 public:
  explicit Deadline(const SolveLimits& l) : limits_(l), start_(std::chrono::steady_clock::now()) {}
  void check(std::size_t states, const char* what) const {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    if (states > limits_.max_states || secs > limits_.max_seconds) {
      SolveStats s;
      s.explored_states = states;
      s.peak_memo_entries = states;
      throw LimitExceeded(std::string(what) + " exceeded its resource limit", s);
    }
  }

 private:
  SolveLimits limits_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

// Exact best response of the robber team against a fixed deterministic cop policy. The
// cop is deterministic, so every play is a path the robbers choose through the product of
// game states and cop memories; damage never shrinks, hence the value is the largest
// damaged set over all reachable product states. Robbers are canonicalised by position,
// which assumes the cop policy does not look at robber labels (true of all built-in
// policies).
inline RobberBestResponse best_response_robbers(const BoardPtr& b, std::size_t s, const CopPolicy& cop,
                                                SolveLimits limits = {}, std::uint64_t seed = 0) {
  const Graph& g = b->graph;
  detail::Deadline deadline(limits);
  struct Node {
    GameState state;  // canonical, CopToMove
    PolicyMemory mem;
    std::size_t parent;
    JointRobberMove move;  // canonical labels of the parent
  };
  constexpr auto kRoot = std::numeric_limits<std::size_t>::max();
  std::vector<Node> nodes;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::size_t> todo;

  PolicyMemory mem0 = cop.initial_memory(seed);
  GameState st0 = initial_state(g, s);
  const Vertex c0 = cop.place(st0, mem0);
  st0 = place_cop(g, st0, c0);

  std::vector<std::vector<Vertex>> placements;
  std::vector<Vertex> at(s, 0);
  auto rec = [&](auto&& self, std::size_t i, Vertex lo) -> void {
    if (i == s) {
      placements.push_back(at);
      return;
    }
    for (Vertex v = lo; v < g.vertex_count(); ++v) {
      at[i] = v;
      self(self, i + 1, v);
    }
  };
  rec(rec, 0, 0);

  auto intern = [&](const GameState& st, const PolicyMemory& mem, std::size_t parent, JointRobberMove mv) {
    auto key = detail::product_key(st, mem);
    auto [it, fresh] = index.emplace(std::move(key), nodes.size());
    if (fresh) {
      nodes.push_back({st, mem, parent, std::move(mv)});
      todo.push_back(it->second);
      if ((nodes.size() & 1023u) == 0) deadline.check(nodes.size(), "robber best response");
    }
    return it->second;
  };

  // Root layer: one node per placement; `move` stores the placement in dest.
  std::vector<std::size_t> roots;
  for (const auto& p : placements) {
    GameState st = detail::canonical_robbers(place_robbers(g, st0, p)).first;
    JointRobberMove as_move;
    for (Vertex v : p) as_move.dest.emplace_back(v);
    roots.push_back(intern(st, mem0, kRoot, std::move(as_move)));
  }

  while (!todo.empty()) {
    const auto i = todo.back();
    todo.pop_back();
    if (nodes[i].state.live_count() == 0) continue;
    PolicyMemory mem = nodes[i].mem;
    const GameState cur = nodes[i].state;
    const Vertex dest = cop.move(cur, mem);
    const GameState after = apply_cop_move(g, cur, dest);
    if (after.live_count() == 0) {
      intern(detail::canonical_robbers(after).first, mem, i, JointRobberMove{after.robbers});
      continue;
    }
    for (const auto& mv : legal_joint_robber_moves(g, after)) {
      const GameState next = apply_robber_move(g, after, mv);
      intern(detail::canonical_robbers(next).first, mem, i, mv);
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (nodes[i].state.damaged.size() > nodes[best].state.damaged.size()) best = i;
  // Damage of a node whose last step was the cop's final capture is recorded after the cop move.
  RobberBestResponse out;
  out.value = nodes[best].state.damaged.size();
  out.explored_states = nodes.size();
  out.ever_damaged = VertexSet(g.vertex_count());
  for (const auto& nd : nodes)
    for (Vertex v : nd.state.damaged.to_vector()) out.ever_damaged.insert(v);

  // Rebuild labelled moves along the path to `best`.
  std::vector<std::size_t> path;
  for (auto i = best; i != kRoot; i = nodes[i].parent) path.push_back(i);
  std::reverse(path.begin(), path.end());
  std::vector<Vertex> placement;
  for (const auto& d : nodes[path.front()].move.dest) placement.push_back(*d);
  std::vector<JointRobberMove> moves;
  {
    // perm[j] = actual robber id sitting in canonical slot j
    GameState actual = place_robbers(g, st0, placement);
    auto [canon, perm] = detail::canonical_robbers(actual);
    PolicyMemory mem = mem0;
    for (std::size_t k = 1; k < path.size(); ++k) {
      const auto& node = nodes[path[k]];
      const Vertex dest = cop.move(canon, mem);
      const GameState after = apply_cop_move(g, canon, dest);
      if (after.live_count() == 0) break;
      JointRobberMove labelled{std::vector<RobberStatus>(s)};
      for (std::size_t j = 0; j < s; ++j) labelled.dest[perm[j]] = node.move.dest[j];
      moves.push_back(labelled);
      const GameState next = apply_robber_move(g, after, node.move);
      auto [c2, order] = detail::canonical_robbers(next);
      std::vector<std::size_t> perm2(s);
      for (std::size_t j = 0; j < s; ++j) perm2[j] = perm[order[j]];
      canon = c2;
      perm = perm2;
    }
  }
  ScriptedRobbers witness(placement, moves);
  const std::size_t rounds = std::max<std::size_t>(moves.size() + 1, 1);
  out.witness = run_match(*b, s, cop, witness, rounds, seed);
  out.witness.robber_spec = "best-response";
  return out;
}

struct CopBestResponse {
  std::size_t value = 0;
  bool horizon_capped = false;  // some line was cut off by the horizon
  std::size_t explored_states = 0;
};

// Minimum damage the cop can force within `horizon` rounds against a fixed deterministic
// robber team, including the choice of the cop's start vertex.
inline CopBestResponse best_response_cop(const BoardPtr& b, std::size_t s, const RobberTeamPolicy& robbers,
                                         std::size_t horizon, SolveLimits limits = {}, std::uint64_t seed = 0) {
  const Graph& g = b->graph;
  detail::Deadline deadline(limits);
  std::unordered_map<std::string, std::pair<std::size_t, bool>> memo;
  CopBestResponse out;

  auto search = [&](auto&& self, const GameState& st, const PolicyMemory& rm,
                    std::size_t left) -> std::pair<std::size_t, bool> {
    if (st.live_count() == 0) return {st.damaged.size(), false};
    if (left == 0) return {st.damaged.size(), true};
    std::string key = detail::product_key(st, rm);
    key.append(reinterpret_cast<const char*>(&left), sizeof left);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::pair<std::size_t, bool> best{std::numeric_limits<std::size_t>::max(), false};
    for (Vertex c : g.closed_neighborhood(st.cop)) {
      const GameState after = apply_cop_move(g, st, c);
      std::pair<std::size_t, bool> v;
      if (after.live_count() == 0 || robbers.finished(after, rm)) {
        v = {after.damaged.size(), false};
      } else {
        PolicyMemory m = rm;
        const auto mv = robbers.move(after, m);
        v = self(self, apply_robber_move(g, after, mv), m, left - 1);
      }
      if (v.first < best.first || (v.first == best.first && !v.second && best.second)) best = v;
    }
    memo.emplace(std::move(key), best);
    if ((memo.size() & 1023u) == 0) deadline.check(memo.size(), "cop best response");
    return best;
  };

  std::pair<std::size_t, bool> best{std::numeric_limits<std::size_t>::max(), false};
  for (Vertex c = 0; c < g.vertex_count(); ++c) {
    PolicyMemory rm = robbers.initial_memory(seed);
    GameState st = place_cop(g, initial_state(g, s), c);
    const auto at = robbers.place(st, rm);
    st = place_robbers(g, st, at);
    const auto v = search(search, st, rm, horizon);
    if (v.first < best.first || (v.first == best.first && !v.second && best.second)) best = v;
  }
  out.value = best.first;
  out.horizon_capped = best.second;
  out.explored_states = memo.size();
  return out;
}

}  // namespace dmg
