#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "dmg/families.hpp"
#include "dmg/game.hpp"
#include "dmg/graph.hpp"
#include "dmg/solver.hpp"

namespace dmg {

// Explicit, serialisable policy memory. Policies are const decision functions over
// (state, memory); everything they remember lives here.
struct PolicyMemory {
  std::vector<std::int64_t> words;
  friend bool operator==(const PolicyMemory&, const PolicyMemory&) = default;
};

class CopPolicy {
 public:
  virtual ~CopPolicy() = default;
  virtual std::string spec() const = 0;
  virtual PolicyMemory initial_memory(std::uint64_t /*seed*/) const { return {}; }
  virtual Vertex place(const GameState& st, PolicyMemory& mem) const = 0;
  virtual Vertex move(const GameState& st, PolicyMemory& mem) const = 0;
  virtual std::vector<std::string> flags(const PolicyMemory& /*mem*/) const { return {}; }
};

class RobberTeamPolicy {
 public:
  virtual ~RobberTeamPolicy() = default;
  virtual std::string spec() const = 0;
  virtual PolicyMemory initial_memory(std::uint64_t /*seed*/) const { return {}; }
  virtual std::vector<Vertex> place(const GameState& st, PolicyMemory& mem) const = 0;
  virtual JointRobberMove move(const GameState& st, PolicyMemory& mem) const = 0;
  // Scripts that have run their course report completion; the arena stops there.
  virtual bool finished(const GameState& /*st*/, const PolicyMemory& /*mem*/) const { return false; }
  virtual std::vector<std::string> flags(const PolicyMemory& /*mem*/) const { return {}; }
};

// Shared read-only context for policies on one graph.
struct Board {
  Graph graph;
  std::optional<Landmarks> landmarks;
  DistanceTable dist;

  explicit Board(LandmarkedGraph lg)
      : graph(std::move(lg.graph)), landmarks(std::move(lg.landmarks)), dist(graph) {}

  bool safe(Vertex cop, Vertex x) const { return !graph.in_closed_neighborhood(cop, x); }
};

using BoardPtr = std::shared_ptr<const Board>;

inline BoardPtr make_board(LandmarkedGraph lg) { return std::make_shared<const Board>(std::move(lg)); }

// One step of a cautious robber at `pos` that would like to go to `intended`
// (a vertex of N[pos]). Safety means lying outside N[cop], with the cop's move of the
// current round already made. Order of preference: the intended vertex; the safe
// neighbour farthest from the cop (lowest id on ties); staying; and when capture is
// unavoidable, the move farthest from the cop. `allowed`, when given, restricts the
// neighbours considered in the second step (e.g. to stay on a cycle).
inline Vertex cautious_step(const Board& b, Vertex cop, Vertex pos, Vertex intended,
                            const std::function<bool(Vertex)>& allowed = {}) {
  const bool intended_ok = !allowed || allowed(intended) || intended == pos;
  if (intended_ok && b.safe(cop, intended)) return intended;
  Vertex best = kNoVertex;
  for (Vertex y : b.graph.neighbors(pos)) {
    if (!b.safe(cop, y) || (allowed && !allowed(y))) continue;
    if (best == kNoVertex || b.dist(cop, y) > b.dist(cop, best)) best = y;
  }
  if (best != kNoVertex) return best;
  if (b.safe(cop, pos)) return pos;
  best = pos;
  for (Vertex y : b.graph.neighbors(pos))
    if (b.dist(cop, y) > b.dist(cop, best)) best = y;
  return best;
}

// Next vertex on a shortest route from `from` to `to` that avoids N[cop], or nullopt.
inline std::optional<Vertex> safe_route_step(const Board& b, Vertex cop, Vertex from, Vertex to) {
  if (from == to) return from;
  VertexSet forbidden(b.graph.vertex_count());
  for (Vertex x : b.graph.closed_neighborhood(cop))
    if (x != from) forbidden.insert(x);
  auto path = shortest_path(b.graph, from, to, forbidden);
  if (!path) return std::nullopt;
  return (*path)[1];
}

// Plain shortest-route step ignoring the cop; lowest id on ties.
inline Vertex route_step(const Board& b, Vertex from, Vertex to) {
  if (from == to) return from;
  for (Vertex y : b.graph.neighbors(from))
    if (b.dist(y, to) + 1 == b.dist(from, to)) return y;
  return from;
}

// Cop policies ------------------------------------------------------------------

// guard(v): wait on v; when a robber stands in N(v) step onto the lowest such vertex,
// then go straight back to v even if another robber is adjacent.
class GuardCop : public CopPolicy {
 public:
  GuardCop(BoardPtr b, Vertex home) : b_(std::move(b)), home_(home) { b_->graph.check(home); }
  std::string spec() const override { return "guard:" + std::to_string(home_); }
  PolicyMemory initial_memory(std::uint64_t) const override { return {{kWaiting}}; }
  Vertex place(const GameState&, PolicyMemory& mem) const override {
    mem.words = {kWaiting};
    return home_;
  }
  Vertex move(const GameState& st, PolicyMemory& mem) const override {
    auto& mode = mem.words.at(0);
    if (st.cop != home_) {
      mode = kWaiting;
      return route_step(*b_, st.cop, home_);
    }
    mode = kWaiting;
    Vertex target = kNoVertex;
    for (const auto& r : st.robbers)
      if (r && b_->graph.adjacent(home_, *r)) target = std::min(target, *r);
    if (target == kNoVertex) return home_;
    mode = kReturning;
    return target;
  }
  Vertex home() const noexcept { return home_; }

  static constexpr std::int64_t kWaiting = 0;
  static constexpr std::int64_t kReturning = 1;

 private:
  BoardPtr b_;
  Vertex home_;
};

// Walks back and forth along a fixed edge.
class PatrolCop : public CopPolicy {
 public:
  PatrolCop(BoardPtr b, Vertex a, Vertex c) : b_(std::move(b)), a_(a), c_(c) {
    if (!b_->graph.adjacent(a, c)) throw std::invalid_argument("patrol needs an edge");
  }
  std::string spec() const override { return "patrol:" + std::to_string(a_) + "-" + std::to_string(c_); }
  Vertex place(const GameState&, PolicyMemory&) const override { return a_; }
  Vertex move(const GameState& st, PolicyMemory&) const override {
    if (st.cop == a_) return c_;
    if (st.cop == c_) return a_;
    return route_step(*b_, st.cop, a_);
  }

 private:
  BoardPtr b_;
  Vertex a_, c_;
};

// Steps towards the nearest live robber (onto it when adjacent); lowest id on ties.
class GreedyCop : public CopPolicy {
 public:
  explicit GreedyCop(BoardPtr b) : b_(std::move(b)) {}
  std::string spec() const override { return "greedy"; }
  Vertex place(const GameState&, PolicyMemory&) const override {
    const auto ecc = eccentricities(b_->graph);
    return static_cast<Vertex>(std::min_element(ecc.begin(), ecc.end()) - ecc.begin());
  }
  Vertex move(const GameState& st, PolicyMemory&) const override {
    const auto live = st.live_positions();
    if (live.empty()) return st.cop;
    Vertex best = st.cop;
    std::size_t best_d = kUnreachable;
    for (Vertex c : b_->graph.closed_neighborhood(st.cop)) {
      std::size_t d = kUnreachable;
      for (Vertex r : live) d = std::min(d, b_->dist(c, r));
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    return best;
  }

 private:
  BoardPtr b_;
};

class StationaryCop : public CopPolicy {
 public:
  StationaryCop(BoardPtr b, Vertex v) : v_(v) { b->graph.check(v); }
  std::string spec() const override { return "stationary:" + std::to_string(v_); }
  Vertex place(const GameState&, PolicyMemory&) const override { return v_; }
  Vertex move(const GameState& st, PolicyMemory&) const override { return st.cop; }

 private:
  Vertex v_;
};

// Uniform step in N[cop]. Memory holds (seed, step counter) so repeated positions are
// never mistaken for a deterministic cycle.
class RandomWalkCop : public CopPolicy {
 public:
  RandomWalkCop(BoardPtr b, std::uint64_t seed) : b_(std::move(b)), seed_(seed) {}
  std::string spec() const override { return "random:" + std::to_string(seed_); }
  PolicyMemory initial_memory(std::uint64_t match_seed) const override {
    return {{static_cast<std::int64_t>(seed_ * 0x9e3779b97f4a7c15ULL ^ match_seed), 0}};
  }
  Vertex place(const GameState&, PolicyMemory& mem) const override {
    const auto n = b_->graph.vertex_count();
    return static_cast<Vertex>(draw(mem) % n);
  }
  Vertex move(const GameState& st, PolicyMemory& mem) const override {
    const auto options = b_->graph.closed_neighborhood(st.cop);
    return options[draw(mem) % options.size()];
  }

 private:
  static std::uint64_t draw(PolicyMemory& mem) {
    if (mem.words.size() < 2) mem.words.resize(2, 0);
    std::mt19937_64 rng(static_cast<std::uint64_t>(mem.words[0]) + 0x632be59bd9b4e019ULL *
                                                                       static_cast<std::uint64_t>(mem.words[1]));
    ++mem.words[1];
    return rng();
  }
  BoardPtr b_;
  std::uint64_t seed_;
};

// Optimal play from the exact solver.
class OptimalCop : public CopPolicy {
 public:
  explicit OptimalCop(std::shared_ptr<Solver> solver) : solver_(std::move(solver)) {}
  std::string spec() const override { return "optimal"; }
  Vertex place(const GameState& st, PolicyMemory&) const override {
    GameState root = st;
    root.phase = Phase::CopPlacement;
    return solver_->best_cop_move(root);
  }
  Vertex move(const GameState& st, PolicyMemory&) const override { return solver_->best_cop_move(st); }

 private:
  std::shared_ptr<Solver> solver_;
};

// guard(v) until at most two robbers are live at a cop turn on v, then exact endgame
// play when the solver fits its limits; otherwise guard(v) continues and the run is
// flagged "endgame-unsolved".
class GuardThenEndgameCop : public CopPolicy {
 public:
  GuardThenEndgameCop(BoardPtr b, Vertex home, SolveLimits limits)
      : guard_(b, home), b_(std::move(b)), home_(home), limits_(limits) {}
  std::string spec() const override { return "guard+endgame:" + std::to_string(home_); }
  PolicyMemory initial_memory(std::uint64_t) const override { return {{GuardCop::kWaiting, kGuarding}}; }
  Vertex place(const GameState& st, PolicyMemory& mem) const override {
    mem.words = {GuardCop::kWaiting, kGuarding};
    return guard_.place(st, mem);
  }
  Vertex move(const GameState& st, PolicyMemory& mem) const override {
    if (mem.words.size() < 2) mem.words.resize(2, 0);
    auto& stage = mem.words[1];
    if (stage == kGuarding && st.cop == home_ && mem.words[0] == GuardCop::kWaiting && st.live_count() <= 2) {
      stage = kEndgame;
      try {
        ensure_solver();
        solver_->set_limits(limits_);
        return solver_->best_cop_move(st);
      } catch (const LimitExceeded&) {
        stage = kUnsolved;
      } catch (const std::invalid_argument&) {
        stage = kUnsolved;
      }
    } else if (stage == kEndgame) {
      try {
        return solver_->best_cop_move(st);
      } catch (const LimitExceeded&) {
        stage = kUnsolved;
      }
    }
    PolicyMemory guard_mem{{mem.words[0]}};
    const Vertex v = guard_.move(st, guard_mem);
    mem.words[0] = guard_mem.words[0];
    return v;
  }
  std::vector<std::string> flags(const PolicyMemory& mem) const override {
    if (mem.words.size() >= 2 && mem.words[1] == kUnsolved) return {"endgame-unsolved"};
    if (mem.words.size() >= 2 && mem.words[1] == kEndgame) return {"endgame-solved"};
    return {};
  }

  static constexpr std::int64_t kGuarding = 0;
  static constexpr std::int64_t kEndgame = 1;
  static constexpr std::int64_t kUnsolved = 2;

 private:
  void ensure_solver() const {
    if (!solver_) solver_ = std::make_shared<Solver>(b_->graph, limits_);
  }
  GuardCop guard_;
  BoardPtr b_;
  Vertex home_;
  SolveLimits limits_;
  mutable std::shared_ptr<Solver> solver_;
};

// Simple robber teams -------------------------------------------------------------

// Distinct vertices in decreasing distance from the cop, lowest id on ties; repeats
// cyclically if there are more robbers than vertices.
inline std::vector<Vertex> far_placement(const Board& b, Vertex cop, std::size_t s) {
  std::vector<Vertex> order(b.graph.vertex_count());
  for (Vertex v = 0; v < order.size(); ++v) order[v] = v;
  auto d = [&](Vertex v) { return b.dist(cop, v) == kUnreachable ? b.graph.vertex_count() + 1 : b.dist(cop, v); };
  std::stable_sort(order.begin(), order.end(), [&](Vertex x, Vertex y) { return d(x) > d(y); });
  std::vector<Vertex> out;
  for (std::size_t i = 0; i < s; ++i) out.push_back(order[i % order.size()]);
  return out;
}

class StationaryRobbers : public RobberTeamPolicy {
 public:
  StationaryRobbers(BoardPtr b, std::vector<Vertex> at = {}) : b_(std::move(b)), at_(std::move(at)) {}
  std::string spec() const override { return "stationary"; }
  std::vector<Vertex> place(const GameState& st, PolicyMemory&) const override {
    if (!at_.empty()) return at_;
    return far_placement(*b_, st.cop, st.robber_count);
  }
  JointRobberMove move(const GameState& st, PolicyMemory&) const override { return {st.robbers}; }

 private:
  BoardPtr b_;
  std::vector<Vertex> at_;
};

// Each robber cautiously heads for its own goal vertex.
class CautiousGoalRobbers : public RobberTeamPolicy {
 public:
  CautiousGoalRobbers(BoardPtr b, std::vector<Vertex> goals, std::vector<Vertex> start = {})
      : b_(std::move(b)), goals_(std::move(goals)), start_(std::move(start)) {}
  std::string spec() const override {
    std::string s = "cautious:";
    for (std::size_t i = 0; i < goals_.size(); ++i) s += (i ? "," : "") + std::to_string(goals_[i]);
    return s;
  }
  std::vector<Vertex> place(const GameState& st, PolicyMemory&) const override {
    if (!start_.empty()) return start_;
    return far_placement(*b_, st.cop, st.robber_count);
  }
  JointRobberMove move(const GameState& st, PolicyMemory&) const override {
    JointRobberMove mv{st.robbers};
    for (std::size_t i = 0; i < st.robbers.size(); ++i) {
      if (!st.robbers[i]) continue;
      const Vertex pos = *st.robbers[i];
      const Vertex goal = goals_.empty() ? pos : goals_[i % goals_.size()];
      const auto step = safe_route_step(*b_, st.cop, pos, goal);
      mv.dest[i] = cautious_step(*b_, st.cop, pos, step.value_or(pos));
    }
    return mv;
  }

 private:
  BoardPtr b_;
  std::vector<Vertex> goals_;
  std::vector<Vertex> start_;
};

class OptimalRobbers : public RobberTeamPolicy {
 public:
  explicit OptimalRobbers(std::shared_ptr<Solver> solver) : solver_(std::move(solver)) {}
  std::string spec() const override { return "optimal"; }
  std::vector<Vertex> place(const GameState& st, PolicyMemory&) const override {
    return solver_->best_robber_placement(st);
  }
  JointRobberMove move(const GameState& st, PolicyMemory&) const override { return solver_->best_robber_move(st); }

 private:
  std::shared_ptr<Solver> solver_;
};

// Replays a fixed placement and move list, then stands still.
class ScriptedRobbers : public RobberTeamPolicy {
 public:
  ScriptedRobbers(std::vector<Vertex> placement, std::vector<JointRobberMove> moves)
      : placement_(std::move(placement)), moves_(std::move(moves)) {}
  std::string spec() const override { return "scripted"; }
  PolicyMemory initial_memory(std::uint64_t) const override { return {{0}}; }
  std::vector<Vertex> place(const GameState&, PolicyMemory& mem) const override {
    mem.words = {0};
    return placement_;
  }
  JointRobberMove move(const GameState& st, PolicyMemory& mem) const override {
    if (mem.words.empty()) mem.words = {0};
    auto& i = mem.words[0];
    if (static_cast<std::size_t>(i) < moves_.size()) return moves_[static_cast<std::size_t>(i++)];
    return {st.robbers};
  }
  bool finished(const GameState&, const PolicyMemory& mem) const override {
    return !mem.words.empty() && static_cast<std::size_t>(mem.words[0]) >= moves_.size();
  }

 private:
  std::vector<Vertex> placement_;
  std::vector<JointRobberMove> moves_;
};

}  // namespace dmg
