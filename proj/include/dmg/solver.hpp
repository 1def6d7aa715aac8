#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dmg/game.hpp"
#include "dmg/graph.hpp"

namespace dmg {

struct SolveLimits {
  std::size_t max_states = 200'000'000;
  double max_seconds = 1800.0;
};

struct SolveStats {
  std::size_t explored_states = 0;
  std::size_t class_count = 0;
  std::size_t peak_memo_entries = 0;
};

struct SolveReport {
  std::size_t value = 0;
  Vertex optimal_cop_start = kNoVertex;
  SolveStats stats;
};

class LimitExceeded : public std::runtime_error {
 public:
  LimitExceeded(const std::string& what, SolveStats partial) : std::runtime_error(what), partial_(partial) {}
  const SolveStats& partial() const noexcept { return partial_; }

 private:
  SolveStats partial_;
};

// Exact damage-game solver for graphs with at most 64 vertices.
//
// States are grouped into classes (live robber count, damaged set). Every transition
// either stays inside its class or moves to a class with fewer live robbers or strictly
// more damage, so classes are solved on demand in that well-founded order. Inside a
// class the loopy game is solved by monotone value iteration from |damaged| upwards;
// the least fixpoint gives stalling play the current damage.
//
// Robber positions are kept as sorted multisets (robbers are interchangeable); the
// damaged set is a 64-bit mask.
class Solver {
 public:
  static constexpr std::size_t kMaxVertices = 64;
  static constexpr std::size_t kMaxRobbers = 8;

  explicit Solver(Graph g, SolveLimits limits = {}) : g_(std::move(g)), limits_(limits) {
    if (g_.vertex_count() > kMaxVertices) {
      throw std::invalid_argument("solver supports at most 64 vertices, got " + std::to_string(g_.vertex_count()));
    }
    if (g_.empty()) throw std::invalid_argument("solver needs a nonempty graph");
    n_ = static_cast<Vertex>(g_.vertex_count());
    closed_.resize(n_);
    for (Vertex v = 0; v < n_; ++v) closed_[v] = g_.closed_neighborhood(v);
    for (std::size_t a = 0; a < binom_.size(); ++a) {
      binom_[a][0] = 1;
      for (std::size_t b = 1; b <= a && b < binom_[a].size(); ++b)
        binom_[a][b] = binom_[a - 1][b - 1] + (b < a ? binom_[a - 1][b] : 0);
    }
    start_ = Clock::now();
  }

  const Graph& graph() const noexcept { return g_; }
  const SolveStats& stats() const noexcept { return stats_; }
  void set_limits(SolveLimits limits) {
    limits_ = limits;
    start_ = Clock::now();
  }

  // dmg(G; s) together with the lowest-id optimal cop start.
  SolveReport solve(std::size_t s) {
    check_robbers(s);
    start_ = Clock::now();
    SolveReport rep;
    rep.value = std::numeric_limits<std::size_t>::max();
    for (Vertex c = 0; c < n_; ++c) {
      const auto v = placement_value(c, s);
      if (v < rep.value) {
        rep.value = v;
        rep.optimal_cop_start = c;
      }
    }
    rep.stats = stats_;
    return rep;
  }

  // Game value of an arbitrary state under optimal play from both sides.
  std::size_t value(const GameState& st) {
    switch (st.phase) {
      case Phase::CopPlacement: return solve(st.robber_count).value;
      case Phase::RobberPlacement: return placement_value(st.cop, st.robber_count);
      case Phase::CopToMove: return cop_value(st.cop, st.live_positions(), mask_of(st.damaged));
      case Phase::RobbersToMove: return rob_value(st.cop, st.live_positions(), mask_of(st.damaged));
    }
    return 0;
  }

  // Lowest-id move minimising the value (cop placement or cop turn).
  Vertex best_cop_move(const GameState& st) {
    if (st.phase == Phase::CopPlacement) return solve(st.robber_count).optimal_cop_start;
    detail::require_phase(st, Phase::CopToMove, "best_cop_move");
    const auto live = st.live_positions();
    const auto dmask = mask_of(st.damaged);
    Vertex best = kNoVertex;
    std::size_t best_val = std::numeric_limits<std::size_t>::max();
    for (Vertex c : closed_[st.cop]) {
      Positions rest = without(live, c);
      const auto v = rob_value(c, rest, dmask | positions_mask(rest));
      if (v < best_val) {
        best_val = v;
        best = c;
      }
    }
    return best;
  }

  // Maximising placement, lexicographically least among ties.
  std::vector<Vertex> best_robber_placement(const GameState& st) {
    detail::require_phase(st, Phase::RobberPlacement, "best_robber_placement");
    check_robbers(st.robber_count);
    Positions best;
    std::size_t best_val = 0;
    bool first = true;
    for_each_multiset(n_, st.robber_count, [&](const Positions& p) {
      const auto v = cop_value(st.cop, without(p, st.cop), 0);
      if (first || v > best_val) {
        best_val = v;
        best = p;
        first = false;
      }
    });
    return best;
  }

  // Maximising joint move; among equal values the one whose target reached that value
  // earliest in the fixpoint iteration, so optimal play makes progress.
  JointRobberMove best_robber_move(const GameState& st) {
    const auto moves = legal_joint_robber_moves(g_, st);
    const auto dmask = mask_of(st.damaged);
    const JointRobberMove* best = nullptr;
    std::tuple<std::size_t, std::uint32_t, std::vector<Vertex>> best_key;
    for (const auto& mv : moves) {
      Positions dest;
      for (const auto& d : mv.dest)
        if (d && *d != st.cop) dest.push_back(*d);
      std::sort(dest.begin(), dest.end());
      const auto [val, rank] = cop_value_and_rank(st.cop, dest, dmask, st.live_count());
      std::vector<Vertex> ms;
      for (const auto& d : mv.dest)
        if (d) ms.push_back(*d);
      std::sort(ms.begin(), ms.end());
      auto key = std::make_tuple(val, rank, ms);
      if (!best || val > std::get<0>(best_key) ||
          (val == std::get<0>(best_key) &&
           (rank < std::get<1>(best_key) || (rank == std::get<1>(best_key) && ms < std::get<2>(best_key))))) {
        best = &mv;
        best_key = std::move(key);
      }
    }
    return *best;
  }

 private:
  using Clock = std::chrono::steady_clock;
  using Mask = std::uint64_t;
  using Positions = std::vector<Vertex>;  // sorted live robber positions

  struct ClassTable {
    std::uint32_t multisets = 0;
    std::vector<std::uint8_t> value;  // index ((cop * multisets + ms) * 2 + phase)
    std::vector<std::uint32_t> rank;  // iteration at which the final value was reached
  };
  static constexpr std::size_t kRobPhase = 0;
  static constexpr std::size_t kCopPhase = 1;

  struct KeyHash {
    std::size_t operator()(const std::pair<std::size_t, Mask>& k) const noexcept {
      return std::hash<Mask>{}(k.second * 0x9e3779b97f4a7c15ULL ^ k.first);
    }
  };

  void check_robbers(std::size_t s) const {
    if (s == 0) throw std::invalid_argument("at least one robber is required");
    if (s > kMaxRobbers) throw std::invalid_argument("solver supports at most 8 robbers");
  }

  static Mask mask_of(const VertexSet& vs) { return vs.words().empty() ? 0 : vs.words()[0]; }
  static Mask positions_mask(const Positions& p) {
    Mask m = 0;
    for (Vertex v : p) m |= Mask{1} << v;
    return m;
  }
  static Positions without(const Positions& p, Vertex c) {
    Positions out;
    for (Vertex v : p)
      if (v != c) out.push_back(v);
    return out;
  }

  template <class F>
  static void for_each_multiset(std::size_t d, std::size_t k, F&& f) {
    Positions cur(k, 0);
    auto rec = [&](auto&& self, std::size_t i, Vertex lo) -> void {
      if (i == k) {
        f(cur);
        return;
      }
      for (Vertex v = lo; v < d; ++v) {
        cur[i] = v;
        self(self, i + 1, v);
      }
    };
    rec(rec, 0, 0);
  }

  std::uint64_t multiset_count(std::size_t d, std::size_t k) const { return binom_[d + k - 1][k]; }

  // Rank of a sorted multiset of vertices within the damaged set `dmask`.
  std::uint32_t multiset_rank(const Positions& p, Mask dmask) const {
    std::uint64_t r = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const auto local = static_cast<std::size_t>(std::popcount(dmask & ((Mask{1} << p[i]) - 1)));
      r += binom_[local + i][i + 1];
    }
    return static_cast<std::uint32_t>(r);
  }

  void check_budget() const {
    if (stats_.explored_states > limits_.max_states) {
      throw LimitExceeded("state limit of " + std::to_string(limits_.max_states) + " exceeded", stats_);
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start_).count();
    if (secs > limits_.max_seconds) {
      throw LimitExceeded("time limit of " + std::to_string(limits_.max_seconds) + "s exceeded", stats_);
    }
  }

  std::size_t placement_value(Vertex c, std::size_t s) {
    check_robbers(s);
    std::size_t best = 0;
    for_each_multiset(n_, s, [&](const Positions& p) { best = std::max(best, cop_value(c, without(p, c), 0)); });
    return best;
  }

  const ClassTable& table(std::size_t k, Mask dmask) {
    auto it = memo_.find({k, dmask});
    if (it != memo_.end()) return it->second;
    ClassTable t = solve_class(k, dmask);
    stats_.peak_memo_entries += t.value.size();
    ++stats_.class_count;
    return memo_.emplace(std::pair{k, dmask}, std::move(t)).first->second;
  }

  std::size_t index(const ClassTable& t, Vertex cop, const Positions& p, Mask dmask, std::size_t phase) const {
    return (static_cast<std::size_t>(cop) * t.multisets + multiset_rank(p, dmask)) * 2 + phase;
  }

  // Robbers to move; all live positions lie in dmask.
  std::size_t rob_value(Vertex c, const Positions& p, Mask dmask) {
    if (p.empty()) return static_cast<std::size_t>(std::popcount(dmask));
    const auto& t = table(p.size(), dmask);
    return t.value[index(t, c, p, dmask, kRobPhase)];
  }

  std::size_t cop_value(Vertex c, const Positions& p, Mask dmask) {
    return cop_value_and_rank(c, p, dmask, p.size()).first;
  }

  // Cop to move with robbers at p (none on c). Rank is 0 unless the state belongs to
  // the in-class table of (live_before, dmask).
  std::pair<std::size_t, std::uint32_t> cop_value_and_rank(Vertex c, const Positions& p, Mask dmask,
                                                           std::size_t live_before) {
    if (p.empty()) return {static_cast<std::size_t>(std::popcount(dmask)), 0};
    const Mask pm = positions_mask(p);
    if ((pm & ~dmask) == 0) {
      const auto& t = table(p.size(), dmask);
      const auto i = index(t, c, p, dmask, kCopPhase);
      return {t.value[i], p.size() == live_before ? t.rank[i] : 0};
    }
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (Vertex c2 : closed_[c]) {
      Positions rest = without(p, c2);
      best = std::min(best, rob_value(c2, rest, dmask | positions_mask(rest)));
    }
    return {best, 0};
  }

  ClassTable solve_class(std::size_t k, Mask dmask) {
    check_budget();
    const auto d = static_cast<std::size_t>(std::popcount(dmask));
    ClassTable t;
    const auto ms_count = multiset_count(d, k);
    const auto size = static_cast<std::size_t>(n_) * ms_count * 2;
    if (ms_count > std::numeric_limits<std::uint32_t>::max() / 4 || size > limits_.max_states * 2 + 2) {
      throw LimitExceeded("class too large", stats_);
    }
    t.multisets = static_cast<std::uint32_t>(ms_count);

    std::vector<Vertex> dverts;
    for (Vertex v = 0; v < n_; ++v)
      if ((dmask >> v) & 1u) dverts.push_back(v);

    // Successor structure: in-class targets in CSR form plus the best exit value.
    constexpr std::uint8_t kNone = 0xff;
    std::vector<std::uint8_t> exit_best(size, kNone);
    std::vector<std::uint8_t> valid(size, 0);
    std::vector<std::uint32_t> offsets(size + 1, 0);
    std::vector<std::uint32_t> targets;

    Positions joint(k);
    std::vector<std::uint64_t> encoded;
    std::size_t explored = 0;

    // Enumerate states in index order so CSR offsets line up.
    std::vector<Positions> multisets(ms_count);
    for_each_multiset(d, k, [&](const Positions& local) {
      Positions p(k);
      for (std::size_t i = 0; i < k; ++i) p[i] = dverts[local[i]];
      const auto r = multiset_rank(p, dmask);
      multisets[r] = std::move(p);
    });

    for (Vertex c = 0; c < n_; ++c) {
      for (std::uint32_t m = 0; m < ms_count; ++m) {
        const Positions& p = multisets[m];
        const bool ok = !std::binary_search(p.begin(), p.end(), c);
        for (std::size_t phase = 0; phase < 2; ++phase) {
          const std::size_t idx = (static_cast<std::size_t>(c) * ms_count + m) * 2 + phase;
          offsets[idx] = static_cast<std::uint32_t>(targets.size());
          if (!ok) continue;
          valid[idx] = 1;
          ++explored;
          if (phase == kRobPhase) {
            encoded.clear();
            enumerate_joint(p, 0, joint, encoded);
            std::sort(encoded.begin(), encoded.end());
            encoded.erase(std::unique(encoded.begin(), encoded.end()), encoded.end());
            std::uint8_t best_exit = kNone;
            for (auto code : encoded) {
              Positions dest = decode(code, k);
              Positions rest = without(dest, c);
              if (rest.size() == k && (positions_mask(rest) & ~dmask) == 0) {
                targets.push_back(static_cast<std::uint32_t>(index_in(c, multiset_rank(rest, dmask), ms_count, kCopPhase)));
              } else {
                const auto v = static_cast<std::uint8_t>(cop_value(c, rest, dmask));
                if (best_exit == kNone || v > best_exit) best_exit = v;
              }
            }
            exit_best[idx] = best_exit;
          } else {
            std::uint8_t best_exit = kNone;
            for (Vertex c2 : closed_[c]) {
              if (std::binary_search(p.begin(), p.end(), c2)) {
                const auto v = static_cast<std::uint8_t>(rob_value(c2, without(p, c2), dmask));
                if (best_exit == kNone || v < best_exit) best_exit = v;
              } else {
                targets.push_back(static_cast<std::uint32_t>(index_in(c2, m, ms_count, kRobPhase)));
              }
            }
            exit_best[idx] = best_exit;
          }
        }
      }
    }
    offsets[size] = static_cast<std::uint32_t>(targets.size());
    stats_.explored_states += explored;
    check_budget();

    // Monotone (Jacobi) iteration from the |damaged| lower bound.
    const auto base = static_cast<std::uint8_t>(d);
    t.value.assign(size, base);
    t.rank.assign(size, 0);
    std::vector<std::uint8_t> next(size, base);
    for (std::uint32_t iter = 1;; ++iter) {
      bool changed = false;
      for (std::size_t idx = 0; idx < size; ++idx) {
        if (!valid[idx]) continue;
        std::uint8_t v;
        if (idx % 2 == kRobPhase) {
          v = exit_best[idx] == kNone ? base : exit_best[idx];
          for (auto i = offsets[idx]; i < offsets[idx + 1]; ++i) v = std::max(v, t.value[targets[i]]);
        } else {
          v = exit_best[idx] == kNone ? std::numeric_limits<std::uint8_t>::max() : exit_best[idx];
          for (auto i = offsets[idx]; i < offsets[idx + 1]; ++i) v = std::min(v, t.value[targets[i]]);
          v = std::max(v, base);
        }
        next[idx] = v;
        if (v != t.value[idx]) {
          changed = true;
          t.rank[idx] = iter;
        }
      }
      t.value.swap(next);
      if (!changed) break;
    }
    return t;
  }

  static std::size_t index_in(Vertex cop, std::size_t ms, std::size_t ms_count, std::size_t phase) {
    return (static_cast<std::size_t>(cop) * ms_count + ms) * 2 + phase;
  }

  // Joint destinations encoded as sorted bytes in a 64-bit word.
  void enumerate_joint(const Positions& p, std::size_t i, Positions& cur, std::vector<std::uint64_t>& out) const {
    if (i == p.size()) {
      Positions s = cur;
      std::sort(s.begin(), s.end());
      std::uint64_t code = 0;
      for (std::size_t j = 0; j < s.size(); ++j) code |= std::uint64_t{s[j]} << (8 * j);
      out.push_back(code);
      return;
    }
    const bool same = i > 0 && p[i] == p[i - 1];
    for (Vertex v : closed_[p[i]]) {
      if (same && v < cur[i - 1]) continue;
      cur[i] = v;
      enumerate_joint(p, i + 1, cur, out);
    }
  }

  static Positions decode(std::uint64_t code, std::size_t k) {
    Positions p(k);
    for (std::size_t j = 0; j < k; ++j) p[j] = static_cast<Vertex>((code >> (8 * j)) & 0xff);
    return p;
  }

  Graph g_;
  SolveLimits limits_;
  Vertex n_ = 0;
  std::vector<std::vector<Vertex>> closed_;
  std::array<std::array<std::uint64_t, kMaxRobbers + 1>, kMaxVertices + kMaxRobbers + 1> binom_{};
  std::unordered_map<std::pair<std::size_t, Mask>, ClassTable, KeyHash> memo_;
  SolveStats stats_;
  Clock::time_point start_;
};

inline SolveReport solve(const Graph& g, std::size_t s, SolveLimits limits = {}) {
  Solver solver(g, limits);
  return solver.solve(s);
}

}  // namespace dmg
