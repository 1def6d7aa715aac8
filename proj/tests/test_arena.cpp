#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "dmg/arena.hpp"
#include "dmg/best_response.hpp"
#include "dmg/families.hpp"
#include "dmg/policy_spec.hpp"
#include "dmg/scripts.hpp"
#include "dmg/testing/graph_sets.hpp"

using namespace dmg;

namespace {

BoardPtr board(Family f, std::size_t p) { return make_board(generate({f, p})); }

// Replays a transcript with its own reading of the rules, using nothing from the
// library but the transcript fields. Returns the first disagreement, empty when none.
std::string independent_replay(const Transcript& t) {
  std::istringstream in(t.graph);
  std::size_t n = 0, m = 0;
  in >> n >> m;
  std::vector<std::set<std::size_t>> adj(n);
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t a = 0, b = 0;
    in >> a >> b;
    adj[a].insert(b);
    adj[b].insert(a);
  }
  auto near = [&](std::size_t x, std::size_t y) { return x == y || adj[x].count(y) > 0; };
  std::size_t cop = t.cop_start;
  std::vector<long> pos;
  std::vector<std::size_t> caught0;
  for (std::size_t i = 0; i < t.robber_start.size(); ++i) {
    pos.push_back(t.robber_start[i] == cop ? -1 : static_cast<long>(t.robber_start[i]));
    if (pos.back() < 0) caught0.push_back(i);
  }
  if (caught0 != t.placement_captures) return "placement";
  std::set<std::size_t> damaged;
  for (const auto& r : t.rounds) {
    if (!near(cop, r.cop_move)) return "cop teleported in round " + std::to_string(r.round);
    cop = r.cop_move;
    std::vector<std::size_t> caught;
    for (std::size_t i = 0; i < pos.size(); ++i)
      if (pos[i] == static_cast<long>(cop)) {
        pos[i] = -1;
        caught.push_back(i);
      }
    if (caught != r.captured) return "cop captures in round " + std::to_string(r.round);
    std::set<std::size_t> fresh;
    for (long p : pos)
      if (p >= 0 && !damaged.count(static_cast<std::size_t>(p))) fresh.insert(static_cast<std::size_t>(p));
    if (std::vector<Vertex>(fresh.begin(), fresh.end()) != r.damage_added)
      return "damage in round " + std::to_string(r.round);
    damaged.insert(fresh.begin(), fresh.end());
    if (!r.robber_move) continue;
    std::vector<std::size_t> stepped;
    for (std::size_t i = 0; i < pos.size(); ++i) {
      const auto& d = r.robber_move->dest[i];
      if (pos[i] < 0) {
        if (d) return "caught robber moved";
        continue;
      }
      if (!d || !near(static_cast<std::size_t>(pos[i]), *d)) return "robber teleported";
      pos[i] = *d == cop ? -1 : static_cast<long>(*d);
      if (pos[i] < 0) stepped.push_back(i);
    }
    if (stepped != r.robber_captures) return "robber captures in round " + std::to_string(r.round);
  }
  if (std::vector<Vertex>(damaged.begin(), damaged.end()) != t.final_damaged.to_vector()) return "final damage";
  return {};
}

class IllegalCop : public CopPolicy {
 public:
  std::string spec() const override { return "illegal"; }
  Vertex place(const GameState&, PolicyMemory&) const override { return 0; }
  Vertex move(const GameState& st, PolicyMemory&) const override { return st.round >= 3 ? 4 : static_cast<Vertex>(st.round); }
};

}  // namespace

TEST(RunMatch, PatrolOnTwoVerticesSavesBoth) {
  const auto b = board(Family::Path, 2);
  PatrolCop patrol(b, 0, 1);
  OptimalRobbers robbers(std::make_shared<Solver>(b->graph));
  const auto t = run_match(*b, 2, patrol, robbers, 100, 0);
  EXPECT_EQ(t.damage(), 0u);
  EXPECT_TRUE(t.stop == StopReason::AllCaught || t.stop == StopReason::StableCycle);
}

TEST(RunMatch, GuardAgainstTheBestResponseWitness) {
  const auto b = board(Family::Star, 3);
  GuardCop guard(b, 0);
  const auto br = best_response_robbers(b, 2, guard);
  EXPECT_LE(br.witness.damage(), 1u);
  EXPECT_EQ(independent_replay(br.witness), "");
}

TEST(RunMatch, StationaryRobbersAgainstGreedy) {
  const auto b = board(Family::Path, 4);
  GreedyCop greedy(b);
  StationaryRobbers robbers(b);
  for (std::size_t s = 1; s <= 3; ++s) EXPECT_LE(run_match(*b, s, greedy, robbers, 100, 0).damage(), 2u);
}

TEST(RunMatch, SameSeedSameTranscript) {
  const auto b = board(Family::GPrime, 4);
  const auto script = make_lower_bound_script(b);
  for (const auto& cop : standard_cop_suite(b)) {
    const auto a = run_match(*b, 3, *cop, *script, 1000, 42);
    const auto c = run_match(*b, 3, *cop, *script, 1000, 42);
    EXPECT_EQ(dump(a), dump(c)) << cop->spec();
  }
}

TEST(RunMatch, RoundCap) {
  const auto b = board(Family::Cycle, 9);
  RandomWalkCop cop(b, 1);
  CautiousGoalRobbers robbers(b, {4});
  const auto t = run_match(*b, 1, cop, robbers, 5, 0);
  EXPECT_LE(t.rounds.size(), 5u);
  EXPECT_THROW(run_match(*b, 1, cop, robbers, 0, 0), std::invalid_argument);
}

TEST(RunMatch, PolicyFaultKeepsThePartialTranscript) {
  const auto b = board(Family::Path, 5);
  IllegalCop cop;
  StationaryRobbers robbers(b, {4});
  try {
    run_match(*b, 1, cop, robbers, 50, 0);
    FAIL() << "expected a policy fault";
  } catch (const PolicyFault& e) {
    EXPECT_TRUE(e.transcript().fault.has_value());
    EXPECT_EQ(e.transcript().rounds.size(), 2u);
    EXPECT_TRUE(replay(e.transcript()).ok);
  }
}

TEST(Replay, AgreesWithIndependentReplayer) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    const auto g = dmg::testing::random_connected_graph(3 + rng() % 8, 0.3, rng);
    const auto b = make_board({g, std::nullopt});
    RandomWalkCop cop(b, rng());
    CautiousGoalRobbers robbers(b, {0, static_cast<Vertex>(g.vertex_count() - 1)});
    const auto t = run_match(*b, 1 + rng() % 3, cop, robbers, 60, rng());
    EXPECT_TRUE(replay(t).ok);
    EXPECT_EQ(independent_replay(t), "");
  }
  const auto b = board(Family::G, 8);
  for (const auto& cop : standard_cop_suite(b)) {
    const auto t = run_match(*b, 4, *cop, *make_lower_bound_script(b), default_max_rounds(b->graph), 0);
    EXPECT_EQ(independent_replay(t), "") << cop->spec();
  }
}

TEST(Replay, DetectsTampering) {
  const auto b = board(Family::Cycle, 8);
  GreedyCop cop(b);
  CautiousGoalRobbers robbers(b, {4, 5});
  auto t = run_match(*b, 2, cop, robbers, 40, 0);
  ASSERT_TRUE(replay(t).ok);
  ASSERT_FALSE(t.rounds.empty());
  auto bad = t;
  bad.rounds[0].damage_added.push_back(7);
  EXPECT_FALSE(replay(bad).ok);
  bad = t;
  ASSERT_FALSE(bad.final_damaged.empty());
  bad.final_damaged.erase(bad.final_damaged.to_vector().front());
  EXPECT_FALSE(replay(bad).ok);
}

TEST(TranscriptJson, RoundTrip) {
  const auto b = board(Family::GPrime, 4);
  const auto t = run_match(*b, 3, *make_cop_policy(b, "random:4"), *make_lower_bound_script(b), 1040, 9);
  const auto j = nlohmann::json::parse(dump(t));
  EXPECT_EQ(j.at("version"), "v1");
  EXPECT_EQ(j.at("damage"), t.damage());
  EXPECT_EQ(j.at("robber_policy"), "script:gprime");
  const auto back = transcript_from_json(j);
  EXPECT_EQ(dump(back), dump(t));
  EXPECT_EQ(back.rounds, t.rounds);
  EXPECT_TRUE(replay(back).ok);
}

TEST(StopReasonText, RoundTrip) {
  for (auto r : {StopReason::AllCaught, StopReason::StableCycle, StopReason::MaxRounds, StopReason::ScriptComplete})
    EXPECT_EQ(parse_stop_reason(to_string(r)), r);
  EXPECT_FALSE(parse_stop_reason("bored"));
}

TEST(Suite, Summary) {
  const auto b = board(Family::GPrime, 4);
  const auto sum = run_suite(*b, 3, *make_lower_bound_script(b), standard_cop_suite(b), 1040, 0);
  ASSERT_EQ(sum.matches.size(), 25u);
  EXPECT_GE(sum.min_damage, 24u);
  EXPECT_LE(sum.max_damage, 26u);
  EXPECT_GE(sum.mean_damage, static_cast<double>(sum.min_damage));
  EXPECT_LE(sum.mean_damage, static_cast<double>(sum.max_damage));
  const auto csv = to_csv(sum);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 26);
  EXPECT_EQ(to_json(sum).at("matches").size(), 25u);
  EXPECT_THROW(run_suite(*b, 3, *make_lower_bound_script(b), {}, 10, 0), std::invalid_argument);
}
