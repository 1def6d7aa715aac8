#include <gtest/gtest.h>

#include "dmg/arena.hpp"
#include "dmg/best_response.hpp"
#include "dmg/families.hpp"
#include "dmg/policy.hpp"
#include "dmg/policy_spec.hpp"

using namespace dmg;

namespace {

BoardPtr board(Family f, std::size_t p) { return make_board(generate({f, p})); }

GameState at(const Board& b, Vertex cop, const std::vector<Vertex>& robbers) {
  const auto& g = b.graph;
  return place_robbers(g, place_cop(g, initial_state(g, robbers.size()), cop), robbers);
}

// After the cop's move: robbers to move.
GameState robbers_turn(const Board& b, Vertex cop, const std::vector<Vertex>& robbers) {
  auto st = at(b, cop, robbers);
  st.phase = Phase::RobbersToMove;
  return st;
}

// One robber that keeps walking around a great cycle, cautiously and never leaving it.
class OnCycleRobber : public RobberTeamPolicy {
 public:
  OnCycleRobber(BoardPtr b, GreatCycle c) : b_(std::move(b)), c_(std::move(c)) {}
  std::string spec() const override { return "on-cycle"; }
  std::vector<Vertex> place(const GameState& st, PolicyMemory&) const override {
    Vertex best = c_.at(0);
    for (Vertex v : c_.vertices)
      if (b_->dist(st.cop, v) > b_->dist(st.cop, best)) best = v;
    return {best};
  }
  JointRobberMove move(const GameState& st, PolicyMemory&) const override {
    JointRobberMove mv{st.robbers};
    if (!st.robbers[0]) return mv;
    const Vertex pos = *st.robbers[0];
    const auto k = static_cast<std::ptrdiff_t>(c_.index_of(pos));
    mv.dest[0] = cautious_step(*b_, st.cop, pos, c_.at(k + 1), [&](Vertex y) { return c_.contains(y); });
    return mv;
  }

 private:
  BoardPtr b_;
  GreatCycle c_;
};

}  // namespace

TEST(Guard, StepsOntoTheLowestAdjacentRobber) {
  const auto b = board(Family::Star, 3);
  GuardCop guard(b, 0);
  PolicyMemory mem = guard.initial_memory(0);
  EXPECT_EQ(guard.move(at(*b, 0, {2, 1}), mem), 1u);
  EXPECT_EQ(mem.words[0], GuardCop::kReturning);
}

TEST(Guard, ReturnsHomeEvenWithARobberNextToIt) {
  const auto b = board(Family::Star, 3);
  GuardCop guard(b, 0);
  PolicyMemory mem{{GuardCop::kReturning}};
  // The cop sits on leaf 1; a robber waits on leaf 2, next to home.
  EXPECT_EQ(guard.move(at(*b, 1, {2}), mem), 0u);
}

TEST(Guard, WaitsWhenNothingIsAdjacent) {
  const auto b = board(Family::Path, 4);
  GuardCop guard(b, 0);
  PolicyMemory mem = guard.initial_memory(0);
  EXPECT_EQ(guard.move(at(*b, 0, {3}), mem), 0u);
}

TEST(Patrol, AlternatesAlongTheEdge) {
  const auto b = board(Family::Path, 4);
  PatrolCop patrol(b, 1, 2);
  PolicyMemory mem;
  EXPECT_EQ(patrol.move(at(*b, 1, {3}), mem), 2u);
  EXPECT_EQ(patrol.move(at(*b, 2, {3}), mem), 1u);
  EXPECT_THROW(PatrolCop(b, 0, 3), std::invalid_argument);
}

TEST(Greedy, ChasesTheNearestRobber) {
  const auto b = board(Family::Path, 5);
  GreedyCop greedy(b);
  PolicyMemory mem;
  EXPECT_EQ(greedy.move(at(*b, 2, {4}), mem), 3u);
  EXPECT_EQ(greedy.move(at(*b, 2, {1, 4}), mem), 1u);
}

TEST(RandomWalk, SeededAndLegal) {
  const auto b = board(Family::Cycle, 9);
  RandomWalkCop a(b, 3), c(b, 3);
  PolicyMemory ma = a.initial_memory(11), mc = c.initial_memory(11);
  auto st = at(*b, a.place(at(*b, 0, {4}), ma), {4});
  c.place(st, mc);
  for (int i = 0; i < 50; ++i) {
    const Vertex x = a.move(st, ma);
    EXPECT_EQ(x, c.move(st, mc));
    EXPECT_TRUE(b->graph.in_closed_neighborhood(st.cop, x));
    st.cop = x;
  }
}

TEST(CautiousStep, StepsAwayAlongTheCycle) {
  const auto b = board(Family::GPrime, 2);
  const auto c = great_cycles({b->graph, b->landmarks}).front();
  // Cop on c[0], robber on c[2] wanting to step towards it.
  const Vertex next = cautious_step(*b, c.at(0), c.at(2), c.at(1));
  EXPECT_EQ(next, c.at(3));
}

TEST(CautiousStep, TakesADetour) {
  const auto b = board(Family::Cycle, 6);
  // Robber at 2 wants 1, which is next to the cop at 0; 3 is safe.
  EXPECT_EQ(cautious_step(*b, 0, 2, 1), 3u);
  EXPECT_EQ(cautious_step(*b, 0, 2, 3), 3u);
}

TEST(CautiousStep, TotalWhenTrapped) {
  const auto b = board(Family::Path, 2);
  const Vertex v = cautious_step(*b, 0, 1, 0);
  EXPECT_TRUE(b->graph.in_closed_neighborhood(1, v));
}

TEST(CautiousStep, StaysOnAGreatCycleIndefinitely) {
  for (const FamilySpec spec : {FamilySpec{Family::GPrime, 4}, FamilySpec{Family::G, 4}}) {
    const auto lg = generate(spec);
    const auto b = make_board(lg);
    for (const auto& c : great_cycles(lg)) {
      OnCycleRobber robber(b, c);
      for (const auto& cop : standard_cop_suite(b)) {
        const auto t = run_match(*b, 1, *cop, robber, 300, 0);
        EXPECT_NE(t.stop, StopReason::AllCaught) << cop->spec();
        for (Vertex v : t.final_damaged.to_vector()) EXPECT_TRUE(c.contains(v));
      }
    }
  }
}

TEST(GuardThenEndgame, InducedStarWithThreeRobbers) {
  const auto b = board(Family::Star, 5);
  GuardThenEndgameCop cop(b, 0, {});
  const auto br = best_response_robbers(b, 3, cop);
  EXPECT_LE(br.value, 3u);
  auto solver = std::make_shared<Solver>(b->graph);
  OptimalRobbers robbers(solver);
  const auto t = run_match(*b, 3, cop, robbers, 200, 0);
  EXPECT_LE(t.damage(), 3u);
}

TEST(GuardThenEndgame, TwoRobbersUseTheSolverImmediately) {
  const auto b = board(Family::Cycle, 7);
  GuardThenEndgameCop cop(b, 0, {});
  Solver solver(b->graph);
  PolicyMemory mem = cop.initial_memory(0);
  const auto st = at(*b, 0, {3, 5});
  EXPECT_EQ(cop.move(st, mem), solver.best_cop_move(st));
  EXPECT_EQ(cop.flags(mem), (std::vector<std::string>{"endgame-solved"}));
}

TEST(GuardThenEndgame, FlagsAnUnsolvedEndgame) {
  const auto b = board(Family::GPrime, 2);
  GuardThenEndgameCop cop(b, 0, {1000, 1e9});
  CautiousGoalRobbers robbers(b, {7, 9});
  const auto t = run_match(*b, 2, cop, robbers, 50, 0);
  EXPECT_TRUE(t.has_flag("endgame-unsolved"));
}

TEST(StandardSuite, Composition) {
  const auto b = board(Family::GPrime, 4);
  const auto suite = standard_cop_suite(b);
  ASSERT_EQ(suite.size(), 25u);
  EXPECT_EQ(suite[0]->spec(), "guard:0");
  EXPECT_EQ(suite[1]->spec(), "guard:1");
  EXPECT_EQ(suite.back()->spec(), "random:20");
}

TEST(PolicySpec, CopRoundTrip) {
  const auto b = board(Family::GPrime, 2);
  for (std::string s : {"guard:3", "guard+endgame:0", "patrol:0-2", "stationary:5", "random:17", "greedy", "optimal"})
    EXPECT_EQ(make_cop_policy(b, s)->spec(), s);
}

TEST(PolicySpec, RobberRoundTrip) {
  const auto gp = board(Family::GPrime, 4);
  const auto g = board(Family::G, 4);
  EXPECT_EQ(make_robber_policy(gp, "script:gprime")->spec(), "script:gprime");
  EXPECT_EQ(make_robber_policy(g, "script:g")->spec(), "script:g");
  EXPECT_EQ(make_robber_policy(gp, "cycleattack:0-3")->spec(), "cycleattack:0-3");
  EXPECT_EQ(make_robber_policy(gp, "cautious:1,2,3")->spec(), "cautious:1,2,3");
  EXPECT_EQ(make_robber_policy(gp, "stationary")->spec(), "stationary");
  EXPECT_EQ(make_robber_policy(board(Family::Star, 3), "optimal")->spec(), "optimal");
}

TEST(PolicySpec, Errors) {
  const auto gp = board(Family::GPrime, 4);
  const auto g = board(Family::G, 4);
  const auto star = board(Family::Star, 3);
  EXPECT_THROW(make_cop_policy(star, "guard"), SpecError);
  EXPECT_THROW(make_cop_policy(star, "guard:9"), SpecError);
  EXPECT_THROW(make_cop_policy(star, "patrol:1-2"), SpecError);
  EXPECT_THROW(make_cop_policy(star, "random:x"), SpecError);
  EXPECT_THROW(make_cop_policy(star, "teleport"), SpecError);
  EXPECT_THROW(make_robber_policy(star, "script:gprime"), SpecError);
  EXPECT_THROW(make_robber_policy(gp, "script:g"), SpecError);
  EXPECT_THROW(make_robber_policy(g, "cycleattack:0-1"), SpecError);
  EXPECT_THROW(make_robber_policy(gp, "cycleattack:0-7"), SpecError);
  EXPECT_THROW(make_robber_policy(gp, "cautious:"), SpecError);
  EXPECT_THROW(make_robber_policy(gp, "wander"), SpecError);
}
