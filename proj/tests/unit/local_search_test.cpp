#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "gwcut/local_search.hpp"
#include "gwcut/oracle.hpp"
#include "gwcut/rng.hpp"

namespace gwcut {
namespace {

using testing::complete_graph;

// Recomputes both terminal conditions from scratch.
bool one_opt_holds(const Graph& g, const SpinState& s) {
  for (NodeId m = 0; m < g.num_nodes(); ++m)
    if (node_field(g, s, m) > 0) return false;
  return true;
}

bool two_opt_holds(const Graph& g, const SpinState& s) {
  if (!one_opt_holds(g, s)) return false;
  for (const Edge& e : g.edges())
    if (s[e.u] != s[e.v] && node_field(g, s, e.u) + node_field(g, s, e.v) > -2.0 * e.w) return false;
  return true;
}

TEST(OneOpt, Examples) {
  const Graph k3 = complete_graph(3);
  const LsResult r = one_opt(k3, {1, 1, 1});
  EXPECT_EQ(r.cut, 2.0);
  EXPECT_EQ(r.flips, 1U);
  const Graph k2 = complete_graph(2);
  const LsResult stable = one_opt(k2, {1, -1});
  EXPECT_EQ(stable.sigma, (SpinState{1, -1}));
  EXPECT_EQ(stable.cut, 1.0);
  EXPECT_EQ(stable.flips, 0U);
}

TEST(TwoOpt, Examples) {
  const Graph c5 = testing::cycle_graph(5);
  const SpinState start{1, 1, -1, -1, -1};
  const LsResult r = two_opt(c5, start);
  EXPECT_EQ(r.cut, 4.0);
  EXPECT_EQ(r.cut, brute_force_maxcut(c5).cut);
  const Graph k2 = complete_graph(2);
  const LsResult e = two_opt(k2, {1, 1});
  EXPECT_EQ(e.cut, 1.0);
  EXPECT_EQ(node_field(k2, e.sigma, 0) + node_field(k2, e.sigma, 1), -2.0);
}

TEST(LocalSearch, TerminalConditionsOnRandomInstances) {
  Rng rng(1);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 2 + rng.below(40);
    const Graph g = t % 4 == 3 ? testing::weighted_er(n, 0.3, t, 0.5, 2.0) : gen_erdos_renyi(n, rng.uniform(0.05, 0.5), t);
    const SpinState s = SpinState::random(n, rng);
    const double start = cut_size(g, s);
    const LsResult a = one_opt(g, s);
    ASSERT_TRUE(one_opt_holds(g, a.sigma));
    ASSERT_TRUE(is_one_opt_stable(g, a.sigma));
    ASSERT_GE(a.cut, start);
    ASSERT_NEAR(a.cut, cut_size(g, a.sigma), 1e-9);
    const LsResult b = two_opt(g, s);
    ASSERT_TRUE(two_opt_holds(g, b.sigma));
    ASSERT_TRUE(is_two_opt_stable(g, b.sigma));
    ASSERT_GE(b.cut, start);
    if (g.unit_weighted()) ASSERT_LE(static_cast<double>(a.flips), 2.0 * g.total_weight());
  }
}

// Flipping both endpoints of a cut edge changes the cut by F_m + F_n + 2 w.
TEST(LocalSearch, PairFlipGain) {
  Rng rng(2);
  for (int t = 0; t < 200; ++t) {
    const Graph g = testing::weighted_er(20, 0.3, 50 + t, 0.5, 2.0);
    SpinState s = SpinState::random(20, rng);
    for (const Edge& e : g.edges()) {
      if (s[e.u] == s[e.v]) continue;
      const double gain = node_field(g, s, e.u) + node_field(g, s, e.v) + 2.0 * e.w;
      const double before = cut_size(g, s);
      s.flip(e.u);
      s.flip(e.v);
      EXPECT_NEAR(cut_size(g, s) - before, gain, 1e-9);
      s.flip(e.u);
      s.flip(e.v);
      break;
    }
  }
}

TEST(Multistart, DegenerateAndPrefix) {
  const Graph g = gen_erdos_renyi(40, 0.2, 3);
  const LsResult one = multistart(g, LsVariant::TwoOpt, 1, 9);
  Rng rng = Rng::derive(9, 0);
  const LsResult single = two_opt(g, SpinState::random(40, rng));
  EXPECT_EQ(one.cut, single.cut);
  EXPECT_EQ(one.sigma, single.sigma);
  double prev = 0.0;
  for (std::size_t tries = 1; tries <= 32; tries *= 2) {
    const double c = multistart(g, LsVariant::OneOpt, tries, 9).cut;
    EXPECT_GE(c, prev);
    prev = c;
  }
  EXPECT_EQ(multistart(complete_graph(3), LsVariant::TwoOpt, 10, 1).cut, 2.0);
}

TEST(Multistart, ThreadInvariant) {
  const Graph g = gen_erdos_renyi(60, 0.1, 4);
  for (LsVariant v : {LsVariant::OneOpt, LsVariant::TwoOpt}) {
    const LsResult a = multistart(g, v, 40, 5, 1);
    const LsResult b = multistart(g, v, 40, 5, 8);
    EXPECT_EQ(a.sigma, b.sigma);
    EXPECT_EQ(a.cut, b.cut);
    EXPECT_EQ(a.restarts_used, 40U);
  }
}

}  // namespace
}  // namespace gwcut
