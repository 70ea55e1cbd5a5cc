#include <gtest/gtest.h>

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <set>

#include "lcrn/compile_predicate.hpp"
#include "lcrn/crn_format.hpp"
#include "lcrn/errors.hpp"
#include "lcrn/model_check.hpp"

using namespace lcrn;

namespace {

Crn intro() {
  return parseCrn(
      "species: B, K, X, Y\ninputs: X\noutputs: Y\nX -> B + 2Y\nB + B -> B + K\nY + K -> 0\n");
}

Crn doubling() { return parseCrn("species: X, Y\ninputs: X\noutputs: Y\nX -> 2Y\n"); }

using Counts = std::vector<Count>;

Counts countsOf(const Configuration& c) { return {c.counts().begin(), c.counts().end()}; }

// Plain BFS over std::set, independent of the hashed arena.
std::map<Counts, std::set<Counts>> bruteGraph(const Crn& crn, const Configuration& init) {
  std::map<Counts, std::set<Counts>> adj;
  std::deque<Configuration> queue{init};
  adj[countsOf(init)];
  while (!queue.empty()) {
    Configuration c = queue.front();
    queue.pop_front();
    for (std::size_t r : applicableReactions(c, crn)) {
      Configuration n = applyReaction(c, crn.reactions()[r]);
      adj[countsOf(c)].insert(countsOf(n));
      if (!adj.count(countsOf(n))) {
        adj[countsOf(n)];
        queue.push_back(n);
      }
    }
  }
  return adj;
}

std::set<Counts> reachableFrom(const std::map<Counts, std::set<Counts>>& adj, const Counts& c) {
  std::set<Counts> seen{c};
  std::vector<Counts> stack{c};
  while (!stack.empty()) {
    Counts u = stack.back();
    stack.pop_back();
    for (const Counts& v : adj.at(u)) {
      if (seen.insert(v).second) stack.push_back(v);
    }
  }
  return seen;
}

Crn parityDecider() {
  PredicateCrd crd = compilePredicate(parseDomain("(mod 1 2 0)", 1), 1, "P_");
  return standaloneDecider(crd);
}

}  // namespace

TEST(BuildGraph, Examples) {
  Crn d = doubling();
  ReachabilityGraph g = buildGraph(d, d.configuration({{"X", 2}}));
  EXPECT_EQ(g.numNodes(), 3u);
  EXPECT_EQ(g.numEdges(), 2u);
  EXPECT_FALSE(g.capped());
  for (Count x : {0, 1, 2}) {
    EXPECT_TRUE(g.find(d.configuration({{"X", x}, {"Y", 4 - 2 * x}})).has_value());
  }

  Crn in = intro();
  ReachabilityGraph gi = buildGraph(in, in.configuration({{"X", 1}}));
  EXPECT_TRUE(gi.find(in.configuration({{"B", 1}, {"Y", 2}})).has_value());
  EXPECT_EQ(gi.numNodes(), 2u);
  EXPECT_TRUE(gi.isTerminal(*gi.find(in.configuration({{"B", 1}, {"Y", 2}}))));

  Crn le = parseCrn("species: L\nL + L -> L\n");
  ReachabilityGraph gl = buildGraph(le, le.configuration({{"L", 3}}));
  EXPECT_EQ(gl.numNodes(), 3u);
  EXPECT_TRUE(gl.acyclic());
}

TEST(BuildGraph, HashConsingMatchesBruteForce) {
  Crn crn = intro();
  for (Count x : {3, 5, 7}) {
    Configuration init = crn.configuration({{"X", x}});
    ReachabilityGraph g = buildGraph(crn, init);
    auto brute = bruteGraph(crn, init);
    ASSERT_EQ(g.numNodes(), brute.size());
    std::size_t edges = 0;
    for (const auto& [_, out] : brute) edges += out.size();
    EXPECT_EQ(g.numEdges(), edges);

    // Random firing orders land on nodes that already exist and decode back.
    std::mt19937_64 gen(x);
    for (int run = 0; run < 200; ++run) {
      Configuration c = init;
      while (true) {
        NodeId id = g.find(c).value();
        ASSERT_EQ(g.config(id), c);
        auto apps = applicableReactions(c, crn);
        if (apps.empty()) break;
        c = applyReaction(c, crn.reactions()[apps[gen() % apps.size()]]);
      }
    }
  }
}

TEST(BuildGraph, PathToReplaysToNode) {
  Crn crn = intro();
  Configuration init = crn.configuration({{"X", 4}});
  ReachabilityGraph g = buildGraph(crn, init);
  for (NodeId n = 0; n < g.numNodes(); ++n) {
    Configuration c = init;
    for (std::uint32_t r : g.pathTo(n)) c = applyReaction(c, crn.reactions()[r]);
    ASSERT_EQ(c, g.config(n));
  }
}

TEST(BuildGraph, CappedAtBudget) {
  Crn crn = intro();
  ReachabilityGraph g = buildGraph(crn, crn.configuration({{"X", 6}}), 10);
  EXPECT_TRUE(g.capped());
  EXPECT_LE(g.numNodes(), 10u);
  EXPECT_THROW(classifyOutputStable(g, OutputSemantics::Computation), CappedGraphError);
}

TEST(Condense, ComponentsComeSinksFirst) {
  Crn crn = parseCrn("species: A, B, C\nA -> B\nB -> A\nB -> C\n");
  ReachabilityGraph g = buildGraph(crn, crn.configuration({{"A", 1}}));
  auto cond = g.condense();
  ASSERT_EQ(cond.components.size(), 2u);
  EXPECT_EQ(cond.components[0].size(), 1u);  // {C:1}
  EXPECT_EQ(cond.components[1].size(), 2u);
  EXPECT_FALSE(g.acyclic());
}

TEST(ClassifyOutputStable, DoublingOnlyEndIsStable) {
  Crn d = doubling();
  ReachabilityGraph g = buildGraph(d, d.configuration({{"X", 2}}));
  auto stable = classifyOutputStable(g, OutputSemantics::Computation);
  ASSERT_EQ(stable.size(), 1u);
  EXPECT_EQ(g.config(stable[0]), d.configuration({{"Y", 4}}));
}

TEST(ClassifyOutputStable, IntroMatchesNestedSearch) {
  Crn crn = intro();
  Configuration init = crn.configuration({{"X", 3}});
  ReachabilityGraph g = buildGraph(crn, init);
  auto brute = bruteGraph(crn, init);
  std::set<Counts> expected;
  SpeciesId y = crn.id("Y");
  for (const auto& [c, _] : brute) {
    auto reach = reachableFrom(brute, c);
    bool same = std::all_of(reach.begin(), reach.end(),
                            [&](const Counts& r) { return r[y] == c[y]; });
    if (same) {
      expected.insert(c);
      EXPECT_EQ(c[y], 4u);
    }
  }
  std::set<Counts> got;
  for (NodeId n : classifyOutputStable(g, OutputSemantics::Computation)) {
    got.insert(countsOf(g.config(n)));
  }
  EXPECT_EQ(got, expected);
  EXPECT_FALSE(got.empty());
}

TEST(ClassifyOutputStable, ReversibleWithoutOutputChanges) {
  Crn crn = parseCrn("species: A, B, Y\noutputs: Y\nA -> B\nB -> A\n");
  ReachabilityGraph g = buildGraph(crn, crn.configuration({{"A", 2}, {"Y", 1}}));
  EXPECT_EQ(classifyOutputStable(g, OutputSemantics::Computation).size(), g.numNodes());
  EXPECT_THROW(classifyOutputStable(g, OutputSemantics::Decision), MissingVotersError);
}

TEST(CheckStableComputation, IntroCertifiedForXPlusOne) {
  Crn crn = intro();
  for (Count x = 1; x <= 5; ++x) {
    Count want = x + 1;
    Verdict v = checkStableComputation(crn, crn.configuration({{"X", x}}),
                                       std::span<const Count>(&want, 1));
    EXPECT_EQ(v.kind, Verdict::Kind::Certified) << formatVerdict(v, crn);
    EXPECT_TRUE(v.reason.empty());
  }
}

TEST(CheckStableComputation, WrongClaimIsRefutedWithReplayableWitness) {
  Crn d = doubling();
  Configuration init = d.configuration({{"X", 1}});
  Count two = 2, three = 3;
  EXPECT_EQ(checkStableComputation(d, init, std::span<const Count>(&two, 1)).kind,
            Verdict::Kind::Certified);
  Verdict v = checkStableComputation(d, init, std::span<const Count>(&three, 1));
  ASSERT_EQ(v.kind, Verdict::Kind::Refuted);
  ASSERT_TRUE(v.witnessConfig.has_value());
  Configuration c = init;
  for (std::uint32_t r : v.witness) c = applyReaction(c, d.reactions()[r]);
  EXPECT_EQ(c, *v.witnessConfig);
  EXPECT_NE(formatVerdict(v, d).find("refuted"), std::string::npos);
}

TEST(CheckStableComputation, NeverStabilizingIsRefuted) {
  // Y oscillates forever, so no configuration is output-stable.
  Crn crn = parseCrn("species: A, Y\noutputs: Y\nA -> Y\nY -> A\n");
  Count one = 1;
  Verdict v = checkStableComputation(crn, crn.configuration({{"A", 1}}),
                                     std::span<const Count>(&one, 1));
  EXPECT_EQ(v.kind, Verdict::Kind::Refuted);
  EXPECT_EQ(v.outputStableNodes, 0u);
}

TEST(CheckStableComputation, BudgetGivesInconclusive) {
  Crn crn = intro();
  Count want = 7;
  Verdict v = checkStableComputation(crn, crn.configuration({{"X", 6}}),
                                     std::span<const Count>(&want, 1), 50);
  EXPECT_EQ(v.kind, Verdict::Kind::Inconclusive);
  EXPECT_FALSE(v.reason.empty());
}

TEST(CheckStableDecision, ParityDecider) {
  Crn crd = parityDecider();
  SpeciesId x = crd.inputs()[0];
  for (Count n = 1; n <= 8; ++n) {
    Configuration init = crd.emptyConfiguration();
    init.set(x, n);
    bool even = n % 2 == 0;
    EXPECT_EQ(checkStableDecision(crd, init, even).kind, Verdict::Kind::Certified) << n;
    EXPECT_EQ(checkStableDecision(crd, init, !even).kind, Verdict::Kind::Refuted) << n;
  }
}

TEST(CheckStableDecision, EmptyInputIsUndefined) {
  Crn crd = parityDecider();
  Verdict v = checkStableDecision(crd, crd.emptyConfiguration(), true);
  EXPECT_EQ(v.kind, Verdict::Kind::Inconclusive);
  EXPECT_TRUE(v.undefinedOnEmptyInput);
  EXPECT_THROW(checkStableDecision(doubling(), doubling().configuration({{"X", 1}}), true),
               MissingVotersError);
}
