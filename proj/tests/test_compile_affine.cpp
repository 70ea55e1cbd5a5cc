#include <gtest/gtest.h>

#include <algorithm>

#include "lcrn/compile_affine.hpp"
#include "lcrn/errors.hpp"
#include "lcrn/model_check.hpp"
#include "lcrn/semilinear.hpp"

using namespace lcrn;

namespace {

AffinePiece makePiece(std::vector<std::vector<Int>> coeff, std::vector<Int> denom,
                      std::vector<Int> b, std::vector<Int> c) {
  AffinePiece p;
  p.k = coeff.size();
  p.l = denom.size();
  p.coeff = std::move(coeff);
  p.denom = std::move(denom);
  p.bOffset = std::move(b);
  p.cOffset = std::move(c);
  return p;
}

std::vector<Int> diff(const DiffOutput& d) {
  std::vector<Int> out;
  for (std::size_t j = 0; j < d.yP.size(); ++j) {
    out.push_back(static_cast<Int>(d.yP[j]) - static_cast<Int>(d.yC[j]));
  }
  return out;
}

// Every nonzero x with ||x|| <= maxNorm where the piece is defined gives the
// evaluator's value. The empty input starts with no molecules, so it can only
// yield 0 (checked separately).
void expectMatchesEvaluator(const AffinePiece& p, Int maxNorm) {
  AffineFragment f = compileAffine(p, 1);
  std::size_t checked = 0;
  forEachInputUpToNorm(p.k, maxNorm, [&](const InputVector& x) {
    auto want = tryEvalPiece(p, x);
    if (!want) return;
    std::vector<Count> xc(x.begin(), x.end());
    if (std::all_of(xc.begin(), xc.end(), [](Count v) { return v == 0; })) {
      EXPECT_EQ(diff(fragmentQuiescentOutput(f, xc)), std::vector<Int>(p.l, 0));
      return;
    }
    EXPECT_EQ(diff(fragmentQuiescentOutput(f, xc)), *want) << "x[0]=" << x[0];
    ++checked;
  });
  EXPECT_GT(checked, 0u);
}

Crn fragmentCrn(const AffineFragment& f) { return f.builder.build(); }

}  // namespace

TEST(CompileAffine, XPlusOneShape) {
  AffineFragment f = compileAffine(makePiece({{1}}, {1}, {1}, {0}), 1);
  Crn crn = fragmentCrn(f);
  // seed, c-offset, fan-out, coefficient, division, b-offset
  EXPECT_EQ(crn.numReactions(), 6u);
  EXPECT_EQ(f.inputAliases, (std::vector<std::string>{"A1_In1"}));
  EXPECT_EQ(f.outputP.size(), 1u);
  EXPECT_EQ(affinePrefix(3), "A3_");
}

TEST(CompileAffine, XPlusOneQuiescentDiff) {
  AffineFragment f = compileAffine(makePiece({{1}}, {1}, {1}, {0}), 1);
  std::vector<Count> three{3}, one{1};
  EXPECT_EQ(diff(fragmentQuiescentOutput(f, three)), (std::vector<Int>{4}));
  EXPECT_EQ(diff(fragmentQuiescentOutput(f, one)), (std::vector<Int>{2}));
}

TEST(CompileAffine, IdentityLeavesNoCancelSide) {
  AffineFragment f = compileAffine(makePiece({{1}}, {1}, {0}, {0}), 1);
  std::vector<Count> five{5};
  DiffOutput d = fragmentQuiescentOutput(f, five);
  EXPECT_EQ(d.yP, (std::vector<Count>{5}));
  EXPECT_EQ(d.yC, (std::vector<Count>{0}));
}

TEST(CompileAffine, MatchesEvaluatorOnSmallInputs) {
  expectMatchesEvaluator(makePiece({{1}}, {1}, {1}, {0}), 8);     // x + 1
  expectMatchesEvaluator(makePiece({{1}}, {2}, {0}, {0}), 8);     // x / 2
  expectMatchesEvaluator(makePiece({{-1}}, {1}, {9}, {0}), 8);    // 9 - x
  expectMatchesEvaluator(makePiece({{3}}, {1}, {0}, {2}), 7);     // 3 (x - 2)
  expectMatchesEvaluator(makePiece({{2}, {-1}}, {1}, {0}, {0, 0}), 6);
  expectMatchesEvaluator(makePiece({{1}, {-1}}, {3}, {1}, {0, 0}), 7);
  expectMatchesEvaluator(makePiece({{-2}}, {3}, {4}, {1}), 8);
}

TEST(CompileAffine, TwoOutputs) {
  AffinePiece p = makePiece({{1, 2}}, {1, 2}, {0, 1}, {1});
  AffineFragment f = compileAffine(p, 2);
  for (Count x = 1; x <= 7; x += 2) {
    std::vector<Int> xi{static_cast<Int>(x)};
    std::vector<Count> xc{x};
    EXPECT_EQ(diff(fragmentQuiescentOutput(f, xc)), evalPiece(p, xi));
  }
}

TEST(CompileAffine, RejectsInvalidPiece) {
  EXPECT_THROW(compileAffine(makePiece({{1}}, {0}, {0}, {0}), 1), ValidationError);
}

TEST(COffsetStage, BruteForce) {
  for (Count c = 0; c <= 6; ++c) {
    CrnBuilder b = cOffsetStage("C", c, "O");
    Crn crn = b.build();
    for (Count m = 0; m <= 6; ++m) {
      Configuration init = crn.emptyConfiguration();
      init.set(crn.id("C_1"), m);
      ReachabilityGraph g = buildGraph(crn, init);
      ASSERT_FALSE(g.capped());
      ASSERT_TRUE(g.acyclic());
      Count want = m > c ? m - c : 0;
      for (NodeId n = 0; n < g.numNodes(); ++n) {
        if (!g.isTerminal(n)) continue;
        ASSERT_EQ(g.config(n)[crn.id("O")], want) << "c=" << c << " m=" << m;
      }
    }
  }
}

TEST(Monotone, FragmentsNeverConsumeOutputs) {
  for (const AffinePiece& p :
       {makePiece({{1}}, {1}, {1}, {0}), makePiece({{2}, {-1}}, {1}, {0}, {0, 0}),
        makePiece({{1}, {-1}}, {3}, {2}, {1, 0})}) {
    EXPECT_TRUE(isMonotone(compileAffine(p, 1)));
  }
  CrnBuilder b;
  b.addSpecies("Y");
  b.addSpecies("K");
  b.addReaction({{{"Y", 1}, {"K", 1}}, {}});
  Crn crn = b.build();
  EXPECT_FALSE(isMonotone(crn, {"Y"}));
  EXPECT_TRUE(isMonotone(crn, {}));
}

TEST(Weights, NoReactionIncreasesWeightedCount) {
  for (const AffinePiece& p :
       {makePiece({{1}}, {1}, {1}, {0}), makePiece({{2}, {-1}}, {1}, {3}, {0, 2}),
        makePiece({{-4}, {5}}, {3}, {2}, {1, 0})}) {
    AffineFragment f = compileAffine(p, 1);
    Crn crn = fragmentCrn(f);
    Count maxIn = 0;
    for (const auto& a : f.inputAliases) maxIn = std::max(maxIn, f.weights.at(a));
    EXPECT_EQ(f.massBound, maxIn);
    for (const Reaction& r : crn.reactions()) {
      std::int64_t delta = 0;
      for (auto [s, d] : r.delta()) {
        Count w = f.weights.at(crn.name(s));
        EXPECT_GE(w, 1u);
        delta += d * static_cast<std::int64_t>(w);
      }
      EXPECT_LE(delta, 0) << crn.format(r);
    }
  }
}
