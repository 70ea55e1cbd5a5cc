#include <gtest/gtest.h>

#include <algorithm>

#include "lcrn/compile_predicate.hpp"
#include "lcrn/errors.hpp"
#include "lcrn/model_check.hpp"

using namespace lcrn;

namespace {

Verdict decide(const Crn& crd, const std::vector<Count>& x, bool expected) {
  return checkStableDecision(crd, crd.inputConfiguration(x), expected);
}

// Certifies the decider for `formula` against DomainPredicate::evaluate on
// every nonzero x with ||x|| <= maxNorm.
void expectDecides(const std::string& formula, std::size_t k, Int maxNorm) {
  DomainPredicate p = parseDomain(formula, k);
  Crn crd = standaloneDecider(compilePredicate(p, k, "P_"));
  forEachInputUpToNorm(k, maxNorm, [&](const InputVector& x) {
    if (std::all_of(x.begin(), x.end(), [](Int v) { return v == 0; })) return;
    std::vector<Count> xc(x.begin(), x.end());
    bool want = p.evaluate(x);
    Verdict v = decide(crd, xc, want);
    EXPECT_EQ(v.kind, Verdict::Kind::Certified)
        << formula << " x[0]=" << x[0] << " " << formatVerdict(v, crd);
  });
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

TEST(SaturationBound, Formula) {
  EXPECT_EQ(saturationBound(ThresholdAtom{{1}, 0}), 2);
  EXPECT_EQ(saturationBound(ThresholdAtom{{2, -1}, -3}), 7);
}

// x >= 0 worked by hand: s = 2, inputs start as leaders with value 1.
//   Lp1 + Lp1 -> Lp2 + N0y
//   Lp1 + Lp2 -> Lp2 + Np1y
//   Lp2 + Lp2 -> Lp2 + Np2y
//   Lp1 + Np1y -> Lp2 + N0y
//   Lp1 + Np2y -> Lp2 + Np1y
TEST(CompileAtomThreshold, HandDerivedNonnegative) {
  PredicateCrd crd = compileAtomThreshold(ThresholdAtom{{1}, 0});
  Crn crn = crd.builder.build();
  std::vector<std::string> names;
  for (const Species& s : crn.species()) names.push_back(s.name);
  EXPECT_EQ(names, (std::vector<std::string>{"T_Lp1", "T_Lp2", "T_N0y", "T_Np1y", "T_Np2y"}));
  ASSERT_EQ(crn.numReactions(), 5u);
  std::vector<std::string> got;
  for (const Reaction& r : crn.reactions()) got.push_back(crn.format(r));
  std::sort(got.begin(), got.end());
  EXPECT_EQ(got, (std::vector<std::string>{
                     "2T_Lp1 -> T_Lp2 + T_N0y",
                     "2T_Lp2 -> T_Lp2 + T_Np2y",
                     "T_Lp1 + T_Lp2 -> T_Lp2 + T_Np1y",
                     "T_Lp1 + T_Np1y -> T_Lp2 + T_N0y",
                     "T_Lp1 + T_Np2y -> T_Lp2 + T_Np1y",
                 }));
  EXPECT_EQ(crd.inputAliases, (std::vector<std::string>{"T_Lp1"}));
  EXPECT_EQ(crd.noVoters.size(), 0u);
  EXPECT_EQ(crd.numSpecies(), 5u);
}

TEST(CompilePredicate, EveryReactionConservesMolecules) {
  PredicateCrd crd = compilePredicate(
      parseDomain("(or (and (ge 2 -1 1) (mod 1 1 3 2)) (not (ge 0 1 2)))", 2), 2, "Q_");
  Crn crn = crd.builder.build();
  EXPECT_GT(crn.numReactions(), 0u);
  for (const Reaction& r : crn.reactions()) {
    std::int64_t net = 0;
    for (auto [s, d] : r.delta()) net += d;
    EXPECT_EQ(net, 0) << crn.format(r);
    EXPECT_EQ(r.order(), 2u);
  }
  // Voters partition the species.
  EXPECT_EQ(crd.numSpecies(), crn.numSpecies());
  for (const Species& s : crn.species()) {
    EXPECT_NE(contains(crd.yesVoters, s.name), contains(crd.noVoters, s.name));
  }
}

TEST(CompileAtomThreshold, Examples) {
  Crn ge1 = standaloneDecider(compileAtomThreshold(ThresholdAtom{{1}, 1}));
  EXPECT_EQ(decide(ge1, {1}, true).kind, Verdict::Kind::Certified);
  Crn diff = standaloneDecider(compileAtomThreshold(ThresholdAtom{{1, -1}, 0}));
  EXPECT_EQ(decide(diff, {2, 2}, true).kind, Verdict::Kind::Certified);
  Crn ge3 = standaloneDecider(compileAtomThreshold(ThresholdAtom{{1}, 3}));
  EXPECT_EQ(decide(ge3, {2}, false).kind, Verdict::Kind::Certified);
  EXPECT_EQ(decide(ge3, {2}, true).kind, Verdict::Kind::Refuted);
}

TEST(CompileAtomMod, Examples) {
  Crn parity = standaloneDecider(compileAtomMod(ModAtom{{1}, 2, 0}));
  EXPECT_EQ(decide(parity, {4}, true).kind, Verdict::Kind::Certified);
  EXPECT_EQ(decide(parity, {3}, false).kind, Verdict::Kind::Certified);
  Crn mod3 = standaloneDecider(compileAtomMod(ModAtom{{1}, 3, 1}));
  EXPECT_EQ(decide(mod3, {1}, true).kind, Verdict::Kind::Certified);
}

TEST(CompilePredicate, BooleanCombinations) {
  Crn ge1 = standaloneDecider(compilePredicate(parseDomain("(ge 1 1)", 1), 1, "P_"));
  EXPECT_EQ(decide(ge1, {2}, true).kind, Verdict::Kind::Certified);
  Crn band = standaloneDecider(
      compilePredicate(parseDomain("(and (ge 1 1) (not (ge 1 3)))", 1), 1, "P_"));
  EXPECT_EQ(decide(band, {3}, false).kind, Verdict::Kind::Certified);
  EXPECT_EQ(decide(band, {2}, true).kind, Verdict::Kind::Certified);
}

TEST(CompilePredicate, SweepAgainstEvaluator) {
  expectDecides("(ge 1 -1 0)", 2, 5);
  expectDecides("(ge -2 3)", 1, 6);
  expectDecides("(mod 2 1 3 1)", 2, 5);
  expectDecides("(or (mod 1 2 1) (ge 1 4))", 1, 7);
  expectDecides("(and (ge 2 -1 0) (not (mod 1 1 2 0)))", 2, 4);
  expectDecides("true", 1, 3);
  expectDecides("false", 1, 3);
}

TEST(PieceGate, OverlapGoesToFirstPiece) {
  SemilinearFunctionSpec spec;
  spec.k = spec.l = 1;
  AffinePiece p;
  p.k = p.l = 1;
  p.coeff = {{1}};
  p.denom = {1};
  p.bOffset = {0};
  p.cOffset = {0};
  spec.pieces.push_back({p, parseDomain("(ge 1 1)", 1)});
  spec.pieces.push_back({p, parseDomain("(ge 1 0)", 1)});
  EXPECT_EQ(pieceGate(spec, 2).toString(), "(and (ge 1 0) (not (ge 1 1)))");
  Crn first = standaloneDecider(compilePredicate(pieceGate(spec, 1), 1, predicatePrefix(1)));
  Crn second = standaloneDecider(compilePredicate(pieceGate(spec, 2), 1, predicatePrefix(2)));
  EXPECT_EQ(decide(first, {2}, true).kind, Verdict::Kind::Certified);
  EXPECT_EQ(decide(second, {2}, false).kind, Verdict::Kind::Certified);
  EXPECT_THROW(pieceGate(spec, 3), ValidationError);
}

TEST(CompilePredicate, BudgetAndLimit) {
  PredicateOptions small;
  small.speciesBudget = 3;
  PredicateCrd crd = compilePredicate(parseDomain("(ge 1 0)", 1), 1, "P_", small);
  EXPECT_EQ(crd.warnings.size(), 1u);
  small.speciesLimit = 3;
  EXPECT_THROW(compilePredicate(parseDomain("(ge 1 0)", 1), 1, "P_", small), ValidationError);
}

TEST(StandaloneDecider, InputsVoteLikeAliases) {
  PredicateCrd crd = compileAtomThreshold(ThresholdAtom{{1, -1}, 1});
  Crn crn = standaloneDecider(crd);
  ASSERT_EQ(crn.inputs().size(), 2u);
  EXPECT_EQ(crn.name(crn.inputs()[0]), "X1");
  EXPECT_TRUE(crn.isYesVoter(crn.id("X1")));
  EXPECT_FALSE(crn.isYesVoter(crn.id("X2")));
  EXPECT_THROW(standaloneDecider(crd, {"X"}), ValidationError);
}
