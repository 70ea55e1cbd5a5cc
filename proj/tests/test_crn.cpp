#include <gtest/gtest.h>

#include <random>

#include "lcrn/crn.hpp"
#include "lcrn/crn_format.hpp"
#include "lcrn/errors.hpp"

using namespace lcrn;

namespace {

const char* kIntro = R"(# leaderless x + 1
species: B, K, X, Y
inputs: X
outputs: Y
X -> B + 2Y
B + B -> B + K
Y + K -> 0
)";

Crn intro() { return parseCrn(kIntro); }

}  // namespace

TEST(Reaction, RejectsOrderZeroAndThree) {
  EXPECT_THROW(Reaction({}, {{0, 1}}), ValidationError);
  EXPECT_THROW(Reaction({{0, 3}}, {}), ValidationError);
  EXPECT_THROW(Reaction({{0, 1}, {1, 2}}, {}), ValidationError);
  EXPECT_EQ(Reaction({{0, 2}}, {{0, 1}}).order(), 2u);
}

TEST(Reaction, MergesAndSortsTerms) {
  Reaction r({{1, 1}, {0, 1}}, {{2, 1}, {2, 1}});
  ASSERT_EQ(r.reactants().size(), 2u);
  EXPECT_EQ(r.reactants()[0].species, 0u);
  ASSERT_EQ(r.products().size(), 1u);
  EXPECT_EQ(r.products()[0].count, 2u);
  EXPECT_EQ(r.netChange(2), 2);
  EXPECT_EQ(r.netChange(0), -1);
}

TEST(Configuration, ArithmeticIsChecked) {
  Configuration a(std::vector<Count>{1, 2});
  Configuration b(std::vector<Count>{2, 1});
  EXPECT_EQ((a + b).counts()[0], 3u);
  EXPECT_THROW(a - b, ValidationError);
  EXPECT_EQ((3 * a)[1], 6u);
  EXPECT_FALSE(componentwiseLeq(a, b));
  EXPECT_TRUE(componentwiseLeq(a, a + b));
  Configuration big(std::vector<Count>{~Count{0}});
  EXPECT_THROW(big.add(0, 1), CountOverflowError);
  EXPECT_THROW(Configuration(1).add(0, -1), ValidationError);
}

TEST(Applicability, Examples) {
  Crn crn = parseCrn("species: A, K, X, Y\nX -> 2Y\nX + Y -> 0\nA + A -> A\n");
  auto rs = crn.reactions();
  EXPECT_TRUE(isApplicable(crn.configuration({{"X", 1}}), rs[0]));
  EXPECT_FALSE(isApplicable(crn.configuration({{"Y", 3}}), rs[1]));
  EXPECT_FALSE(isApplicable(crn.configuration({{"A", 1}}), rs[2]));
  EXPECT_TRUE(isApplicable(crn.configuration({{"A", 2}}), rs[2]));
}

TEST(ApplyReaction, Examples) {
  Crn crn = intro();
  auto rs = crn.reactions();
  Configuration c = crn.configuration({{"X", 3}});
  Configuration next = applyReaction(c, rs[0]);
  EXPECT_EQ(next, crn.configuration({{"X", 2}, {"B", 1}, {"Y", 2}}));
  EXPECT_EQ(c, crn.configuration({{"X", 3}}));  // value semantics
  EXPECT_EQ(applyReaction(crn.configuration({{"Y", 1}, {"K", 1}}), rs[2]),
            crn.emptyConfiguration());
  EXPECT_THROW(applyReaction(crn.emptyConfiguration(), rs[0]), NotApplicableError);

  Crn le = parseCrn("species: A\nA + A -> A\n");
  EXPECT_EQ(applyReaction(le.configuration({{"A", 2}}), le.reactions()[0]),
            le.configuration({{"A", 1}}));
}

TEST(ApplicableReactions, Examples) {
  Crn crn = intro();
  EXPECT_EQ(applicableReactions(crn.configuration({{"X", 2}}), crn),
            (std::vector<std::size_t>{0}));
  EXPECT_TRUE(applicableReactions(crn.emptyConfiguration(), crn).empty());
  EXPECT_EQ(applicableReactions(crn.configuration({{"B", 2}, {"Y", 1}, {"K", 1}}), crn),
            (std::vector<std::size_t>{1, 2}));
}

TEST(ParseCrn, ReactionExamples) {
  Crn crn = intro();
  const Reaction& r0 = crn.reactions()[0];
  EXPECT_EQ(r0.reactantCount(crn.id("X")), 1u);
  EXPECT_EQ(r0.productCount(crn.id("B")), 1u);
  EXPECT_EQ(r0.productCount(crn.id("Y")), 2u);
  EXPECT_TRUE(crn.reactions()[2].products().empty());
  EXPECT_EQ(crn.format(r0), "X -> B + 2Y");
  EXPECT_EQ(crn.format(crn.reactions()[2]), "K + Y -> 0");
}

TEST(ParseCrn, ErrorsCarryLineNumbers) {
  auto lineOf = [](const char* text) {
    try {
      parseCrn(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  EXPECT_EQ(lineOf("species: A, B\n\n3A -> B\n"), 3u);
  EXPECT_EQ(lineOf("species: A, A\n"), 1u);
  EXPECT_EQ(lineOf("species: A\nA -> Z\n"), 2u);
  EXPECT_EQ(lineOf("species: A\nbogus: A\n"), 2u);
  EXPECT_EQ(lineOf("species: A\nspecies: B\n"), 2u);
  EXPECT_EQ(lineOf("species: A\nA -> 01A\n"), 2u);
  EXPECT_EQ(lineOf("species: A\n0 -> A\n"), 2u);
  EXPECT_EQ(lineOf("species: A\nA ->\n"), 2u);
  EXPECT_EQ(lineOf("species: 1A\n"), 1u);
  EXPECT_THROW(parseCrn("species: A\ninputs: A\noutputs: A\n"), ParseError);
}

TEST(ParseCrn, RolesAndVoters) {
  Crn crn = parseCrn("species: N, Yes\ninputs: Yes\nyesvoters: Yes\nYes + N -> 2N\n");
  EXPECT_TRUE(crn.hasVoters());
  EXPECT_TRUE(crn.isYesVoter(crn.id("Yes")));
  EXPECT_FALSE(crn.isYesVoter(crn.id("N")));
  EXPECT_EQ(crn.species()[crn.id("Yes")].role, SpeciesRole::Input);
  EXPECT_FALSE(intro().hasVoters());
}

TEST(SerializeCrn, CanonicalForm) {
  EXPECT_EQ(serializeCrn(intro()),
            "species: B, K, X, Y\ninputs: X\noutputs: Y\nX -> B + 2Y\n2B -> B + K\nK + Y -> 0\n");
}

TEST(SerializeCrn, RoundTripsRandomNetworks) {
  std::mt19937_64 gen(12345);
  for (int trial = 0; trial < 300; ++trial) {
    CrnBuilder b;
    std::size_t n = 1 + gen() % 6;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) {
      names.push_back(std::string(1, static_cast<char>('A' + gen() % 26)) +
                      (gen() % 2 ? "_" + std::to_string(i) : std::string("'") + std::to_string(i)));
      b.addSpecies(names.back());
    }
    std::size_t reactions = gen() % 8;
    for (std::size_t r = 0; r < reactions; ++r) {
      NamedReaction nr;
      nr.reactants.push_back({names[gen() % n], 1});
      if (gen() % 2) nr.reactants.push_back({names[gen() % n], 1});
      std::size_t prods = gen() % 4;
      for (std::size_t p = 0; p < prods; ++p) {
        nr.products.push_back({names[gen() % n], 1 + static_cast<std::uint32_t>(gen() % 3)});
      }
      b.addReaction(nr);
    }
    if (n >= 2 && gen() % 2) {
      b.setInputs({names[0]});
      b.setOutputs({names[1]});
    }
    if (gen() % 3 == 0) b.setYesVoters({names[gen() % n]});
    Crn crn = b.build();
    std::string text = serializeCrn(crn);
    Crn back = parseCrn(text);
    ASSERT_EQ(back, crn) << text;
    ASSERT_EQ(serializeCrn(back), text);
  }
}

TEST(CrnBuilder, Validation) {
  CrnBuilder b;
  EXPECT_TRUE(b.addSpecies("A"));
  EXPECT_FALSE(b.addSpecies("A"));
  b.addReaction({{{"A", 1}}, {{"Q", 1}}});
  EXPECT_THROW(b.build(), ValidationError);
}

TEST(Crn, ConfigurationHelpers) {
  Crn crn = intro();
  std::vector<Count> x{4};
  Configuration c = crn.inputConfiguration(x);
  EXPECT_EQ(c[crn.id("X")], 4u);
  EXPECT_EQ(c.total(), 4u);
  EXPECT_EQ(crn.format(crn.configuration({{"Y", 2}, {"B", 1}})), "{B:1, Y:2}");
  EXPECT_EQ(crn.outputCounts(crn.configuration({{"Y", 7}})), (std::vector<Count>{7}));
  EXPECT_THROW(crn.id("nope"), ValidationError);
}
