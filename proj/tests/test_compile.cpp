#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lcrn/compile.hpp"
#include "lcrn/errors.hpp"
#include "lcrn/fnspec_format.hpp"
#include "lcrn/kinetics.hpp"
#include "lcrn/model_check.hpp"

using namespace lcrn;

namespace {

SemilinearFunctionSpec loadCorpus(const std::string& name) {
  std::ifstream in(std::string(LCRN_CORPUS_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return parseSpec(ss.str());
}

const char* kCorpus[] = {"x_plus_1.fnspec", "max_2x1_minus_x2.fnspec", "parity.fnspec"};

// Runs to output silence and returns the final Y_1 count, checking the mass
// bound and the audit identity at every event.
Count simulateOutput(const CompiledCrn& c, const std::vector<Count>& x, std::uint64_t seed) {
  Configuration init = c.crn.inputConfiguration(x);
  Count n = 0;
  for (Count v : x) n += v;
  SimulationOptions opts;
  opts.massLimit = c.massBound * n;
  opts.observer = [&](const Configuration& cfg) {
    ASSERT_TRUE(auditInvariant(cfg, c));
  };
  Trajectory t = simulate(c.crn, init, Volume(compiledVolume(c, x)),
                          StopRule::outputSilence(defaultSilenceWindow(init)), seed, opts);
  return t.final[c.crn.outputs()[0]];
}

}  // namespace

TEST(Compile, XPlusOneShape) {
  CompiledCrn c = compile(loadCorpus("x_plus_1.fnspec"));
  EXPECT_EQ(c.crn.numReactions(), 25u);
  EXPECT_EQ(c.crn.numSpecies(), 19u);
  EXPECT_EQ(c.massBound, 6u);
  ASSERT_EQ(c.pieces.size(), 1u);
  EXPECT_EQ(c.pieces[0].gate, "(ge 1 0)");
  EXPECT_TRUE(c.pieces[0].monotone);
  EXPECT_EQ(c.annihilators, (std::vector<std::string>{"K1"}));
  ASSERT_EQ(c.warnings.size(), 1u);
  EXPECT_NE(c.warnings[0].find("f(0)"), std::string::npos);
}

TEST(Compile, StrictZeroRejectsNonzeroAtOrigin) {
  CompileOptions opts;
  opts.strictZero = true;
  EXPECT_THROW(compile(loadCorpus("x_plus_1.fnspec"), opts), ValidationError);
  EXPECT_NO_THROW(compile(loadCorpus("max_2x1_minus_x2.fnspec"), opts));
}

TEST(Compile, ValidationFailureNamesInput) {
  SemilinearFunctionSpec spec = loadCorpus("x_plus_1.fnspec");
  spec.pieces[0].domain = parseDomain("(ge 1 2)", 1);
  try {
    compile(spec);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("x = (0)"), std::string::npos) << e.what();
  }
  CompileOptions skip;
  skip.validationBound = 0;
  EXPECT_NO_THROW(compile(spec, skip));
}

TEST(Compile, NameCollisionIsRejected) {
  SemilinearFunctionSpec spec = loadCorpus("x_plus_1.fnspec");
  spec.inputNames = {"K1"};
  EXPECT_THROW(compile(spec), ValidationError);
}

TEST(Compile, RolesCoverEverySpecies) {
  for (const char* name : kCorpus) {
    CompiledCrn c = compile(loadCorpus(name));
    for (const Species& s : c.crn.species()) {
      EXPECT_TRUE(c.roles.count(s.name)) << s.name;
      EXPECT_TRUE(c.weights.count(s.name)) << s.name;
    }
    EXPECT_EQ(c.roles.at(c.crn.name(c.crn.outputs()[0])).kind, RoleKind::GlobalOutput);
  }
}

TEST(Compile, WeightedCountNeverIncreases) {
  // With every weight >= 1 this bounds the molecule count by massBound * ||x||.
  for (const char* name : kCorpus) {
    CompiledCrn c = compile(loadCorpus(name));
    for (SpeciesId x : c.crn.inputs()) EXPECT_LE(c.weights.at(c.crn.name(x)), c.massBound);
    for (const Reaction& r : c.crn.reactions()) {
      std::int64_t delta = 0;
      for (auto [s, d] : r.delta()) {
        EXPECT_GE(c.weights.at(c.crn.name(s)), 1u);
        delta += d * static_cast<std::int64_t>(c.weights.at(c.crn.name(s)));
      }
      EXPECT_LE(delta, 0) << name << ": " << c.crn.format(r);
    }
  }
}

TEST(Audit, ReactionDeltasPreserveIdentity) {
  for (const char* name : kCorpus) {
    CompiledCrn c = compile(loadCorpus(name));
    EXPECT_TRUE(auditReactionDeltas(c).empty()) << name;
    EXPECT_TRUE(auditInvariant(c.crn.inputConfiguration(std::vector<Count>(c.spec.k, 3)), c));
  }
}

TEST(Audit, DetectsABrokenIdentity) {
  CompiledCrn c = compile(loadCorpus("x_plus_1.fnspec"));
  Configuration cfg = c.crn.emptyConfiguration();
  cfg.set(c.crn.id("Y"), 1);
  EXPECT_FALSE(auditInvariant(cfg, c));
  cfg.set(c.crn.id("K1"), 1);
  EXPECT_TRUE(auditInvariant(cfg, c));
}

TEST(CompiledSimulation, MaxExample) {
  CompiledCrn c = compile(loadCorpus("max_2x1_minus_x2.fnspec"));
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    EXPECT_EQ(simulateOutput(c, {3, 2}, seed), 4u);
    EXPECT_EQ(simulateOutput(c, {1, 5}, seed), 0u);
  }
}

TEST(CompiledSimulation, ParityExample) {
  CompiledCrn c = compile(loadCorpus("parity.fnspec"));
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    EXPECT_EQ(simulateOutput(c, {5}, seed), 6u);
    EXPECT_EQ(simulateOutput(c, {8}, seed), 4u);
  }
}

TEST(CompiledModelCheck, XPlusOneCertifiedAtOne) {
  CompiledCrn c = compile(loadCorpus("x_plus_1.fnspec"));
  Configuration init = c.crn.inputConfiguration(std::vector<Count>{1});
  Count want = 2;
  Verdict v = checkStableComputation(c.crn, init, std::span<const Count>(&want, 1));
  EXPECT_EQ(v.kind, Verdict::Kind::Certified) << formatVerdict(v, c.crn);
  ReachabilityGraph g = buildGraph(c.crn, init);
  for (NodeId n = 0; n < g.numNodes(); ++n) {
    ASSERT_LE(g.config(n).total(), c.massBound);
    ASSERT_TRUE(auditInvariant(g.config(n), c));
  }
}

TEST(Metadata, JsonSidecar) {
  CompiledCrn c = compile(loadCorpus("max_2x1_minus_x2.fnspec"));
  auto doc = nlohmann::json::parse(metadataJson(c, {"lcrn test"}));
  EXPECT_EQ(doc["mass_bound"], c.massBound);
  EXPECT_EQ(doc["species"], c.crn.numSpecies());
  EXPECT_EQ(doc["reactions"], c.crn.numReactions());
  EXPECT_EQ(doc["provenance"][0], "lcrn test");
  EXPECT_EQ(doc["pieces"].size(), 2u);
  EXPECT_EQ(doc["roles"]["X1"]["kind"], "input");
  EXPECT_EQ(doc["roles"]["Y"]["kind"], "output");
  EXPECT_EQ(doc["roles"].size(), c.crn.numSpecies());
}

TEST(CompiledVolume, ScalesWithNorm) {
  CompiledCrn c = compile(loadCorpus("x_plus_1.fnspec"));
  std::vector<Count> ten{10}, zero{0};
  EXPECT_DOUBLE_EQ(compiledVolume(c, ten), 60.0);
  EXPECT_DOUBLE_EQ(compiledVolume(c, zero), 1.0);
}
