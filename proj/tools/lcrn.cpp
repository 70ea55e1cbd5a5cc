// lcrn: compile semilinear function specs into leaderless CRNs, simulate,
// model-check and benchmark them.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lcrn/bench.hpp"
#include "lcrn/compile.hpp"
#include "lcrn/crn_format.hpp"
#include "lcrn/errors.hpp"
#include "lcrn/fnspec_format.hpp"
#include "lcrn/kinetics.hpp"
#include "lcrn/model_check.hpp"

#ifndef LCRN_VERSION
#define LCRN_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using namespace lcrn;

namespace {

enum Exit {
  kOk = 0,
  kFailure = 1,
  kParse = 2,
  kValidation = 3,
  kEventBudget = 4,
  kRefuted = 5,
  kInconclusive = 6,
  kBand = 7,
};

const char* kFooter = R"(Exit codes: 0 ok, 1 other error, 2 parse error, 3 validation failure,
4 event budget exhausted, 5 refuted, 6 inconclusive, 7 bench band violation.

.crn grammar (one item per line, '#' starts a comment):
  header   := ("species"|"inputs"|"outputs"|"yesvoters") ":" [name {"," name}]
  reaction := side "->" side
  side     := "0" | term {"+" term}
  term     := [coeff] name          coeff: 1-9 then digits, at most 9 digits
  name     := (letter|"_") {letter|digit|"_"|"^"|"'"}
  Every species is declared under species:. Reactants total 1 or 2 molecules.

.fnspec grammar (JSON):
  {"arity_in": k, "arity_out": l, ["inputs": [k names],] ["outputs": [l names],]
   "pieces": [{"coeff": [k rows of l ints], "denom": [l ints >= 1],
               "b": [l ints >= 0], "c": [k ints >= 0], "domain": formula}, ...]}
  piece:   y_j = b_j + (1/d_j) sum_i n_ij (x_i - c_i); first matching domain wins
  formula := true | false | (ge a_1..a_k t) | (mod a_1..a_k m r)
           | (not f) | (and f...) | (or f...)

Artifacts go to --out-dir, default $LCRN_OUT_DIR or the current directory.
Every artifact starts with provenance lines: version, seed, command line.
Randomness: run seed s; bench trial t at size index i uses
deriveSeed(s, i, t) (SplitMix64 finalizer, see README).)";

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeFile(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

std::string defaultOutDir() {
  const char* env = std::getenv("LCRN_OUT_DIR");
  return env && *env ? env : ".";
}

/// `X1=5,X2=3` style assignments.
std::map<std::string, Count> parseAssignments(const std::vector<std::string>& items) {
  std::map<std::string, Count> out;
  for (const std::string& group : items) {
    std::stringstream ss(group);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      auto eq = item.find('=');
      if (eq == std::string::npos) throw ParseError("expected NAME=COUNT, got '" + item + "'");
      std::string name = item.substr(0, eq);
      std::string value = item.substr(eq + 1);
      if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos) {
        throw ParseError("bad count in '" + item + "'");
      }
      if (out.count(name)) throw ParseError("'" + name + "' given twice");
      out[name] = std::stoull(value);
    }
  }
  return out;
}

std::vector<Count> parseCountList(const std::string& text) {
  std::vector<Count> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos) {
      throw ParseError("bad number '" + item + "' in list '" + text + "'");
    }
    out.push_back(std::stoull(item));
  }
  if (out.empty()) throw ParseError("empty list");
  return out;
}

/// Input configuration; names must be input species of the network.
Configuration inputFrom(const Crn& crn, const std::map<std::string, Count>& assignments) {
  Configuration c = crn.emptyConfiguration();
  for (const auto& [name, count] : assignments) {
    auto id = crn.find(name);
    if (!id) throw ValidationError("unknown species '" + name + "'");
    if (std::find(crn.inputs().begin(), crn.inputs().end(), *id) == crn.inputs().end()) {
      throw ValidationError("'" + name + "' is not an input species");
    }
    c.set(*id, count);
  }
  return c;
}

struct Provenance {
  std::uint64_t seed = 0;
  std::string command;

  std::vector<std::string> lines() const {
    return {std::string("lcrn ") + LCRN_VERSION, "seed=" + std::to_string(seed),
            "command: " + command};
  }
};

/// Command line without output locations, so reruns into other directories
/// produce identical artifacts.
std::string commandLine(int argc, char** argv) {
  std::string out = "lcrn";
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "-o" || a == "--out" || a == "--out-dir") {
      ++i;
      continue;
    }
    if (a.rfind("--out=", 0) == 0 || a.rfind("--out-dir=", 0) == 0) continue;
    out += " " + a;
  }
  return out;
}

StopRule parseStop(const std::vector<std::string>& specs, const Configuration& init) {
  StopRule rule;
  for (const std::string& s : specs) {
    auto eq = s.find('=');
    std::string key = s.substr(0, eq);
    std::string value = eq == std::string::npos ? "" : s.substr(eq + 1);
    try {
      if (key == "quiescence" && value.empty()) {
        continue;
      } else if (key == "horizon" && !value.empty()) {
        std::size_t used = 0;
        double t = std::stod(value, &used);
        if (used != value.size() || !(t > 0)) throw std::invalid_argument(value);
        rule.horizon = t;
      } else if (key == "events" && !value.empty()) {
        rule.maxEvents = parseCountList(value).at(0);
      } else if (key == "silence") {
        rule.silenceWindow = value.empty() ? defaultSilenceWindow(init) : parseCountList(value).at(0);
      } else {
        throw std::invalid_argument(s);
      }
    } catch (const std::logic_error&) {
      throw ParseError("bad --stop '" + s +
                       "' (quiescence | horizon=T | events=N | silence[=W])");
    }
  }
  return rule;
}

int cmdCompile(const std::string& specPath, const std::string& outArg, const std::string& outDir,
               Int bound, bool strictZero, const Provenance& prov) {
  SemilinearFunctionSpec spec = parseSpec(readFile(specPath));
  CompileOptions options;
  options.validationBound = bound;
  options.strictZero = strictZero;
  CompiledCrn compiled = compile(spec, options);

  fs::path out = outArg.empty() ? fs::path(outDir) / fs::path(specPath).stem().concat(".crn")
                                : fs::path(outArg);
  std::string header;
  for (const auto& line : prov.lines()) header += "# " + line + "\n";
  header += "# mass bound " + std::to_string(compiled.massBound) + "\n";
  writeFile(out, header + serializeCrn(compiled.crn));
  fs::path meta = out;
  meta += ".meta.json";
  writeFile(meta, metadataJson(compiled, prov.lines()));

  for (const auto& w : compiled.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << "wrote " << out.string() << " and " << meta.string() << '\n';
  std::cout << "species: " << compiled.crn.numSpecies() << '\n';
  std::cout << "reactions: " << compiled.crn.numReactions() << '\n';
  std::cout << "mass_bound: " << compiled.massBound << '\n';
  return kOk;
}

int cmdSimulate(const std::string& crnPath, const std::vector<std::string>& in,
                std::optional<double> volume, const std::string& record,
                const std::vector<std::string>& stopSpecs, const std::string& outArg,
                const std::string& outDir, const Provenance& prov) {
  Crn crn = parseCrn(readFile(crnPath));
  Configuration init = inputFrom(crn, parseAssignments(in));
  StopRule stop = parseStop(stopSpecs, init);
  RecordMode mode = parseRecordMode(record);
  double v = volume ? *volume : static_cast<double>(std::max<Count>(1, init.total()));
  Trajectory t = simulate(crn, init, Volume(v), stop, prov.seed, {mode, std::nullopt, {}});

  fs::path out = outArg.empty()
                     ? fs::path(outDir) / fs::path(crnPath).stem().concat(".trajectory.csv")
                     : fs::path(outArg);
  std::ostringstream csv;
  std::vector<std::string> lines = prov.lines();
  lines.push_back("volume=" + std::to_string(v));
  writeTrajectoryCsv(csv, t, crn, lines);
  writeFile(out, csv.str());

  std::cout << "trajectory: " << out.string() << '\n';
  std::cout << "stop: " << toString(t.reason) << '\n';
  std::cout << "events: " << t.eventCount << '\n';
  std::cout << "time: " << t.finalTime << '\n';
  std::cout << "stabilization_time: " << stabilizationTime(t, crn) << '\n';
  std::cout << "final: " << crn.format(t.final) << '\n';
  if (crn.hasVoters()) {
    auto vote = consensusVote(t.final, crn);
    std::cout << "vote: " << (vote ? (*vote ? "yes" : "no") : "undefined") << '\n';
  }
  std::string outputs;
  for (SpeciesId s : crn.outputs()) {
    outputs += (outputs.empty() ? "" : " ") + crn.name(s) + "=" + std::to_string(t.final[s]);
  }
  std::cout << "output: " << (outputs.empty() ? "(none)" : outputs) << '\n';
  return t.reason == StopReason::EventCap ? kEventBudget : kOk;
}

int cmdCheck(const std::string& crnPath, const std::vector<std::string>& in,
             const std::vector<std::string>& expect, const std::string& expectVote,
             std::size_t budget) {
  Crn crn = parseCrn(readFile(crnPath));
  Configuration init = inputFrom(crn, parseAssignments(in));
  Verdict v;
  if (!expectVote.empty()) {
    if (expectVote != "yes" && expectVote != "no") {
      throw ParseError("--expect-vote takes yes or no");
    }
    v = checkStableDecision(crn, init, expectVote == "yes", budget);
  } else {
    auto want = parseAssignments(expect);
    std::vector<Count> expected;
    for (SpeciesId s : crn.outputs()) {
      auto it = want.find(crn.name(s));
      if (it == want.end()) throw ValidationError("no expected value for output " + crn.name(s));
      expected.push_back(it->second);
      want.erase(it);
    }
    if (!want.empty()) throw ValidationError("'" + want.begin()->first + "' is not an output");
    v = checkStableComputation(crn, init, expected, budget);
  }
  std::cout << formatVerdict(v, crn);
  switch (v.kind) {
    case Verdict::Kind::Certified: return kOk;
    case Verdict::Kind::Refuted: return kRefuted;
    case Verdict::Kind::Inconclusive: return kInconclusive;
  }
  return kInconclusive;
}

int cmdBench(const std::string& target, std::string sizesArg, std::size_t trials,
             const std::string& rayArg, std::size_t threads, const std::string& outDir,
             const Provenance& prov) {
  BenchOptions options{prov.seed, threads};
  ScalingReport report;
  std::string stem = target;
  auto sizesOr = [&](const char* fallback) {
    return parseCountList(sizesArg.empty() ? fallback : sizesArg);
  };
  if (target == "unimolecular") {
    report = benchUnimolecular(sizesOr("100,1000"), trials ? trials : 500, options);
  } else if (target == "leader") {
    report = benchLeaderElection(sizesOr("100,1000"), trials ? trials : 500, options);
  } else if (target == "catalytic") {
    report = benchCatalytic(sizesOr("100,1000"), trials ? trials : 500, options);
  } else if (target == "double") {
    Experiment e;
    e.pattern = "double";
    e.crn = parseCrn("species: X, Y\ninputs: X\noutputs: Y\nX -> 2Y\n");
    e.init = [crn = e.crn](Count n) { return crn.configuration({{"X", n}}); };
    e.volume = [](Count n) { return static_cast<double>(n); };
    e.oracle = [crn = e.crn](Count n, const Configuration& c) { return c[crn.id("Y")] == 2 * n; };
    report = runExperiment(e, sizesOr("50,100,200,400,800"), trials ? trials : 100, options);
  } else {
    CompiledCrn compiled = compile(parseSpec(readFile(target)));
    std::vector<Count> ray = rayArg.empty() ? std::vector<Count>(compiled.spec.k, 1)
                                            : parseCountList(rayArg);
    stem = fs::path(target).stem().string();
    report = benchCompiled(compiled, ray, sizesOr("50,100,200,400,800"), trials ? trials : 100,
                           options);
    report.pattern = stem;
  }

  std::vector<std::string> lines = prov.lines();
  fs::path base = fs::path(outDir) / stem;
  std::ostringstream samples, summary, dat;
  writeSamplesCsv(samples, report, lines);
  writeSummary(summary, report, lines);
  writeGnuplotData(dat, report);
  writeFile(fs::path(base).concat(".samples.csv"), samples.str());
  writeFile(fs::path(base).concat(".summary.txt"), summary.str());
  writeFile(fs::path(base).concat(".dat"), dat.str());
  std::cout << summary.str();
  return report.violations().empty() ? kOk : kBand;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Leaderless chemical reaction network compiler, simulator and checker", "lcrn"};
  app.footer(kFooter);
  app.set_version_flag("--version", LCRN_VERSION);
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  std::string outDir = defaultOutDir();
  std::string out;

  auto* compileCmd = app.add_subcommand("compile", "compile a .fnspec into a .crn plus sidecar");
  std::string specPath;
  Int bound = 8;
  bool strictZero = false;
  compileCmd->add_option("fnspec", specPath, "function spec")->required();
  compileCmd->add_option("-o,--out", out, "output .crn path (default <out-dir>/<stem>.crn)");
  compileCmd->add_option("--out-dir", outDir, "artifact directory");
  compileCmd->add_option("--bound", bound, "validate coverage on [0,B]^k first (0 skips)")
      ->check(CLI::NonNegativeNumber);
  compileCmd->add_flag("--strict-zero", strictZero, "reject specs with f(0) != 0");

  auto* simCmd = app.add_subcommand("simulate", "stochastic simulation of a .crn");
  std::string crnPath;
  std::vector<std::string> in;
  std::optional<double> volume;
  std::string record = "full";
  std::vector<std::string> stop;
  simCmd->add_option("crn", crnPath, "network")->required();
  simCmd->add_option("--in", in, "input counts, e.g. X1=5,X2=3 (unlisted inputs are 0)");
  simCmd->add_option("--seed", seed, "random seed");
  simCmd->add_option("--volume", volume, "volume (default: initial molecule count)")
      ->check(CLI::PositiveNumber);
  simCmd->add_option("--record", record, "full | sparse | final");
  simCmd->add_option("--stop", stop,
                     "quiescence | horizon=T | events=N | silence[=W]; repeatable, first to "
                     "fire wins");
  simCmd->add_option("-o,--out", out, "trajectory CSV path");
  simCmd->add_option("--out-dir", outDir, "artifact directory");

  auto* checkCmd = app.add_subcommand("check", "exhaustive stable-computation check");
  std::vector<std::string> expect;
  std::string expectVote;
  std::size_t budget = kDefaultNodeBudget;
  checkCmd->add_option("crn", crnPath, "network")->required();
  checkCmd->add_option("--in", in, "input counts");
  checkCmd->add_option("--expect", expect, "expected outputs, e.g. Y=4");
  checkCmd->add_option("--expect-vote", expectVote, "yes | no (decider mode)");
  checkCmd->add_option("--budget", budget, "node budget")->check(CLI::PositiveNumber);

  auto* benchCmd = app.add_subcommand(
      "bench", "timing runs: unimolecular | leader | catalytic | double | <file.fnspec>");
  std::string target, sizes, ray;
  std::size_t trials = 0, threads = 0;
  benchCmd->add_option("target", target, "pattern id or .fnspec path")->required();
  benchCmd->add_option("--sizes", sizes, "comma-separated increasing sizes");
  benchCmd->add_option("--trials", trials, "trials per size (default 500, compiled 100)");
  benchCmd->add_option("--ray", ray, "input direction for compiled specs, e.g. 1,2");
  benchCmd->add_option("--seed", seed, "base seed");
  benchCmd->add_option("--threads", threads, "worker threads (0: all cores)");
  benchCmd->add_option("--out-dir", outDir, "artifact directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }

  Provenance prov{seed, commandLine(argc, argv)};
  try {
    if (compileCmd->parsed()) return cmdCompile(specPath, out, outDir, bound, strictZero, prov);
    if (simCmd->parsed()) return cmdSimulate(crnPath, in, volume, record, stop, out, outDir, prov);
    if (checkCmd->parsed()) return cmdCheck(crnPath, in, expect, expectVote, budget);
    if (benchCmd->parsed()) return cmdBench(target, sizes, trials, ray, threads, outDir, prov);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const ValidationError& e) {
    std::cerr << "validation failed: " << e.what() << '\n';
    return kValidation;
  } catch (const CoverageError& e) {
    std::cerr << "validation failed: " << e.what() << '\n';
    return kValidation;
  } catch (const DomainError& e) {
    std::cerr << "validation failed: " << e.what() << '\n';
    return kValidation;
  } catch (const IncorrectOutputError& e) {
    std::cerr << "incorrect output: " << e.what() << '\n';
    return kBand;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
