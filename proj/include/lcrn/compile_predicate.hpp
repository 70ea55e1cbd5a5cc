#pragma once

// Leaderless predicate deciders. Every agent carries one component per atom:
//   threshold sum a.x >= t: a leader with a saturating sum in [-s, s], or a
//     non-leader holding a leftover and the last vote it was told;
//   mod sum a.x == r (mod m): a carrier with a residue, or a follower with a
//     vote bit.
// All components step together on each interaction; the state votes the
// formula over its component votes, so every species is a voter and the
// molecule count never changes.

#include <cstddef>
#include <string>
#include <vector>

#include "lcrn/crn.hpp"
#include "lcrn/semilinear.hpp"

namespace lcrn {

struct PredicateOptions {
  /// Above this many species a warning is recorded.
  std::size_t speciesBudget = 512;
  /// Hard limit; the closure throws ValidationError past it.
  std::size_t speciesLimit = 200'000;
};

struct PredicateCrd {
  CrnBuilder builder;
  DomainPredicate formula;
  /// Distinct atoms in first-occurrence order; one component each.
  std::vector<Atom> atoms;
  /// Saturation bound per atom (0 for mod atoms).
  std::vector<Int> bounds;
  /// Initial species of an agent created from input coordinate i.
  std::vector<std::string> inputAliases;
  std::vector<std::string> yesVoters;
  std::vector<std::string> noVoters;
  std::vector<std::string> warnings;

  std::size_t numSpecies() const { return yesVoters.size() + noVoters.size(); }
};

/// s = |t| + sum |a_i| + 1.
Int saturationBound(const ThresholdAtom& atom);

/// Decider for `formula` over inputs of arity k; species names start with
/// `prefix`.
PredicateCrd compilePredicate(const DomainPredicate& formula, std::size_t k,
                              const std::string& prefix, const PredicateOptions& options = {});

PredicateCrd compileAtomThreshold(const ThresholdAtom& atom, const std::string& prefix = "T_");
PredicateCrd compileAtomMod(const ModAtom& atom, const std::string& prefix = "R_");

/// dom_i and not dom_1 ... and not dom_{i-1}; i is 1-based.
DomainPredicate pieceGate(const SemilinearFunctionSpec& spec, std::size_t i);

/// Species-name prefix of piece i's decider, e.g. "P2_".
std::string predicatePrefix(std::size_t pieceIndex);

/// Self-contained CRD: input species `inputNames` (default X / X1..Xk) each
/// turn into their alias and vote like it.
Crn standaloneDecider(const PredicateCrd& crd, std::vector<std::string> inputNames = {});

}  // namespace lcrn
