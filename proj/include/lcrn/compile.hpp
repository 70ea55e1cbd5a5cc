#pragma once

// Full leaderless compiler for semilinear functions: input fan-out, one
// predicate decider and one affine fragment per piece, and the layer that
// moves each fragment's diff-represented output into the shared Y_j while
// its gate votes yes and back out while it votes no.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "lcrn/compile_affine.hpp"
#include "lcrn/compile_predicate.hpp"
#include "lcrn/crn.hpp"
#include "lcrn/semilinear.hpp"

namespace lcrn {

struct CompileOptions {
  /// validate(spec, bound) must pass before compiling; 0 skips the check.
  Int validationBound = 8;
  /// Reject specs with f(0) != 0 instead of warning. A leaderless network
  /// starting from the empty configuration can only output 0.
  bool strictZero = false;
  PredicateOptions predicate;
};

enum class RoleKind { Input, Predicate, Affine, Activation, GlobalOutput };
std::string_view toString(RoleKind k);

struct SpeciesRoleInfo {
  RoleKind kind = RoleKind::Input;
  std::size_t piece = 0;   ///< 1-based; 0 when not tied to a piece
  std::size_t output = 0;  ///< 1-based; 0 when not tied to an output
};

struct CompiledPiece {
  std::size_t index = 0;
  std::string gate;  ///< s-expression of dom_i and not dom_1 ... dom_{i-1}
  std::vector<std::string> yesVoters;
  std::vector<std::string> noVoters;
  std::vector<std::string> outputP;  ///< YhP per output
  std::vector<std::string> outputC;
  std::vector<std::string> activeP;  ///< YP per output
  std::vector<std::string> activeC;
  std::vector<std::string> parked;   ///< M per output
  Count affineMassBound = 0;
  bool monotone = true;
};

struct CompiledCrn {
  Crn crn;
  SemilinearFunctionSpec spec;
  /// Every reachable configuration from x has at most massBound * ||x||
  /// molecules.
  Count massBound = 0;
  std::map<std::string, Count> weights;
  std::map<std::string, SpeciesRoleInfo> roles;
  std::vector<CompiledPiece> pieces;
  std::vector<std::string> annihilators;  ///< K per output
  std::vector<std::string> warnings;
};

/// Throws ValidationError when the function spec fails validation or a name collides
/// with a generated species.
CompiledCrn compile(const SemilinearFunctionSpec& spec, const CompileOptions& options = {});

/// #Y_j == #K_j + sum_i (#YP_{i,j} + #M_{i,j}) for every j.
bool auditInvariant(const Configuration& c, const CompiledCrn& compiled);

/// Indices of reactions whose net stoichiometry changes either side of the
/// audit identity by different amounts. Empty means every reaction
/// preserves it.
std::vector<std::size_t> auditReactionDeltas(const CompiledCrn& compiled);

/// Volume used for simulating compiled networks: massBound * ||x||, at least 1.
double compiledVolume(const CompiledCrn& compiled, std::span<const Count> x);

/// JSON sidecar: roles, weights, mass bound, piece map, warnings.
std::string metadataJson(const CompiledCrn& compiled,
                         const std::vector<std::string>& provenance = {});

}  // namespace lcrn
