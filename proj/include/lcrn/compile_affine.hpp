#pragma once

// Leaderless CRN fragment for one affine piece. Outputs are diff-represented:
// the fragment monotonically produces YhP_j and YhC_j with
// #YhP_j - #YhC_j = y(j) once it quiesces on a domain input.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "lcrn/crn.hpp"
#include "lcrn/semilinear.hpp"

namespace lcrn {

struct AffineFragment {
  std::size_t pieceIndex = 0;  // 1-based
  CrnBuilder builder;
  /// Species consumed from outside, one per input coordinate.
  std::vector<std::string> inputAliases;
  std::vector<std::string> outputP;
  std::vector<std::string> outputC;
  /// Weight of every fragment species. No reaction increases the weighted
  /// molecule count and every weight is >= 1, so the count never exceeds
  /// sum_i weight(inputAliases[i]) * x(i).
  std::map<std::string, Count> weights;
  /// max_i weight(inputAliases[i]).
  Count massBound = 0;
};

/// Species-name prefix for piece i, e.g. "A2_".
std::string affinePrefix(std::size_t pieceIndex);

/// Throws ValidationError for an invalid piece; pieceIndex is 1-based.
AffineFragment compileAffine(const AffinePiece& piece, std::size_t pieceIndex);

/// The c-offset stage alone: species `base + "_m"` (m in 1..c) and
/// `out`, with the merging table that turns m copies of C_1 into
/// max(0, m - c) copies of `out`. For c = 0 a single C_1 -> out.
CrnBuilder cOffsetStage(const std::string& base, Count c, const std::string& out);

/// True iff no reaction has negative net stoichiometry on any of `species`.
bool isMonotone(const Crn& crn, const std::vector<std::string>& species);
bool isMonotone(const AffineFragment& fragment);

struct DiffOutput {
  std::vector<Count> yP;
  std::vector<Count> yC;
};

/// Runs the fragment in isolation from x copies of its input aliases and
/// returns the output counts shared by every terminal configuration.
/// Exhaustive: throws NondeterministicOutputError if the reachability graph
/// is cyclic or terminal outputs differ, CappedGraphError if the node budget
/// is hit.
DiffOutput fragmentQuiescentOutput(const AffineFragment& fragment, std::span<const Count> x,
                                   std::size_t nodeBudget = 2'000'000);

}  // namespace lcrn
