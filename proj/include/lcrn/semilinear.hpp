#pragma once

// Semilinear functions given as an ordered list of affine partial pieces, each
// guarded by a Presburger domain formula. The evaluator here is the ground
// truth every compiled network is checked against.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace lcrn {

using Int = std::int64_t;
using InputVector = std::vector<Int>;

/// sum_i a_i x_i >= t
struct ThresholdAtom {
  std::vector<Int> a;
  Int t = 0;

  bool operator==(const ThresholdAtom&) const = default;
};

/// sum_i a_i x_i == r (mod m), with m >= 2 and 0 <= r < m.
struct ModAtom {
  std::vector<Int> a;
  Int m = 2;
  Int r = 0;

  bool operator==(const ModAtom&) const = default;
};

using Atom = std::variant<ThresholdAtom, ModAtom>;

std::size_t arity(const Atom& atom);
bool evalAtom(const Atom& atom, std::span<const Int> x);
/// `(ge a_1 ... a_k t)` / `(mod a_1 ... a_k m r)`.
std::string formatAtom(const Atom& atom);

/// Boolean combination of atoms.
class DomainPredicate {
 public:
  enum class Kind { True, False, Atom, Not, And, Or };

  static DomainPredicate constant(bool value);
  static DomainPredicate atom(Atom a);
  static DomainPredicate negate(DomainPredicate p);
  static DomainPredicate conjunction(std::vector<DomainPredicate> parts);
  static DomainPredicate disjunction(std::vector<DomainPredicate> parts);

  Kind kind() const { return kind_; }
  const Atom& atomValue() const { return *atom_; }
  std::span<const DomainPredicate> children() const { return children_; }

  /// Evaluates with a caller-supplied truth value per atom.
  bool evaluate(const std::function<bool(const Atom&)>& atomValue) const;
  bool evaluate(std::span<const Int> x) const;

  /// Every atom occurrence, left to right (duplicates kept).
  void collectAtoms(std::vector<Atom>& out) const;
  /// Throws ValidationError if an atom has the wrong arity or bad modulus.
  void validate(std::size_t k) const;

  /// S-expression form, e.g. `(and (ge 1 1) (not (ge 1 3)))`.
  std::string toString() const;

  bool operator==(const DomainPredicate& other) const;

 private:
  Kind kind_ = Kind::True;
  std::optional<Atom> atom_;
  std::vector<DomainPredicate> children_;
};

/// Parses the s-expression domain syntax for inputs of arity k.
DomainPredicate parseDomain(std::string_view text, std::size_t k);

/// y(j) = b_j + (1/d_j) sum_i n_{i,j} (x(i) - c_i), defined when x(i) >= c_i,
/// d_j divides the sum, and y(j) >= 0.
struct AffinePiece {
  std::size_t k = 0;
  std::size_t l = 0;
  std::vector<std::vector<Int>> coeff;  ///< k rows of l entries (n_{i,j})
  std::vector<Int> denom;               ///< d_j >= 1
  std::vector<Int> bOffset;             ///< b_j >= 0
  std::vector<Int> cOffset;             ///< c_i >= 0

  /// Throws ValidationError on shape or sign violations.
  void validate() const;

  bool operator==(const AffinePiece&) const = default;
};

using FunctionValue = std::vector<Int>;

/// Exact evaluation; throws DomainError outside the piece's definition.
FunctionValue evalPiece(const AffinePiece& p, std::span<const Int> x);
/// Like evalPiece but returns nullopt instead of throwing.
std::optional<FunctionValue> tryEvalPiece(const AffinePiece& p, std::span<const Int> x);

struct GuardedPiece {
  AffinePiece piece;
  DomainPredicate domain;

  bool operator==(const GuardedPiece&) const = default;
};

struct SemilinearFunctionSpec {
  std::size_t k = 0;
  std::size_t l = 0;
  std::vector<GuardedPiece> pieces;
  /// Species names for inputs/outputs of compiled networks. Empty means the
  /// defaults: X (k = 1) or X1..Xk, and Y (l = 1) or Y1..Yl.
  std::vector<std::string> inputNames;
  std::vector<std::string> outputNames;

  /// Structural checks only (arity, shapes, signs).
  void validateStructure() const;

  std::vector<std::string> resolvedInputNames() const;
  std::vector<std::string> resolvedOutputNames() const;

  bool operator==(const SemilinearFunctionSpec&) const = default;
};

/// Index of the first piece whose domain holds at x, if any.
std::optional<std::size_t> selectPiece(const SemilinearFunctionSpec& spec, std::span<const Int> x);

/// Value of the first piece (in list order) whose domain holds. Throws
/// CoverageError if none does, DomainError if that piece is undefined at x.
FunctionValue evalFunction(const SemilinearFunctionSpec& spec, std::span<const Int> x);

struct ValidationReport {
  bool ok = true;
  std::size_t checked = 0;
  std::optional<InputVector> counterexample;
  std::string message;
};

/// Exhaustively checks every x in [0, bound]^k: some domain holds and the
/// selected piece evaluates without a domain error.
ValidationReport validate(const SemilinearFunctionSpec& spec, Int bound);

/// Calls fn on every x in [0, bound]^k in lexicographic order.
void forEachInput(std::size_t k, Int bound, const std::function<void(const InputVector&)>& fn);
/// Calls fn on every x in N^k with ||x||_1 <= maxNorm.
void forEachInputUpToNorm(std::size_t k, Int maxNorm,
                          const std::function<void(const InputVector&)>& fn);

}  // namespace lcrn
