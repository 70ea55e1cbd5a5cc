#pragma once

// Core chemical reaction network model: species, unit-rate reactions of order
// one or two, nonnegative integer configurations, and single-step semantics.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lcrn {

using SpeciesId = std::uint32_t;
using Count = std::uint64_t;

enum class SpeciesRole { Input, Output, Internal };

std::string_view toString(SpeciesRole role);

struct Species {
  std::string name;
  SpeciesRole role = SpeciesRole::Internal;

  bool operator==(const Species&) const = default;
};

/// `count` copies of one species on one side of a reaction.
struct Term {
  SpeciesId species = 0;
  std::uint32_t count = 0;

  bool operator==(const Term&) const = default;
};

/// Identifier rule shared by every text format: first character is a letter
/// or `_`, the rest are letters, digits, `_`, `^` or `'`.
bool isValidSpeciesName(std::string_view name);

/// A reaction with rate constant 1. Both sides are stored merged and sorted by
/// species id; the reactant side has total multiplicity 1 or 2.
class Reaction {
 public:
  Reaction(std::vector<Term> reactants, std::vector<Term> products);

  std::span<const Term> reactants() const { return reactants_; }
  std::span<const Term> products() const { return products_; }

  /// Total reactant multiplicity (1 = unimolecular, 2 = bimolecular).
  std::uint32_t order() const { return order_; }

  /// Sparse net stoichiometry, products minus reactants, zero entries dropped.
  std::span<const std::pair<SpeciesId, std::int64_t>> delta() const { return delta_; }
  std::int64_t netChange(SpeciesId s) const;

  std::uint32_t reactantCount(SpeciesId s) const;
  std::uint32_t productCount(SpeciesId s) const;

  bool operator==(const Reaction& other) const {
    return reactants_ == other.reactants_ && products_ == other.products_;
  }

 private:
  std::vector<Term> reactants_;
  std::vector<Term> products_;
  std::vector<std::pair<SpeciesId, std::int64_t>> delta_;
  std::uint32_t order_ = 0;
};

/// Species counts, dense over the species of one CRN. Arithmetic is checked:
/// negative results and 64-bit overflow throw instead of wrapping.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(std::size_t numSpecies) : counts_(numSpecies, 0) {}
  explicit Configuration(std::vector<Count> counts) : counts_(std::move(counts)) {}

  std::size_t size() const { return counts_.size(); }
  Count operator[](SpeciesId s) const { return counts_[s]; }
  std::span<const Count> counts() const { return counts_; }

  void set(SpeciesId s, Count value) { counts_[s] = value; }
  /// Adds a signed delta to one count; throws on underflow or overflow.
  void add(SpeciesId s, std::int64_t delta);

  /// Total molecule count.
  Count total() const;
  bool empty() const;

  bool operator==(const Configuration&) const = default;

 private:
  std::vector<Count> counts_;
};

/// Component-wise `a <= b`.
bool componentwiseLeq(const Configuration& a, const Configuration& b);
Configuration operator+(const Configuration& a, const Configuration& b);
/// Throws ValidationError if any component would go negative.
Configuration operator-(const Configuration& a, const Configuration& b);
Configuration operator*(Count scalar, const Configuration& c);

class CrnBuilder;

/// An immutable CRN with input/output roles and an optional yes-voter set.
/// Species are ordered by name, so two CRNs with the same content compare
/// equal regardless of how they were built.
class Crn {
 public:
  Crn() = default;

  std::span<const Species> species() const { return species_; }
  std::span<const Reaction> reactions() const { return reactions_; }
  std::size_t numSpecies() const { return species_.size(); }
  std::size_t numReactions() const { return reactions_.size(); }

  /// Declared input order X_1..X_k.
  std::span<const SpeciesId> inputs() const { return inputs_; }
  /// Declared output order Y_1..Y_l.
  std::span<const SpeciesId> outputs() const { return outputs_; }

  bool hasVoters() const { return yesVoters_.has_value(); }
  /// Per-species yes flag; only meaningful when hasVoters().
  bool isYesVoter(SpeciesId s) const { return yesVoters_ && (*yesVoters_)[s]; }

  const std::string& name(SpeciesId s) const { return species_[s].name; }
  std::optional<SpeciesId> find(std::string_view name) const;
  /// Throws ValidationError for unknown names.
  SpeciesId id(std::string_view name) const;

  Configuration emptyConfiguration() const { return Configuration(species_.size()); }
  /// Builds a configuration from name/count pairs; unlisted species are 0.
  Configuration configuration(std::initializer_list<std::pair<std::string_view, Count>> counts) const;
  Configuration configuration(const std::map<std::string, Count>& counts) const;
  /// Initial configuration with `x[i]` copies of input species i.
  Configuration inputConfiguration(std::span<const Count> x) const;

  /// Output counts (Y_1..Y_l) of a configuration.
  std::vector<Count> outputCounts(const Configuration& c) const;

  /// e.g. "X -> B + 2Y", "Y + K -> 0".
  std::string format(const Reaction& r) const;
  /// e.g. "{B:1, Y:2}", zero counts omitted.
  std::string format(const Configuration& c) const;

  bool operator==(const Crn& other) const;

 private:
  friend class CrnBuilder;

  std::vector<Species> species_;
  std::unordered_map<std::string, SpeciesId> index_;
  std::vector<Reaction> reactions_;
  std::vector<SpeciesId> inputs_;
  std::vector<SpeciesId> outputs_;
  std::optional<std::vector<bool>> yesVoters_;
};

/// Name-level description of a reaction, used before species are indexed.
struct NamedReaction {
  std::vector<std::pair<std::string, std::uint32_t>> reactants;
  std::vector<std::pair<std::string, std::uint32_t>> products;
};

/// Mutable CRN under construction. Compiler fragments are CrnBuilders that
/// get merged into one network before `build()`.
class CrnBuilder {
 public:
  /// Declares a species; returns false if it was already declared.
  bool addSpecies(const std::string& name);
  bool hasSpecies(std::string_view name) const;
  void addReaction(NamedReaction r);
  void setInputs(std::vector<std::string> names) { inputs_ = std::move(names); }
  void setOutputs(std::vector<std::string> names) { outputs_ = std::move(names); }
  void setYesVoters(std::vector<std::string> names) { yesVoters_ = std::move(names); }

  /// Appends another builder's species and reactions. Roles are not merged.
  void merge(const CrnBuilder& other);

  std::span<const std::string> speciesNames() const { return species_; }
  std::span<const NamedReaction> namedReactions() const { return reactions_; }

  /// Validates and freezes. Throws ValidationError for undeclared species,
  /// bad reaction orders, or overlapping input/output roles.
  Crn build() const;

 private:
  std::vector<std::string> species_;
  std::unordered_map<std::string, std::size_t> seen_;
  std::vector<NamedReaction> reactions_;
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
  std::optional<std::vector<std::string>> yesVoters_;
};

bool isApplicable(const Configuration& c, const Reaction& r);

/// Returns `c - reactants + products`; throws NotApplicableError otherwise.
Configuration applyReaction(const Configuration& c, const Reaction& r);
/// In-place variant for hot loops; precondition isApplicable(c, r).
void applyReactionInPlace(Configuration& c, const Reaction& r);

/// Indices of the reactions applicable in `c`, in declaration order.
std::vector<std::size_t> applicableReactions(const Configuration& c, const Crn& crn);

}  // namespace lcrn
