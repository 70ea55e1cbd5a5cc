#include "lcrn/crn.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "lcrn/errors.hpp"

namespace lcrn {

namespace {

std::vector<Term> normalize(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.species < b.species; });
  std::vector<Term> merged;
  for (const Term& t : terms) {
    if (t.count == 0) continue;
    if (!merged.empty() && merged.back().species == t.species) {
      merged.back().count += t.count;
    } else {
      merged.push_back(t);
    }
  }
  return merged;
}

Count checkedAdd(Count a, Count b) {
  Count out;
  if (__builtin_add_overflow(a, b, &out)) throw CountOverflowError("species count overflow");
  return out;
}

}  // namespace

std::string_view toString(SpeciesRole role) {
  switch (role) {
    case SpeciesRole::Input: return "input";
    case SpeciesRole::Output: return "output";
    case SpeciesRole::Internal: return "internal";
  }
  return "internal";
}

bool isValidSpeciesName(std::string_view name) {
  if (name.empty()) return false;
  auto alpha = [](char ch) { return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z'); };
  if (!alpha(name[0]) && name[0] != '_') return false;
  return std::all_of(name.begin(), name.end(), [&](char ch) {
    return alpha(ch) || (ch >= '0' && ch <= '9') || ch == '_' || ch == '^' || ch == '\'';
  });
}

// ---------------------------------------------------------------------------
Reaction::Reaction(std::vector<Term> reactants, std::vector<Term> products)
    : reactants_(normalize(std::move(reactants))), products_(normalize(std::move(products))) {
  for (const Term& t : reactants_) order_ += t.count;
  if (order_ < 1 || order_ > 2) {
    throw ValidationError("reaction must have 1 or 2 reactant molecules, got " +
                          std::to_string(order_));
  }
  std::map<SpeciesId, std::int64_t> net;
  for (const Term& t : reactants_) net[t.species] -= t.count;
  for (const Term& t : products_) net[t.species] += t.count;
  for (auto [s, d] : net) {
    if (d != 0) delta_.emplace_back(s, d);
  }
}

std::int64_t Reaction::netChange(SpeciesId s) const {
  for (auto [id, d] : delta_) {
    if (id == s) return d;
  }
  return 0;
}

std::uint32_t Reaction::reactantCount(SpeciesId s) const {
  for (const Term& t : reactants_) {
    if (t.species == s) return t.count;
  }
  return 0;
}

std::uint32_t Reaction::productCount(SpeciesId s) const {
  for (const Term& t : products_) {
    if (t.species == s) return t.count;
  }
  return 0;
}

// ---------------------------------------------------------------------------
void Configuration::add(SpeciesId s, std::int64_t delta) {
  Count& slot = counts_[s];
  if (delta < 0) {
    Count dec = static_cast<Count>(-(delta + 1)) + 1;
    if (dec > slot) throw ValidationError("species count would become negative");
    slot -= dec;
  } else {
    slot = checkedAdd(slot, static_cast<Count>(delta));
  }
}

Count Configuration::total() const {
  Count sum = 0;
  for (Count c : counts_) sum = checkedAdd(sum, c);
  return sum;
}

bool Configuration::empty() const {
  return std::all_of(counts_.begin(), counts_.end(), [](Count c) { return c == 0; });
}

bool componentwiseLeq(const Configuration& a, const Configuration& b) {
  if (a.size() != b.size()) throw ValidationError("configuration size mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[static_cast<SpeciesId>(i)] > b[static_cast<SpeciesId>(i)]) return false;
  }
  return true;
}

Configuration operator+(const Configuration& a, const Configuration& b) {
  if (a.size() != b.size()) throw ValidationError("configuration size mismatch");
  std::vector<Count> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = checkedAdd(a[static_cast<SpeciesId>(i)], b[static_cast<SpeciesId>(i)]);
  }
  return Configuration(std::move(out));
}

Configuration operator-(const Configuration& a, const Configuration& b) {
  if (!componentwiseLeq(b, a)) throw ValidationError("configuration subtraction would go negative");
  std::vector<Count> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = a[static_cast<SpeciesId>(i)] - b[static_cast<SpeciesId>(i)];
  }
  return Configuration(std::move(out));
}

Configuration operator*(Count scalar, const Configuration& c) {
  std::vector<Count> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (__builtin_mul_overflow(scalar, c[static_cast<SpeciesId>(i)], &out[i])) {
      throw CountOverflowError("species count overflow");
    }
  }
  return Configuration(std::move(out));
}

// ---------------------------------------------------------------------------
std::optional<SpeciesId> Crn::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SpeciesId Crn::id(std::string_view name) const {
  if (auto s = find(name)) return *s;
  throw ValidationError("unknown species '" + std::string(name) + "'");
}

Configuration Crn::configuration(
    std::initializer_list<std::pair<std::string_view, Count>> counts) const {
  Configuration c = emptyConfiguration();
  for (auto [name, n] : counts) c.set(id(name), n);
  return c;
}

Configuration Crn::configuration(const std::map<std::string, Count>& counts) const {
  Configuration c = emptyConfiguration();
  for (const auto& [name, n] : counts) c.set(id(name), n);
  return c;
}

Configuration Crn::inputConfiguration(std::span<const Count> x) const {
  if (x.size() != inputs_.size()) {
    throw ValidationError("expected " + std::to_string(inputs_.size()) + " input counts, got " +
                          std::to_string(x.size()));
  }
  Configuration c = emptyConfiguration();
  for (std::size_t i = 0; i < x.size(); ++i) c.set(inputs_[i], x[i]);
  return c;
}

std::vector<Count> Crn::outputCounts(const Configuration& c) const {
  std::vector<Count> out;
  out.reserve(outputs_.size());
  for (SpeciesId s : outputs_) out.push_back(c[s]);
  return out;
}

std::string Crn::format(const Reaction& r) const {
  auto side = [&](std::span<const Term> terms) {
    if (terms.empty()) return std::string("0");
    // Sorted by id, and ids follow name order.
    std::string out;
    for (const Term& t : terms) {
      if (!out.empty()) out += " + ";
      if (t.count != 1) out += std::to_string(t.count);
      out += species_[t.species].name;
    }
    return out;
  };
  return side(r.reactants()) + " -> " + side(r.products());
}

std::string Crn::format(const Configuration& c) const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[static_cast<SpeciesId>(i)] == 0) continue;
    if (!first) os << ", ";
    first = false;
    os << species_[i].name << ':' << c[static_cast<SpeciesId>(i)];
  }
  os << '}';
  return os.str();
}

bool Crn::operator==(const Crn& other) const {
  return species_ == other.species_ && reactions_ == other.reactions_ &&
         inputs_ == other.inputs_ && outputs_ == other.outputs_ &&
         yesVoters_ == other.yesVoters_;
}

// ---------------------------------------------------------------------------
bool CrnBuilder::addSpecies(const std::string& name) {
  if (seen_.count(name)) return false;
  seen_.emplace(name, species_.size());
  species_.push_back(name);
  return true;
}

bool CrnBuilder::hasSpecies(std::string_view name) const {
  return seen_.count(std::string(name)) != 0;
}

void CrnBuilder::addReaction(NamedReaction r) { reactions_.push_back(std::move(r)); }

void CrnBuilder::merge(const CrnBuilder& other) {
  for (const std::string& s : other.species_) addSpecies(s);
  for (const NamedReaction& r : other.reactions_) reactions_.push_back(r);
}

Crn CrnBuilder::build() const {
  Crn crn;
  std::vector<std::string> names = species_;
  std::sort(names.begin(), names.end());
  for (const std::string& n : names) {
    if (!isValidSpeciesName(n)) throw ValidationError("invalid species name '" + n + "'");
    crn.index_.emplace(n, static_cast<SpeciesId>(crn.species_.size()));
    crn.species_.push_back({n, SpeciesRole::Internal});
  }

  auto lookup = [&](const std::string& n) {
    auto it = crn.index_.find(n);
    if (it == crn.index_.end()) throw ValidationError("undeclared species '" + n + "'");
    return it->second;
  };
  auto terms = [&](const std::vector<std::pair<std::string, std::uint32_t>>& side) {
    std::vector<Term> out;
    for (const auto& [n, k] : side) out.push_back({lookup(n), k});
    return out;
  };
  for (const NamedReaction& r : reactions_) {
    crn.reactions_.emplace_back(terms(r.reactants), terms(r.products));
  }

  for (const std::string& n : inputs_) {
    SpeciesId s = lookup(n);
    if (crn.species_[s].role != SpeciesRole::Internal) {
      throw ValidationError("species '" + n + "' listed twice among inputs/outputs");
    }
    crn.species_[s].role = SpeciesRole::Input;
    crn.inputs_.push_back(s);
  }
  for (const std::string& n : outputs_) {
    SpeciesId s = lookup(n);
    if (crn.species_[s].role != SpeciesRole::Internal) {
      throw ValidationError("species '" + n + "' is both an input and an output, or repeated");
    }
    crn.species_[s].role = SpeciesRole::Output;
    crn.outputs_.push_back(s);
  }
  if (yesVoters_) {
    std::vector<bool> yes(crn.species_.size(), false);
    for (const std::string& n : *yesVoters_) yes[lookup(n)] = true;
    crn.yesVoters_ = std::move(yes);
  }
  return crn;
}

// ---------------------------------------------------------------------------
bool isApplicable(const Configuration& c, const Reaction& r) {
  for (const Term& t : r.reactants()) {
    if (c[t.species] < t.count) return false;
  }
  return true;
}

void applyReactionInPlace(Configuration& c, const Reaction& r) {
  for (auto [s, d] : r.delta()) c.add(s, d);
}

Configuration applyReaction(const Configuration& c, const Reaction& r) {
  if (!isApplicable(c, r)) throw NotApplicableError("reaction is not applicable");
  Configuration out = c;
  applyReactionInPlace(out, r);
  return out;
}

std::vector<std::size_t> applicableReactions(const Configuration& c, const Crn& crn) {
  std::vector<std::size_t> out;
  auto rs = crn.reactions();
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (isApplicable(c, rs[i])) out.push_back(i);
  }
  return out;
}

}  // namespace lcrn
