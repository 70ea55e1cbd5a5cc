#include "lcrn/compile_predicate.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "lcrn/errors.hpp"

namespace lcrn {

namespace {

struct Comp {
  bool primary = true;  // leader / carrier
  Int value = 0;
  bool bit = false;

  auto operator<=>(const Comp&) const = default;
};

using State = std::vector<Comp>;

std::string signedName(Int v) {
  if (v > 0) return "p" + std::to_string(v);
  if (v < 0) return "m" + std::to_string(-v);
  return "0";
}

Int modulo(Int a, Int m) {
  Int r = a % m;
  return r < 0 ? r + m : r;
}

class Protocol {
 public:
  Protocol(std::vector<Atom> atoms, std::vector<Int> bounds)
      : atoms_(std::move(atoms)), bounds_(std::move(bounds)) {}

  std::string name(const std::string& prefix, const State& s) const {
    if (s.empty()) return prefix + "Const";
    std::string out = prefix;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i) out += '_';
      const Comp& c = s[i];
      if (std::holds_alternative<ThresholdAtom>(atoms_[i])) {
        out += c.primary ? "L" + signedName(c.value)
                         : "N" + signedName(c.value) + (c.bit ? "y" : "n");
      } else {
        out += c.primary ? "R" + std::to_string(c.value) : std::string("F") + (c.bit ? "y" : "n");
      }
    }
    return out;
  }

  State input(std::size_t coord) const {
    State s;
    for (const Atom& atom : atoms_) {
      if (const auto* th = std::get_if<ThresholdAtom>(&atom)) {
        s.push_back({true, th->a[coord], false});
      } else {
        const auto& md = std::get<ModAtom>(atom);
        s.push_back({true, modulo(md.a[coord], md.m), false});
      }
    }
    return s;
  }

  bool componentVote(std::size_t i, const Comp& c) const {
    if (const auto* th = std::get_if<ThresholdAtom>(&atoms_[i])) {
      return c.primary ? c.value >= th->t : c.bit;
    }
    return c.primary ? c.value == std::get<ModAtom>(atoms_[i]).r : c.bit;
  }

  /// `a` plays the first role in ties.
  void step(State& a, State& b) const {
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      Comp& x = a[i];
      Comp& y = b[i];
      if (!x.primary && !y.primary) continue;
      if (const auto* th = std::get_if<ThresholdAtom>(&atoms_[i])) {
        Int s = bounds_[i];
        Int sum = x.value + y.value;
        Int q = std::clamp(sum, -s, s);
        Comp leader{true, q, false};
        Comp other{false, sum - q, q >= th->t};
        if (x.primary) {
          x = leader;
          y = other;
        } else {
          y = leader;
          x = other;
        }
      } else {
        const auto& md = std::get<ModAtom>(atoms_[i]);
        if (x.primary && y.primary) {
          x.value = modulo(x.value + y.value, md.m);
          y = {false, 0, x.value == md.r};
        } else if (x.primary) {
          y.bit = x.value == md.r;
        } else {
          x.bit = y.value == md.r;
        }
      }
    }
  }

 private:
  std::vector<Atom> atoms_;
  std::vector<Int> bounds_;
};

}  // namespace

Int saturationBound(const ThresholdAtom& atom) {
  Int s = (atom.t < 0 ? -atom.t : atom.t) + 1;
  for (Int a : atom.a) s += a < 0 ? -a : a;
  return s;
}

std::string predicatePrefix(std::size_t pieceIndex) {
  return "P" + std::to_string(pieceIndex) + "_";
}

PredicateCrd compilePredicate(const DomainPredicate& formula, std::size_t k,
                              const std::string& prefix, const PredicateOptions& options) {
  formula.validate(k);
  PredicateCrd out;
  out.formula = formula;
  std::vector<Atom> all;
  formula.collectAtoms(all);
  for (const Atom& a : all) {
    if (std::find(out.atoms.begin(), out.atoms.end(), a) == out.atoms.end()) out.atoms.push_back(a);
  }
  for (const Atom& a : out.atoms) {
    const auto* th = std::get_if<ThresholdAtom>(&a);
    out.bounds.push_back(th ? saturationBound(*th) : 0);
  }
  Protocol proto(out.atoms, out.bounds);

  std::vector<State> states;
  std::vector<std::string> names;
  std::map<State, std::size_t> index;
  auto intern = [&](const State& s) {
    auto [it, inserted] = index.emplace(s, states.size());
    if (inserted) {
      if (states.size() >= options.speciesLimit) {
        throw ValidationError("predicate state space exceeds " +
                              std::to_string(options.speciesLimit) + " species");
      }
      states.push_back(s);
      names.push_back(proto.name(prefix, s));
    }
    return it->second;
  };
  for (std::size_t i = 0; i < k; ++i) out.inputAliases.push_back(names[intern(proto.input(i))]);

  std::vector<NamedReaction> reactions;
  for (std::size_t j = 0; j < states.size(); ++j) {
    for (std::size_t i = 0; i <= j; ++i) {
      std::size_t first = names[i] <= names[j] ? i : j;
      std::size_t second = first == i ? j : i;
      State a = states[first];
      State b = states[second];
      proto.step(a, b);
      std::size_t na = intern(a);
      std::size_t nb = intern(b);
      std::multiset<std::size_t> before{first, second}, after{na, nb};
      if (before == after) continue;
      NamedReaction r;
      if (first == second) {
        r.reactants = {{names[first], 2}};
      } else {
        r.reactants = {{names[first], 1}, {names[second], 1}};
      }
      if (na == nb) {
        r.products = {{names[na], 2}};
      } else {
        r.products = {{names[na], 1}, {names[nb], 1}};
      }
      reactions.push_back(std::move(r));
    }
  }

  for (std::size_t i = 0; i < states.size(); ++i) {
    out.builder.addSpecies(names[i]);
    bool yes = formula.evaluate([&](const Atom& atom) {
      std::size_t c = static_cast<std::size_t>(
          std::find(out.atoms.begin(), out.atoms.end(), atom) - out.atoms.begin());
      return proto.componentVote(c, states[i][c]);
    });
    (yes ? out.yesVoters : out.noVoters).push_back(names[i]);
  }
  for (NamedReaction& r : reactions) out.builder.addReaction(std::move(r));
  if (states.size() > options.speciesBudget) {
    out.warnings.push_back("predicate decider " + prefix + " has " +
                           std::to_string(states.size()) + " species (budget " +
                           std::to_string(options.speciesBudget) + ")");
  }
  return out;
}

PredicateCrd compileAtomThreshold(const ThresholdAtom& atom, const std::string& prefix) {
  return compilePredicate(DomainPredicate::atom(atom), atom.a.size(), prefix);
}

PredicateCrd compileAtomMod(const ModAtom& atom, const std::string& prefix) {
  return compilePredicate(DomainPredicate::atom(atom), atom.a.size(), prefix);
}

DomainPredicate pieceGate(const SemilinearFunctionSpec& spec, std::size_t i) {
  if (i == 0 || i > spec.pieces.size()) throw ValidationError("piece index out of range");
  if (i == 1) return spec.pieces[0].domain;
  std::vector<DomainPredicate> parts{spec.pieces[i - 1].domain};
  for (std::size_t p = 0; p + 1 < i; ++p) {
    parts.push_back(DomainPredicate::negate(spec.pieces[p].domain));
  }
  return DomainPredicate::conjunction(std::move(parts));
}

Crn standaloneDecider(const PredicateCrd& crd, std::vector<std::string> inputNames) {
  const std::size_t k = crd.inputAliases.size();
  if (inputNames.empty()) {
    if (k == 1) {
      inputNames = {"X"};
    } else {
      for (std::size_t i = 1; i <= k; ++i) inputNames.push_back("X" + std::to_string(i));
    }
  }
  if (inputNames.size() != k) throw ValidationError("input name count does not match arity");
  CrnBuilder b = crd.builder;
  std::vector<std::string> yes = crd.yesVoters;
  for (std::size_t i = 0; i < k; ++i) {
    if (!b.addSpecies(inputNames[i])) {
      throw ValidationError("input name '" + inputNames[i] + "' collides with a decider species");
    }
    b.addReaction({{{inputNames[i], 1}}, {{crd.inputAliases[i], 1}}});
    if (std::find(yes.begin(), yes.end(), crd.inputAliases[i]) != yes.end()) {
      yes.push_back(inputNames[i]);
    }
  }
  b.setInputs(inputNames);
  b.setYesVoters(std::move(yes));
  return b.build();
}

}  // namespace lcrn
