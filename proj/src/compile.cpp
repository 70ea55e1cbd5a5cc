#include "lcrn/compile.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "lcrn/errors.hpp"

namespace lcrn {

namespace {

std::string idx(std::size_t i) { return std::to_string(i); }

std::string formatInput(const InputVector& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? ", " : "") + std::to_string(x[i]);
  return s + ")";
}

}  // namespace

std::string_view toString(RoleKind k) {
  switch (k) {
    case RoleKind::Input: return "input";
    case RoleKind::Predicate: return "predicate";
    case RoleKind::Affine: return "affine";
    case RoleKind::Activation: return "activation";
    case RoleKind::GlobalOutput: return "output";
  }
  return "input";
}

CompiledCrn compile(const SemilinearFunctionSpec& spec, const CompileOptions& options) {
  spec.validateStructure();
  if (spec.pieces.empty()) throw ValidationError("spec has no pieces");
  if (options.validationBound > 0) {
    ValidationReport report = validate(spec, options.validationBound);
    if (!report.ok) {
      std::string where = report.counterexample ? " at x = " + formatInput(*report.counterexample)
                                                : std::string();
      throw ValidationError("spec validation failed" + where + ": " + report.message);
    }
  }

  CompiledCrn out;
  out.spec = spec;
  const std::size_t k = spec.k, l = spec.l, m = spec.pieces.size();
  const auto inputs = spec.resolvedInputNames();
  const auto outputs = spec.resolvedOutputNames();

  InputVector zero(k, 0);
  if (auto piece = selectPiece(spec, zero)) {
    auto y = tryEvalPiece(spec.pieces[*piece].piece, zero);
    if (y && std::any_of(y->begin(), y->end(), [](Int v) { return v != 0; })) {
      std::string msg = "f(0) = " + formatInput(*y) +
                        " is nonzero; the network outputs 0 from the empty input";
      if (options.strictZero) throw ValidationError(msg);
      out.warnings.push_back(msg);
    }
  }

  CrnBuilder b;
  for (std::size_t i = 0; i < k; ++i) {
    b.addSpecies(inputs[i]);
    out.roles[inputs[i]] = {RoleKind::Input, 0, 0};
  }
  for (std::size_t j = 0; j < l; ++j) {
    if (!b.addSpecies(outputs[j])) throw ValidationError("duplicate name '" + outputs[j] + "'");
    out.roles[outputs[j]] = {RoleKind::GlobalOutput, 0, j + 1};
    out.weights[outputs[j]] = 1;
  }
  auto declare = [&](const std::string& name, SpeciesRoleInfo role) {
    if (!b.addSpecies(name)) {
      throw ValidationError("species name '" + name + "' collides with an input or output name");
    }
    out.roles[name] = role;
  };

  std::vector<PredicateCrd> preds;
  std::vector<AffineFragment> affs;
  for (std::size_t i = 1; i <= m; ++i) {
    DomainPredicate gate = pieceGate(spec, i);
    preds.push_back(compilePredicate(gate, k, predicatePrefix(i), options.predicate));
    affs.push_back(compileAffine(spec.pieces[i - 1].piece, i));
    const PredicateCrd& p = preds.back();
    const AffineFragment& a = affs.back();
    for (const std::string& s : p.builder.speciesNames()) {
      declare(s, {RoleKind::Predicate, i, 0});
      out.weights[s] = 1;
    }
    for (const std::string& s : a.builder.speciesNames()) {
      declare(s, {RoleKind::Affine, i, 0});
      out.weights[s] = a.weights.at(s);
    }
    b.merge(p.builder);
    b.merge(a.builder);
    out.warnings.insert(out.warnings.end(), p.warnings.begin(), p.warnings.end());

    CompiledPiece info;
    info.index = i;
    info.gate = gate.toString();
    info.yesVoters = p.yesVoters;
    info.noVoters = p.noVoters;
    info.outputP = a.outputP;
    info.outputC = a.outputC;
    info.affineMassBound = a.massBound;
    info.monotone = isMonotone(a);
    out.pieces.push_back(std::move(info));
  }

  // Input fan-out.
  for (std::size_t c = 0; c < k; ++c) {
    NamedReaction r;
    r.reactants = {{inputs[c], 1}};
    std::map<std::string, std::uint32_t> products;
    Count w = 0;
    for (std::size_t i = 0; i < m; ++i) {
      ++products[preds[i].inputAliases[c]];
      ++products[affs[i].inputAliases[c]];
      w += 1 + affs[i].weights.at(affs[i].inputAliases[c]);
    }
    r.products.assign(products.begin(), products.end());
    b.addReaction(std::move(r));
    out.weights[inputs[c]] = w;
    out.massBound = std::max(out.massBound, w);
  }

  for (std::size_t j = 1; j <= l; ++j) {
    const std::string K = "K" + idx(j);
    declare(K, {RoleKind::Activation, 0, j});
    out.weights[K] = 1;
    out.annihilators.push_back(K);
  }
  for (std::size_t i = 1; i <= m; ++i) {
    CompiledPiece& info = out.pieces[i - 1];
    for (std::size_t j = 1; j <= l; ++j) {
      const std::string& Y = outputs[j - 1];
      const std::string& K = out.annihilators[j - 1];
      const std::string& hatP = info.outputP[j - 1];
      const std::string& hatC = info.outputC[j - 1];
      const std::string YP = "YP" + idx(i) + "_" + idx(j);
      const std::string YC = "YC" + idx(i) + "_" + idx(j);
      const std::string M = "M" + idx(i) + "_" + idx(j);
      for (const std::string& s : {YP, YC, M}) {
        declare(s, {RoleKind::Activation, i, j});
        out.weights[s] = 1;
      }
      info.activeP.push_back(YP);
      info.activeC.push_back(YC);
      info.parked.push_back(M);
      for (const std::string& L : info.yesVoters) {
        b.addReaction({{{L, 1}, {hatP, 1}}, {{L, 1}, {YP, 1}, {Y, 1}}});
        b.addReaction({{{L, 1}, {hatC, 1}}, {{L, 1}, {YC, 1}}});
      }
      for (const std::string& L : info.noVoters) {
        b.addReaction({{{L, 1}, {YP, 1}}, {{L, 1}, {M, 1}}});
        b.addReaction({{{L, 1}, {YC, 1}}, {{L, 1}, {hatC, 1}}});
      }
      b.addReaction({{{M, 1}, {Y, 1}}, {{hatP, 1}}});
      b.addReaction({{{YP, 1}, {YC, 1}}, {{K, 1}}});
    }
  }
  for (std::size_t j = 1; j <= l; ++j) {
    b.addReaction({{{out.annihilators[j - 1], 1}, {outputs[j - 1], 1}}, {}});
  }

  b.setInputs(inputs);
  b.setOutputs(outputs);
  out.crn = b.build();
  for (const CompiledPiece& p : out.pieces) {
    if (!p.monotone) out.warnings.push_back("affine fragment " + idx(p.index) + " is not monotone");
  }
  return out;
}

bool auditInvariant(const Configuration& c, const CompiledCrn& compiled) {
  const Crn& crn = compiled.crn;
  for (std::size_t j = 0; j < crn.outputs().size(); ++j) {
    Count rhs = c[crn.id(compiled.annihilators[j])];
    for (const CompiledPiece& p : compiled.pieces) {
      rhs += c[crn.id(p.activeP[j])] + c[crn.id(p.parked[j])];
    }
    if (c[crn.outputs()[j]] != rhs) return false;
  }
  return true;
}

std::vector<std::size_t> auditReactionDeltas(const CompiledCrn& compiled) {
  const Crn& crn = compiled.crn;
  const std::size_t l = crn.outputs().size();
  // coefficient of each species in (lhs - rhs) of the identity, per output
  std::vector<std::map<SpeciesId, int>> weight(l);
  for (std::size_t j = 0; j < l; ++j) {
    weight[j][crn.outputs()[j]] += 1;
    weight[j][crn.id(compiled.annihilators[j])] -= 1;
    for (const CompiledPiece& p : compiled.pieces) {
      weight[j][crn.id(p.activeP[j])] -= 1;
      weight[j][crn.id(p.parked[j])] -= 1;
    }
  }
  std::vector<std::size_t> bad;
  for (std::size_t r = 0; r < crn.numReactions(); ++r) {
    for (std::size_t j = 0; j < l; ++j) {
      std::int64_t total = 0;
      for (auto [s, d] : crn.reactions()[r].delta()) {
        auto it = weight[j].find(s);
        if (it != weight[j].end()) total += it->second * d;
      }
      if (total != 0) {
        bad.push_back(r);
        break;
      }
    }
  }
  return bad;
}

double compiledVolume(const CompiledCrn& compiled, std::span<const Count> x) {
  Count n = 0;
  for (Count v : x) n += v;
  return static_cast<double>(std::max<Count>(1, compiled.massBound * n));
}

std::string metadataJson(const CompiledCrn& compiled, const std::vector<std::string>& provenance) {
  using nlohmann::json;
  json doc = json::object();
  doc["provenance"] = provenance;
  doc["mass_bound"] = compiled.massBound;
  doc["species"] = compiled.crn.numSpecies();
  doc["reactions"] = compiled.crn.numReactions();
  json roles = json::object();
  for (const auto& [name, role] : compiled.roles) {
    json r = {{"kind", std::string(toString(role.kind))}};
    if (role.piece) r["piece"] = role.piece;
    if (role.output) r["output"] = role.output;
    auto w = compiled.weights.find(name);
    if (w != compiled.weights.end()) r["weight"] = w->second;
    roles[name] = std::move(r);
  }
  doc["roles"] = std::move(roles);
  json pieces = json::array();
  for (const CompiledPiece& p : compiled.pieces) {
    pieces.push_back({{"index", p.index},
                      {"gate", p.gate},
                      {"yes_voters", p.yesVoters},
                      {"no_voters", p.noVoters},
                      {"output_p", p.outputP},
                      {"output_c", p.outputC},
                      {"active_p", p.activeP},
                      {"active_c", p.activeC},
                      {"parked", p.parked},
                      {"affine_mass_bound", p.affineMassBound},
                      {"monotone", p.monotone}});
  }
  doc["pieces"] = std::move(pieces);
  doc["annihilators"] = compiled.annihilators;
  doc["warnings"] = compiled.warnings;
  return doc.dump(2) + "\n";
}

}  // namespace lcrn
