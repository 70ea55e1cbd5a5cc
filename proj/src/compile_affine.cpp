#include "lcrn/compile_affine.hpp"

#include <algorithm>
#include <cstdlib>
#include <optional>

#include "lcrn/errors.hpp"
#include "lcrn/model_check.hpp"

namespace lcrn {

namespace {

using Side = std::vector<std::pair<std::string, std::uint32_t>>;

void add(CrnBuilder& b, Side reactants, Side products) {
  for (auto& [name, n] : reactants) b.addSpecies(name);
  for (auto& [name, n] : products) b.addSpecies(name);
  b.addReaction({std::move(reactants), std::move(products)});
}

std::string idx(std::size_t i) { return std::to_string(i); }

Count toCount(Int v) { return static_cast<Count>(v < 0 ? -v : v); }

/// Merging table dividing levels by d: D_m + D_p -> D_{m+p} below d,
/// otherwise D_{m+p-d} + out (level 0 means no molecule).
void divisionStage(CrnBuilder& b, const std::string& base, Count d, const std::string& out) {
  if (d == 1) {
    add(b, {{base + "1", 1}}, {{out, 1}});
    return;
  }
  for (Count m = 1; m < d; ++m) {
    for (Count p = m; p < d; ++p) {
      Side lhs = m == p ? Side{{base + std::to_string(m), 2}}
                        : Side{{base + std::to_string(m), 1}, {base + std::to_string(p), 1}};
      Side rhs;
      if (m + p < d) {
        rhs.push_back({base + std::to_string(m + p), 1});
      } else {
        if (m + p > d) rhs.push_back({base + std::to_string(m + p - d), 1});
        rhs.push_back({out, 1});
      }
      add(b, std::move(lhs), std::move(rhs));
    }
  }
}

}  // namespace

std::string affinePrefix(std::size_t pieceIndex) { return "A" + idx(pieceIndex) + "_"; }

CrnBuilder cOffsetStage(const std::string& base, Count c, const std::string& out) {
  CrnBuilder b;
  auto C = [&](Count m) { return base + "_" + std::to_string(m); };
  if (c == 0) {
    add(b, {{C(1), 1}}, {{out, 1}});
    return b;
  }
  b.addSpecies(C(1));
  for (Count m = 1; m <= c; ++m) {
    for (Count p = m; p <= c; ++p) {
      Side lhs = m == p ? Side{{C(m), 2}} : Side{{C(m), 1}, {C(p), 1}};
      Side rhs{{C(std::min(m + p, c)), 1}};
      if (m + p > c) rhs.push_back({out, static_cast<std::uint32_t>(m + p - c)});
      add(b, std::move(lhs), std::move(rhs));
    }
  }
  return b;
}

AffineFragment compileAffine(const AffinePiece& piece, std::size_t pieceIndex) {
  piece.validate();
  if (pieceIndex == 0) throw ValidationError("piece index is 1-based");
  AffineFragment f;
  f.pieceIndex = pieceIndex;
  const std::string pre = affinePrefix(pieceIndex);
  CrnBuilder& b = f.builder;

  for (std::size_t j = 1; j <= piece.l; ++j) {
    f.outputP.push_back(pre + "YhP" + idx(j));
    f.outputC.push_back(pre + "YhC" + idx(j));
    b.addSpecies(f.outputP.back());
    b.addSpecies(f.outputC.back());
  }
  auto DP = [&](std::size_t j) { return pre + "DP" + idx(j) + "_"; };
  auto DC = [&](std::size_t j) { return pre + "DC" + idx(j) + "_"; };
  auto B = [&](std::size_t j) { return pre + "B" + idx(j); };

  std::vector<bool> usesP(piece.l, false), usesC(piece.l, false);
  Count bSum = 0;
  for (std::size_t j = 0; j < piece.l; ++j) bSum += toCount(piece.bOffset[j]);

  for (std::size_t i = 1; i <= piece.k; ++i) {
    const std::string in = pre + "In" + idx(i);
    const std::string ci = pre + "C" + idx(i);
    const std::string xp = pre + "Xp" + idx(i);
    f.inputAliases.push_back(in);

    // (a) seeding with the b payload
    Side seed{{ci + "_1", 1}};
    for (std::size_t j = 1; j <= piece.l; ++j) {
      Int bj = piece.bOffset[j - 1];
      if (bj > 0) seed.push_back({B(j), 1});
    }
    for (std::size_t j = 1; j <= piece.l; ++j) {
      Int bj = piece.bOffset[j - 1];
      if (bj > 0) seed.push_back({f.outputP[j - 1], static_cast<std::uint32_t>(bj)});
    }
    add(b, {{in, 1}}, std::move(seed));

    // (b) c offset
    Count c = toCount(piece.cOffset[i - 1]);
    b.merge(cOffsetStage(ci, c, xp));

    // (c) fan-out and (d) coefficients
    Side fan;
    Count wXp = 0;
    for (std::size_t j = 1; j <= piece.l; ++j) {
      const std::string xij = pre + "X" + idx(i) + "_" + idx(j);
      fan.push_back({xij, 1});
      Int n = piece.coeff[i - 1][j - 1];
      Count w;
      if (n > 0) {
        add(b, {{xij, 1}}, {{DP(j) + "1", static_cast<std::uint32_t>(n)}});
        usesP[j - 1] = true;
        w = 2 * toCount(n);
      } else if (n < 0) {
        add(b, {{xij, 1}}, {{DC(j) + "1", static_cast<std::uint32_t>(-n)}});
        usesC[j - 1] = true;
        w = toCount(n);
      } else {
        add(b, {{xij, 1}}, {});
        w = 1;
      }
      f.weights[xij] = w;
      wXp += w;
    }
    add(b, {{xp, 1}}, std::move(fan));
    f.weights[xp] = wXp;
    for (Count m = 1; m <= std::max<Count>(c, 1); ++m) {
      f.weights[ci + "_" + std::to_string(m)] = m * wXp;
    }
    f.weights[in] = wXp + 3 * bSum;
  }

  // (e) division, (f) b offset
  for (std::size_t j = 1; j <= piece.l; ++j) {
    Count d = toCount(piece.denom[j - 1]);
    if (usesP[j - 1]) divisionStage(b, DP(j), d, f.outputP[j - 1]);
    if (usesC[j - 1]) divisionStage(b, DC(j), d, f.outputC[j - 1]);
    for (Count m = 1; m < std::max<Count>(d, 2); ++m) {
      f.weights[DP(j) + std::to_string(m)] = 2 * m;
      f.weights[DC(j) + std::to_string(m)] = m;
    }
    Int bj = piece.bOffset[j - 1];
    if (bj > 0) {
      add(b, {{B(j), 2}}, {{B(j), 1}, {f.outputC[j - 1], static_cast<std::uint32_t>(bj)}});
      f.weights[B(j)] = toCount(bj);
    }
    f.weights[f.outputP[j - 1]] = 2;
    f.weights[f.outputC[j - 1]] = 1;
  }

  // Keep only weights of declared species.
  for (auto it = f.weights.begin(); it != f.weights.end();) {
    it = b.hasSpecies(it->first) ? std::next(it) : f.weights.erase(it);
  }
  for (const std::string& in : f.inputAliases) f.massBound = std::max(f.massBound, f.weights[in]);
  return f;
}

bool isMonotone(const Crn& crn, const std::vector<std::string>& species) {
  for (const std::string& name : species) {
    auto s = crn.find(name);
    if (!s) continue;
    for (const Reaction& r : crn.reactions()) {
      if (r.netChange(*s) < 0) return false;
    }
  }
  return true;
}

bool isMonotone(const AffineFragment& fragment) {
  std::vector<std::string> outs = fragment.outputP;
  outs.insert(outs.end(), fragment.outputC.begin(), fragment.outputC.end());
  return isMonotone(fragment.builder.build(), outs);
}

DiffOutput fragmentQuiescentOutput(const AffineFragment& fragment, std::span<const Count> x,
                                   std::size_t nodeBudget) {
  if (x.size() != fragment.inputAliases.size()) {
    throw ValidationError("expected " + std::to_string(fragment.inputAliases.size()) +
                          " input counts");
  }
  CrnBuilder b = fragment.builder;
  b.setInputs(fragment.inputAliases);
  std::vector<std::string> outs = fragment.outputP;
  outs.insert(outs.end(), fragment.outputC.begin(), fragment.outputC.end());
  b.setOutputs(outs);
  Crn crn = b.build();
  ReachabilityGraph g = buildGraph(crn, crn.inputConfiguration(x), nodeBudget);
  if (g.capped()) throw CappedGraphError("fragment exploration hit the node budget");
  if (!g.acyclic()) throw NondeterministicOutputError("fragment has a cyclic execution");
  std::optional<std::vector<Count>> seen;
  for (NodeId n = 0; n < g.numNodes(); ++n) {
    if (!g.isTerminal(n)) continue;
    std::vector<Count> out = crn.outputCounts(g.config(n));
    if (seen && *seen != out) {
      throw NondeterministicOutputError("terminal configurations " + crn.format(g.config(n)) +
                                        " disagree on the outputs");
    }
    seen = std::move(out);
  }
  DiffOutput r;
  const std::size_t l = fragment.outputP.size();
  r.yP.assign(seen->begin(), seen->begin() + static_cast<std::ptrdiff_t>(l));
  r.yC.assign(seen->begin() + static_cast<std::ptrdiff_t>(l), seen->end());
  return r;
}

}  // namespace lcrn
