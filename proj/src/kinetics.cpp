#include "lcrn/kinetics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

#include "lcrn/errors.hpp"

namespace lcrn {

Volume::Volume(double v) : v_(v) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError("volume must be a positive number");
}

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t deriveSeed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  std::uint64_t s1 = mix64(base + (a + 1) * kGolden);
  return mix64(s1 + (b + 1) * kGolden);
}

double propensity(const Configuration& c, const Reaction& r, Volume v) {
  auto rs = r.reactants();
  if (r.order() == 1) return static_cast<double>(c[rs[0].species]);
  if (rs.size() == 1) {
    double x = static_cast<double>(c[rs[0].species]);
    if (x < 2) return 0.0;
    return 0.5 * x * (x - 1.0) / v.value();
  }
  return static_cast<double>(c[rs[0].species]) * static_cast<double>(c[rs[1].species]) /
         v.value();
}

double totalPropensity(const Configuration& c, const Crn& crn, Volume v) {
  double sum = 0.0;
  for (const Reaction& r : crn.reactions()) sum += propensity(c, r, v);
  return sum;
}

SsaStep ssaStep(const Configuration& c, const Crn& crn, Volume v, Rng& rng) {
  auto rs = crn.reactions();
  std::vector<double> p(rs.size());
  double total = 0.0;
  for (std::size_t i = 0; i < rs.size(); ++i) total += p[i] = propensity(c, rs[i], v);
  if (total <= 0.0) throw QuiescentError("no reaction is applicable");

  double dt = -std::log(rng.uniformPositive()) / total;
  double target = rng.uniform() * total;
  std::size_t chosen = rs.size();
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (p[i] <= 0.0) continue;
    chosen = i;
    target -= p[i];
    if (target < 0.0) break;
  }
  return {dt, chosen, applyReaction(c, rs[chosen])};
}

std::uint64_t defaultSilenceWindow(const Configuration& init) {
  return std::max<std::uint64_t>(50 * init.total(), 50);
}

std::string_view toString(StopReason r) {
  switch (r) {
    case StopReason::Quiescent: return "quiescent";
    case StopReason::Horizon: return "horizon";
    case StopReason::EventCap: return "event-cap";
    case StopReason::Silent: return "output-silence";
  }
  return "quiescent";
}

std::string_view toString(RecordMode m) {
  switch (m) {
    case RecordMode::Full: return "full";
    case RecordMode::Sparse: return "sparse";
    case RecordMode::Final: return "final";
  }
  return "final";
}

RecordMode parseRecordMode(std::string_view s) {
  if (s == "full") return RecordMode::Full;
  if (s == "sparse") return RecordMode::Sparse;
  if (s == "final") return RecordMode::Final;
  throw ParseError("unknown record mode '" + std::string(s) + "'");
}

std::optional<bool> consensusVote(const Configuration& c, const Crn& crn) {
  bool yes = false, no = false;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[static_cast<SpeciesId>(i)] == 0) continue;
    (crn.isYesVoter(static_cast<SpeciesId>(i)) ? yes : no) = true;
  }
  if (yes == no) return std::nullopt;
  return yes;
}

// ---------------------------------------------------------------------------
Simulator::Simulator(const Crn& crn, Volume v) : crn_(crn), volume_(v) {
  auto rs = crn_.reactions();
  rx_.resize(rs.size());
  std::vector<std::vector<std::uint32_t>> consumers(crn_.numSpecies());
  std::vector<bool> isOutput(crn_.numSpecies(), false);
  for (SpeciesId s : crn_.outputs()) isOutput[s] = true;

  for (std::size_t i = 0; i < rs.size(); ++i) {
    const Reaction& r = rs[i];
    Compiled& c = rx_[i];
    auto terms = r.reactants();
    c.a = terms[0].species;
    if (r.order() == 1) {
      c.kind = 1;
    } else if (terms.size() == 1) {
      c.kind = 3;
    } else {
      c.kind = 2;
      c.b = terms[1].species;
    }
    for (const Term& t : terms) consumers[t.species].push_back(static_cast<std::uint32_t>(i));
    for (auto [s, d] : r.delta()) {
      c.massDelta += d;
      if (isOutput[s]) c.touchesOutput = true;
      if (crn_.hasVoters()) (crn_.isYesVoter(s) ? c.yesDelta : c.noDelta) += d;
    }
  }
  affected_.resize(rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i) {
    std::set<std::uint32_t> deps;
    for (auto [s, d] : rs[i].delta()) deps.insert(consumers[s].begin(), consumers[s].end());
    affected_[i].assign(deps.begin(), deps.end());
  }
}

double Simulator::rate(std::size_t r, const Configuration& c) const {
  const Compiled& k = rx_[r];
  switch (k.kind) {
    case 1: return static_cast<double>(c[k.a]);
    case 2: return static_cast<double>(c[k.a]) * static_cast<double>(c[k.b]) / volume_.value();
    default: {
      double x = static_cast<double>(c[k.a]);
      return x < 2 ? 0.0 : 0.5 * x * (x - 1.0) / volume_.value();
    }
  }
}

Trajectory Simulator::run(const Configuration& init, const StopRule& stop, std::uint64_t seed,
                          const SimulationOptions& options) const {
  if (init.size() != crn_.numSpecies()) throw ValidationError("configuration size mismatch");
  Trajectory out;
  out.seed = seed;
  out.mode = options.record;
  out.initial = init;

  Rng rng(seed);
  Configuration c = init;
  auto rs = crn_.reactions();
  // Binary sum tree over propensities: leaves at [width, 2 * width).
  std::size_t width = 1;
  while (width < rs.size()) width *= 2;
  std::vector<double> tree(2 * width, 0.0);
  for (std::size_t i = 0; i < rs.size(); ++i) tree[width + i] = rate(i, c);
  for (std::size_t j = width - 1; j >= 1; --j) tree[j] = tree[2 * j] + tree[2 * j + 1];
  auto update = [&](std::size_t i, double value) {
    std::size_t j = width + i;
    tree[j] = value;
    for (j /= 2; j >= 1; j /= 2) tree[j] = tree[2 * j] + tree[2 * j + 1];
  };

  Count mass = c.total();
  out.peakMass = mass;
  if (options.massLimit && mass > *options.massLimit) {
    throw MassBoundError("initial configuration exceeds the mass bound");
  }
  std::int64_t yes = 0, no = 0;
  if (crn_.hasVoters()) {
    for (std::size_t s = 0; s < c.size(); ++s) {
      (crn_.isYesVoter(static_cast<SpeciesId>(s)) ? yes : no) +=
          static_cast<std::int64_t>(c[static_cast<SpeciesId>(s)]);
    }
  }
  auto vote = [&]() -> int {
    if ((yes > 0) == (no > 0)) return -1;
    return yes > 0 ? 1 : 0;
  };

  double t = 0.0;
  std::uint64_t lastChangeEvent = 0;
  for (;;) {
    double total = tree[1];
    if (total <= 0.0) {
      out.reason = StopReason::Quiescent;
      break;
    }
    if (stop.maxEvents && out.eventCount >= *stop.maxEvents) {
      out.reason = StopReason::EventCap;
      break;
    }
    double dt = -std::log(rng.uniformPositive()) / total;
    if (stop.horizon && t + dt > *stop.horizon) {
      t = *stop.horizon;
      out.reason = StopReason::Horizon;
      break;
    }
    double target = rng.uniform() * total;
    std::size_t j = 1;
    while (j < width) {
      double left = tree[2 * j];
      // Rounding may leave target past a subtree; never descend into a zero one.
      if ((target < left && left > 0.0) || tree[2 * j + 1] <= 0.0) {
        j = 2 * j;
      } else {
        target -= left;
        j = 2 * j + 1;
      }
    }
    std::size_t chosen = j - width;

    t += dt;
    const Compiled& k = rx_[chosen];
    int voteBefore = vote();
    applyReactionInPlace(c, rs[chosen]);
    for (std::uint32_t dep : affected_[chosen]) update(dep, rate(dep, c));
    mass = static_cast<Count>(static_cast<std::int64_t>(mass) + k.massDelta);
    out.peakMass = std::max(out.peakMass, mass);
    if (options.massLimit && mass > *options.massLimit) {
      throw MassBoundError("configuration with " + std::to_string(mass) +
                           " molecules exceeds the mass bound " +
                           std::to_string(*options.massLimit));
    }
    yes += k.yesDelta;
    no += k.noDelta;
    ++out.eventCount;
    if (options.record != RecordMode::Final) {
      out.events.push_back({t, static_cast<std::uint32_t>(chosen)});
    }
    if (options.observer) options.observer(c);
    if (k.touchesOutput || vote() != voteBefore) {
      out.lastOutputChange = t;
      lastChangeEvent = out.eventCount;
    }
    if (stop.silenceWindow && out.eventCount - lastChangeEvent >= *stop.silenceWindow) {
      out.reason = StopReason::Silent;
      break;
    }
  }
  out.finalTime = t;
  out.final = std::move(c);
  return out;
}

Trajectory simulate(const Crn& crn, const Configuration& init, Volume v, const StopRule& stop,
                    std::uint64_t seed, const SimulationOptions& options) {
  return Simulator(crn, v).run(init, stop, seed, options);
}

double stabilizationTime(const Trajectory& t, const Crn& crn) {
  if (t.mode == RecordMode::Final) return t.lastOutputChange;
  Configuration c = t.initial;
  std::vector<Count> outputs = crn.outputCounts(c);
  std::optional<bool> vote = crn.hasVoters() ? consensusVote(c, crn) : std::nullopt;
  double last = 0.0;
  for (const TrajectoryEvent& e : t.events) {
    applyReactionInPlace(c, crn.reactions()[e.reaction]);
    bool changed = false;
    std::vector<Count> now = crn.outputCounts(c);
    if (now != outputs) {
      changed = true;
      outputs = std::move(now);
    }
    if (crn.hasVoters()) {
      auto v = consensusVote(c, crn);
      if (v != vote) {
        changed = true;
        vote = v;
      }
    }
    if (changed) last = e.time;
  }
  return last;
}

void writeTrajectoryCsv(std::ostream& os, const Trajectory& t, const Crn& crn,
                        const std::vector<std::string>& provenance) {
  for (const std::string& line : provenance) os << "# " << line << '\n';
  os << "# seed=" << t.seed << " events=" << t.eventCount << " stop=" << toString(t.reason)
     << '\n';
  auto fullHeader = [&]() {
    os << "time,reaction";
    for (const Species& s : crn.species()) os << ',' << s.name;
    os << '\n';
  };
  auto row = [&](double time, long long reaction, const Configuration& c) {
    os << time << ',' << reaction;
    for (Count n : c.counts()) os << ',' << n;
    os << '\n';
  };
  auto precision = os.precision(17);
  switch (t.mode) {
    case RecordMode::Final:
      fullHeader();
      row(t.finalTime, -1, t.final);
      break;
    case RecordMode::Full: {
      fullHeader();
      Configuration c = t.initial;
      row(0.0, -1, c);
      for (const TrajectoryEvent& e : t.events) {
        applyReactionInPlace(c, crn.reactions()[e.reaction]);
        row(e.time, e.reaction, c);
      }
      break;
    }
    case RecordMode::Sparse:
      os << "time,reaction,species,delta\n";
      for (const TrajectoryEvent& e : t.events) {
        for (auto [s, d] : crn.reactions()[e.reaction].delta()) {
          os << e.time << ',' << e.reaction << ',' << crn.name(s) << ',' << d << '\n';
        }
      }
      break;
  }
  os.precision(precision);
}

}  // namespace lcrn
