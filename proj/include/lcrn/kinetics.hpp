#pragma once

// Stochastic kinetics with unit rate constants: propensities, Gillespie's
// direct method, and trajectory bookkeeping.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lcrn/crn.hpp"

namespace lcrn {

/// Reaction volume; always strictly positive.
class Volume {
 public:
  explicit Volume(double v);
  double value() const { return v_; }

 private:
  double v_;
};

/// Uniform random source used by every stochastic routine. Wraps
/// std::mt19937_64 seeded with the given 64-bit seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform double in (0, 1].
  double uniformPositive() { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z);

/// Seed of stream `(a, b)` derived from `base`:
///   s1 = mix64(base + (a + 1) * 0x9E3779B97F4A7C15)
///   s  = mix64(s1   + (b + 1) * 0x9E3779B97F4A7C15)
/// Benchmarks use `a` = size index and `b` = trial index.
std::uint64_t deriveSeed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

/// X -> ...: #X.  X + Y -> ...: #X #Y / v.  X + X -> ...: #X (#X - 1) / (2v).
double propensity(const Configuration& c, const Reaction& r, Volume v);
double totalPropensity(const Configuration& c, const Crn& crn, Volume v);

struct SsaStep {
  double dt;
  std::size_t reaction;
  Configuration next;
};

/// One step of the direct method. Throws QuiescentError when no reaction is
/// applicable.
SsaStep ssaStep(const Configuration& c, const Crn& crn, Volume v, Rng& rng);

/// Quiescence always ends a run; the optional fields add further stop
/// conditions, whichever fires first.
struct StopRule {
  std::optional<double> horizon;              ///< simulated time limit
  std::optional<std::uint64_t> maxEvents;     ///< event budget
  std::optional<std::uint64_t> silenceWindow; ///< events without an output change

  static StopRule quiescence() { return {}; }
  static StopRule timeHorizon(double t) { return {t, std::nullopt, std::nullopt}; }
  static StopRule eventCap(std::uint64_t n) { return {std::nullopt, n, std::nullopt}; }
  static StopRule outputSilence(std::uint64_t w) { return {std::nullopt, std::nullopt, w}; }
};

/// Default silence window: 50 events per initial molecule.
std::uint64_t defaultSilenceWindow(const Configuration& init);

enum class StopReason { Quiescent, Horizon, EventCap, Silent };
std::string_view toString(StopReason r);

enum class RecordMode { Full, Sparse, Final };
std::string_view toString(RecordMode m);
RecordMode parseRecordMode(std::string_view s);

struct TrajectoryEvent {
  double time;
  std::uint32_t reaction;

  bool operator==(const TrajectoryEvent&) const = default;
};

/// Result of one simulation run. `events` is empty in Final mode; full
/// configurations are reconstructed on demand by replaying from `initial`.
struct Trajectory {
  std::uint64_t seed = 0;
  RecordMode mode = RecordMode::Final;
  Configuration initial;
  std::vector<TrajectoryEvent> events;
  Configuration final;
  double finalTime = 0.0;  ///< time of the last event, or the horizon
  std::uint64_t eventCount = 0;
  StopReason reason = StopReason::Quiescent;
  /// Time of the last output-changing event, tracked online.
  double lastOutputChange = 0.0;
  /// Largest total molecule count seen along the run.
  Count peakMass = 0;

  bool operator==(const Trajectory&) const = default;
};

struct SimulationOptions {
  RecordMode record = RecordMode::Final;
  /// When set, every visited configuration must have total count <= massLimit;
  /// violations throw MassBoundError.
  std::optional<Count> massLimit;
  /// When set, called with every configuration after each event.
  std::function<void(const Configuration&)> observer;
};

/// Direct-method simulator. Propensities are cached in a binary sum tree and
/// refreshed through a species-to-reaction dependency index. Holds only
/// read-only state after construction, so one instance can serve concurrent
/// runs.
class Simulator {
 public:
  Simulator(const Crn& crn, Volume v);

  Trajectory run(const Configuration& init, const StopRule& stop, std::uint64_t seed,
                 const SimulationOptions& options = {}) const;

  const Crn& crn() const { return crn_; }
  Volume volume() const { return volume_; }

 private:
  struct Compiled {
    SpeciesId a = 0, b = 0;
    std::uint8_t kind = 0;  // 1: A, 2: A + B, 3: A + A
    std::int64_t massDelta = 0;
    bool touchesOutput = false;
    std::int64_t yesDelta = 0, noDelta = 0;
  };

  Crn crn_;
  Volume volume_;
  std::vector<Compiled> rx_;
  std::vector<std::vector<std::uint32_t>> affected_;

  double rate(std::size_t r, const Configuration& c) const;
};

/// Convenience wrapper over Simulator.
Trajectory simulate(const Crn& crn, const Configuration& init, Volume v, const StopRule& stop,
                    std::uint64_t seed, const SimulationOptions& options = {});

/// Time of the last event that changed an output count (CRC) or the consensus
/// vote (CRD); 0 for a trajectory without such events. Replays recorded events;
/// for Final-mode trajectories returns the online value.
double stabilizationTime(const Trajectory& t, const Crn& crn);

/// Consensus vote: nullopt when the configuration is empty or mixed.
std::optional<bool> consensusVote(const Configuration& c, const Crn& crn);

/// Writes a trajectory as CSV. Lines starting with `#` carry provenance.
///   full/final: `time,reaction,<species...>` (final: one row, reaction = -1)
///   sparse:     `time,reaction,species,delta`
void writeTrajectoryCsv(std::ostream& os, const Trajectory& t, const Crn& crn,
                        const std::vector<std::string>& provenance = {});

}  // namespace lcrn
