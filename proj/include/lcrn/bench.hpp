#pragma once

// Timing experiments: repeated stochastic runs per size, summary statistics,
// analytic reference curves and scaling fits.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lcrn/compile.hpp"
#include "lcrn/crn.hpp"
#include "lcrn/kinetics.hpp"

namespace lcrn {

/// H_n = 1 + 1/2 + ... + 1/n.
double harmonic(std::uint64_t n);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slopeLow = 0.0;   ///< 95% Student-t interval
  double slopeHigh = 0.0;
};

/// Ordinary least squares of y on x; needs at least 3 points for an interval
/// (with 2 points the interval collapses to the slope).
LinearFit fitLine(const std::vector<double>& x, const std::vector<double>& y);

struct ScalingReport {
  std::string pattern;
  std::vector<Count> sizes;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<double> mean;
  std::vector<double> stddev;
  std::vector<std::optional<double>> reference;
  /// samples[i][t]: measured time of trial t at sizes[i].
  std::vector<std::vector<double>> samples;
  /// Fit of log(mean) on log(n).
  LinearFit logLog;
  /// Fit of mean on ln(n), for logarithmic patterns.
  LinearFit semiLog;
  /// Acceptance bands; unset bands are not checked.
  std::optional<double> referenceTolerance;
  std::optional<double> slopeMin, slopeMax;
  std::size_t incorrect = 0;

  /// Human-readable band violations; empty when every band holds.
  std::vector<std::string> violations() const;
};

struct BenchOptions {
  std::uint64_t seed = 1;
  /// Worker threads; 0 means hardware concurrency.
  std::size_t threads = 0;
};

/// Generic experiment: for each n, runs `trials` simulations of `crn` from
/// init(n) at volume volume(n); trial t at size index i uses seed
/// deriveSeed(options.seed, i, t), so results do not depend on threading.
struct Experiment {
  std::string pattern;
  Crn crn;
  std::function<Configuration(Count n)> init;
  std::function<double(Count n)> volume;
  StopRule stop;  ///< silence windows are replaced by the default per n
  bool useSilence = false;
  /// Quiescence time when false, heuristic stabilization time when true.
  bool measureStabilization = false;
  std::function<std::optional<double>(Count n)> reference;
  /// When set, every run asserts total count <= massLimit(n) at every event.
  std::function<Count(Count n)> massLimit;
  /// Returns false when a finished run has the wrong output.
  std::function<bool(Count n, const Configuration& final)> oracle;
};

ScalingReport runExperiment(const Experiment& e, const std::vector<Count>& sizes,
                            std::size_t trials, const BenchOptions& options = {});

/// X -> Y from n copies, v = n; reference H_n.
ScalingReport benchUnimolecular(const std::vector<Count>& sizes, std::size_t trials,
                                const BenchOptions& options = {});
/// L + L -> L from n copies, v = n; reference 2n(1 - 1/n).
ScalingReport benchLeaderElection(const std::vector<Count>& sizes, std::size_t trials,
                                  const BenchOptions& options = {});
/// C + A -> C + B from n of each, v = 2n; reference 2 H_n.
ScalingReport benchCatalytic(const std::vector<Count>& sizes, std::size_t trials,
                             const BenchOptions& options = {});

/// Input of norm n along the ray r: x_i = floor(n r_i / |r|), with the
/// rounding remainder added to the last nonzero coordinate.
std::vector<Count> rayInput(const std::vector<Count>& ray, Count n);

/// Compiled network along a ray, heuristic stabilization time, volume
/// massBound * n. Throws IncorrectOutputError if any run ends with an output
/// other than the evaluator's.
ScalingReport benchCompiled(const CompiledCrn& compiled, const std::vector<Count>& ray,
                            const std::vector<Count>& sizes, std::size_t trials,
                            const BenchOptions& options = {});

/// Raw samples: `pattern,n,trial,seed,time`.
void writeSamplesCsv(std::ostream& os, const ScalingReport& r,
                     const std::vector<std::string>& provenance = {});
/// Per-size table and fits as plain text.
void writeSummary(std::ostream& os, const ScalingReport& r,
                  const std::vector<std::string>& provenance = {});
/// Whitespace-separated `n mean stddev reference` rows, gnuplot-ready.
void writeGnuplotData(std::ostream& os, const ScalingReport& r);

}  // namespace lcrn
