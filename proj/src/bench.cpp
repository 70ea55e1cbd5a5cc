#include "lcrn/bench.hpp"

#include <atomic>
#include <cmath>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

#include "lcrn/errors.hpp"

namespace lcrn {

double harmonic(std::uint64_t n) {
  double h = 0.0;
  for (std::uint64_t k = n; k >= 1; --k) h += 1.0 / static_cast<double>(k);
  return h;
}

LinearFit fitLine(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ValidationError("fit needs two or more points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) throw ValidationError("fit needs distinct x values");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.slopeLow = f.slopeHigh = f.slope;
  if (x.size() > 2) {
    double sse = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double e = y[i] - (f.intercept + f.slope * x[i]);
      sse += e * e;
    }
    double se = std::sqrt(sse / (n - 2) / sxx);
    boost::math::students_t dist(n - 2);
    double q = boost::math::quantile(boost::math::complement(dist, 0.025));
    f.slopeLow = f.slope - q * se;
    f.slopeHigh = f.slope + q * se;
  }
  return f;
}

std::vector<std::string> ScalingReport::violations() const {
  std::vector<std::string> out;
  if (incorrect > 0) out.push_back(std::to_string(incorrect) + " runs ended with a wrong output");
  if (referenceTolerance) {
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      if (!reference[i]) continue;
      double rel = std::abs(mean[i] - *reference[i]) / *reference[i];
      if (rel > *referenceTolerance) {
        std::ostringstream os;
        os << "n=" << sizes[i] << ": mean " << mean[i] << " is " << rel * 100
           << "% from reference " << *reference[i];
        out.push_back(os.str());
      }
    }
  }
  if ((slopeMin && logLog.slope < *slopeMin) || (slopeMax && logLog.slope > *slopeMax)) {
    std::ostringstream os;
    os << "log-log slope " << logLog.slope << " outside [" << slopeMin.value_or(-INFINITY) << ", "
       << slopeMax.value_or(INFINITY) << "]";
    out.push_back(os.str());
  }
  return out;
}

ScalingReport runExperiment(const Experiment& e, const std::vector<Count>& sizes,
                            std::size_t trials, const BenchOptions& options) {
  if (sizes.empty() || trials == 0) throw ValidationError("need at least one size and one trial");
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) throw ValidationError("sizes must be strictly increasing");
  }
  ScalingReport r;
  r.pattern = e.pattern;
  r.sizes = sizes;
  r.trials = trials;
  r.seed = options.seed;
  r.samples.assign(sizes.size(), std::vector<double>(trials, 0.0));
  std::vector<std::vector<char>> wrong(sizes.size(), std::vector<char>(trials, 0));

  std::vector<Simulator> sims;
  std::vector<Configuration> inits;
  std::vector<StopRule> stops;
  for (Count n : sizes) {
    sims.emplace_back(e.crn, Volume(e.volume(n)));
    inits.push_back(e.init(n));
    StopRule stop = e.stop;
    if (e.useSilence) stop.silenceWindow = defaultSilenceWindow(inits.back());
    stops.push_back(stop);
  }

  const std::size_t jobs = sizes.size() * trials;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failureMutex;
  auto worker = [&] {
    for (;;) {
      std::size_t job = next.fetch_add(1);
      if (job >= jobs) return;
      std::size_t i = job / trials, t = job % trials;
      try {
        SimulationOptions so;
        if (e.massLimit) so.massLimit = e.massLimit(sizes[i]);
        Trajectory tr = sims[i].run(inits[i], stops[i], deriveSeed(options.seed, i, t), so);
        r.samples[i][t] = e.measureStabilization ? tr.lastOutputChange : tr.finalTime;
        if (e.oracle && !e.oracle(sizes[i], tr.final)) wrong[i][t] = 1;
      } catch (...) {
        std::lock_guard lock(failureMutex);
        if (!failure) failure = std::current_exception();
        next = jobs;
      }
    }
  };
  std::size_t threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::max<std::size_t>(1, std::min(threads, jobs));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<double> logn, means, px, py;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    double sum = 0;
    for (double v : r.samples[i]) sum += v;
    double mean = sum / static_cast<double>(trials);
    double ss = 0;
    for (double v : r.samples[i]) ss += (v - mean) * (v - mean);
    r.mean.push_back(mean);
    r.stddev.push_back(trials > 1 ? std::sqrt(ss / static_cast<double>(trials - 1)) : 0.0);
    r.reference.push_back(e.reference ? e.reference(sizes[i]) : std::nullopt);
    for (char w : wrong[i]) r.incorrect += w;
    logn.push_back(std::log(static_cast<double>(sizes[i])));
    means.push_back(mean);
    if (mean > 0) {
      px.push_back(logn.back());
      py.push_back(std::log(mean));
    }
  }
  if (sizes.size() >= 2) r.semiLog = fitLine(logn, means);
  if (px.size() >= 2) r.logLog = fitLine(px, py);
  return r;
}

namespace {

Crn singleReaction(std::vector<std::string> species, NamedReaction r) {
  CrnBuilder b;
  for (const auto& s : species) b.addSpecies(s);
  b.addReaction(std::move(r));
  return b.build();
}

}  // namespace

ScalingReport benchUnimolecular(const std::vector<Count>& sizes, std::size_t trials,
                                const BenchOptions& options) {
  Experiment e;
  e.pattern = "unimolecular";
  e.crn = singleReaction({"X", "Y"}, {{{"X", 1}}, {{"Y", 1}}});
  e.init = [crn = e.crn](Count n) { return crn.configuration({{"X", n}}); };
  e.volume = [](Count n) { return static_cast<double>(n); };
  e.reference = [](Count n) { return std::optional<double>(harmonic(n)); };
  ScalingReport r = runExperiment(e, sizes, trials, options);
  r.referenceTolerance = 0.10;
  return r;
}

ScalingReport benchLeaderElection(const std::vector<Count>& sizes, std::size_t trials,
                                  const BenchOptions& options) {
  Experiment e;
  e.pattern = "leader";
  e.crn = singleReaction({"L"}, {{{"L", 2}}, {{"L", 1}}});
  e.init = [crn = e.crn](Count n) { return crn.configuration({{"L", n}}); };
  e.volume = [](Count n) { return static_cast<double>(n); };
  e.reference = [](Count n) {
    double x = static_cast<double>(n);
    return std::optional<double>(2.0 * x * (1.0 - 1.0 / x));
  };
  ScalingReport r = runExperiment(e, sizes, trials, options);
  r.referenceTolerance = 0.10;
  return r;
}

ScalingReport benchCatalytic(const std::vector<Count>& sizes, std::size_t trials,
                             const BenchOptions& options) {
  Experiment e;
  e.pattern = "catalytic";
  e.crn = singleReaction({"A", "B", "C"}, {{{"C", 1}, {"A", 1}}, {{"C", 1}, {"B", 1}}});
  e.init = [crn = e.crn](Count n) { return crn.configuration({{"C", n}, {"A", n}}); };
  e.volume = [](Count n) { return 2.0 * static_cast<double>(n); };
  e.reference = [](Count n) { return std::optional<double>(2.0 * harmonic(n)); };
  ScalingReport r = runExperiment(e, sizes, trials, options);
  r.referenceTolerance = 0.10;
  return r;
}

std::vector<Count> rayInput(const std::vector<Count>& ray, Count n) {
  if (ray.empty()) throw ValidationError("empty ray");
  Count norm = 0;
  for (Count v : ray) norm += v;
  if (norm == 0) throw ValidationError("ray must be nonzero");
  std::vector<Count> x(ray.size(), 0);
  Count used = 0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < ray.size(); ++i) {
    x[i] = n * ray[i] / norm;
    used += x[i];
    if (ray[i] != 0) last = i;
  }
  x[last] += n - used;
  return x;
}

ScalingReport benchCompiled(const CompiledCrn& compiled, const std::vector<Count>& ray,
                            const std::vector<Count>& sizes, std::size_t trials,
                            const BenchOptions& options) {
  if (ray.size() != compiled.spec.k) throw ValidationError("ray arity does not match the function arity");
  Experiment e;
  e.pattern = "compiled";
  e.crn = compiled.crn;
  e.init = [&](Count n) { return compiled.crn.inputConfiguration(rayInput(ray, n)); };
  e.volume = [&](Count n) {
    auto x = rayInput(ray, n);
    return compiledVolume(compiled, x);
  };
  e.useSilence = true;
  e.measureStabilization = true;
  e.massLimit = [&](Count n) { return compiled.massBound * n; };
  e.oracle = [&](Count n, const Configuration& final) {
    auto x = rayInput(ray, n);
    InputVector xi(x.begin(), x.end());
    FunctionValue y = evalFunction(compiled.spec, xi);
    auto got = compiled.crn.outputCounts(final);
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (static_cast<Int>(got[j]) != y[j]) return false;
    }
    return true;
  };
  ScalingReport r = runExperiment(e, sizes, trials, options);
  r.slopeMin = 0.7;
  r.slopeMax = 1.3;
  if (r.incorrect > 0) {
    throw IncorrectOutputError(std::to_string(r.incorrect) +
                               " compiled runs ended with an output other than f(x)");
  }
  return r;
}

void writeSamplesCsv(std::ostream& os, const ScalingReport& r,
                     const std::vector<std::string>& provenance) {
  for (const auto& line : provenance) os << "# " << line << '\n';
  os << "# seed=" << r.seed << '\n';
  os << "pattern,n,trial,seed,time\n";
  auto precision = os.precision(17);
  for (std::size_t i = 0; i < r.sizes.size(); ++i) {
    for (std::size_t t = 0; t < r.trials; ++t) {
      os << r.pattern << ',' << r.sizes[i] << ',' << t << ',' << deriveSeed(r.seed, i, t) << ','
         << r.samples[i][t] << '\n';
    }
  }
  os.precision(precision);
}

void writeSummary(std::ostream& os, const ScalingReport& r,
                  const std::vector<std::string>& provenance) {
  for (const auto& line : provenance) os << "# " << line << '\n';
  os << "pattern: " << r.pattern << '\n';
  os << "seed: " << r.seed << '\n';
  os << "trials: " << r.trials << '\n';
  os << std::left << std::setw(10) << "n" << std::setw(16) << "mean" << std::setw(16) << "stddev"
     << std::setw(16) << "reference" << "rel_err\n";
  for (std::size_t i = 0; i < r.sizes.size(); ++i) {
    os << std::setw(10) << r.sizes[i] << std::setw(16) << r.mean[i] << std::setw(16)
       << r.stddev[i];
    if (r.reference[i]) {
      os << std::setw(16) << *r.reference[i]
         << std::abs(r.mean[i] - *r.reference[i]) / *r.reference[i];
    } else {
      os << std::setw(16) << "-" << "-";
    }
    os << '\n';
  }
  os << std::right;
  os << "loglog_slope: " << r.logLog.slope << " [" << r.logLog.slopeLow << ", "
     << r.logLog.slopeHigh << "]\n";
  os << "mean_vs_ln_n_slope: " << r.semiLog.slope << " [" << r.semiLog.slopeLow << ", "
     << r.semiLog.slopeHigh << "]\n";
  os << "incorrect_runs: " << r.incorrect << '\n';
  auto v = r.violations();
  os << "bands: " << (v.empty() ? "ok" : "violated") << '\n';
  for (const auto& s : v) os << "violation: " << s << '\n';
}

void writeGnuplotData(std::ostream& os, const ScalingReport& r) {
  os << "# n mean stddev reference\n";
  for (std::size_t i = 0; i < r.sizes.size(); ++i) {
    os << r.sizes[i] << ' ' << r.mean[i] << ' ' << r.stddev[i] << ' ';
    if (r.reference[i]) {
      os << *r.reference[i];
    } else {
      os << "nan";
    }
    os << '\n';
  }
}

}  // namespace lcrn
