#pragma once

// Random search over pump photon numbers and measurement angles, threshold
// efficiency by bisection, and distance scans.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "swapsim/detection.hpp"

namespace swapsim {

enum class Objective { kMaximizeS, kMaximizeK };

struct Parameters {
  PumpConfig pump;
  MeasurementAngles angles;
};

struct SearchSpec {
  Objective objective = Objective::kMaximizeS;
  // mu sampled log-uniformly in [max(mu_min, mu_lower[k]), mu_max]; every
  // odd global sample uses one shared mu for all four sources.
  double mu_min = 1e-6;
  double mu_max = 0.5;
  std::array<double, 4> mu_lower{0.0, 0.0, 0.0, 0.0};
  std::size_t budget = 20000;  // global samples
  std::uint64_t seed = 1;
  int refine_rounds = 12;          // radius halves every round
  std::size_t refine_budget = 200;  // samples per round and start
  std::size_t refine_starts = 3;    // best samples, alternating between the two strata
  double refine_radius = 0.25;      // initial radius, fraction of each range
  // Hold the pump or the angles at these values instead of searching them.
  std::optional<PumpConfig> fixed_pump;
  std::optional<MeasurementAngles> fixed_angles;
  int threads = 0;  // 0: SWAPSIM_THREADS or hardware concurrency
};

struct TraceEntry {
  Parameters params;
  double value;  // objective value; -inf when the evaluation failed
};

struct SearchResult {
  Parameters best;
  double value = 0.0;  // best objective value
  ChshReport report;   // full evaluation at `best`
  std::vector<TraceEntry> trace;
  std::size_t failures = 0;
};

// Objective value used for ranking. S for kMaximizeS. For kMaximizeK, in
// increasing tiers: S - 3 when S <= 2; the raw per-herald rate
// 1 - h(Q) - chi(S) (in [-1, 0]) when S > 2 but no key; the per-pulse rate
// raw * p_success when it is positive.
double objective_value(Objective objective, const ChshReport& report);

// Global log-uniform / uniform sampling, then local refinement around the
// best samples. Deterministic for a fixed seed regardless of thread count.
// Throws ModelError if every evaluation failed.
SearchResult optimize(const SearchSpec& spec, const NetworkConfig& config);

// Local refinement only, starting from `start`.
SearchResult refine(const SearchSpec& spec, const NetworkConfig& config, const Parameters& start);

// A parameter vector the search would draw for (seed, stream, index).
Parameters sample_parameters(const SearchSpec& spec, std::uint64_t seed, std::uint64_t stream,
                             std::uint64_t index);

enum class ThresholdPolicy {
  kFixed,    // keep the starting parameters at every efficiency
  kRefine,   // local refinement from the previous optimum (default)
  kFull,     // full global search at every efficiency
};

struct ThresholdResult {
  double eta = 0.0;
  double s_at_eta = 0.0;
  Parameters params;
  int iterations = 0;
};

// Uniform efficiency eta on eta_1..eta_4 such that the optimized S equals 2,
// by bisection on [lo, hi] until |S - 2| <= tol or the bracket is narrower
// than 1e-7. `start` seeds kFixed/kRefine; without it a global search at
// eta = hi is run first. Throws ModelError without a sign change.
ThresholdResult threshold_efficiency(const NetworkConfig& config, const SearchSpec& spec,
                                     ThresholdPolicy policy,
                                     const std::optional<Parameters>& start = std::nullopt,
                                     double lo = 0.5, double hi = 1.0, double tol = 1e-4);

struct ScanRow {
  double length_km = 0.0;
  Scheme scheme = Scheme::kCenter;
  double s = 0.0;
  double key_raw = 0.0;
  double key = 0.0;           // per herald
  double key_per_pulse = 0.0;
  double qber = 0.0;
  double p_success = 0.0;
  Parameters params;
};

// Per-distance results. With `fixed`, every point uses those parameters;
// otherwise the first point runs a full search and later points refine
// from the previous optimum.
std::vector<ScanRow> distance_scan(const NetworkConfig& config, const SearchSpec& spec,
                                   const std::vector<double>& lengths_km,
                                   const std::optional<Parameters>& fixed = std::nullopt);

// Worker count: `requested` if > 0, else SWAPSIM_THREADS, else the hardware
// concurrency (at least 1).
int resolve_threads(int requested);

// Runs fn(i) for i in [0, n) on `threads` workers.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace swapsim
