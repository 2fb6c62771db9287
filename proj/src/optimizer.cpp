#include "swapsim/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

#include "swapsim/errors.hpp"

namespace swapsim {

namespace {

constexpr double kFailed = -std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Generator for one candidate; independent of evaluation order.
std::mt19937_64 candidate_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(seed ^ splitmix64(stream)) ^ index));
}

// Uniform in [0, 1) from the top 53 bits, so results do not depend on the
// standard library's distribution implementations.
double uniform01(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

double normal(std::mt19937_64& g) {
  const double u1 = 1.0 - uniform01(g);
  const double u2 = uniform01(g);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double wrap_angle(double a) {
  const double pi = std::numbers::pi;
  a = std::fmod(a, pi);
  return a < 0.0 ? a + pi : a;
}

double mu_lo(const SearchSpec& spec, int k) {
  return std::max(spec.mu_min, spec.mu_lower[static_cast<std::size_t>(k)]);
}

std::array<double*, 4> mus(PumpConfig& p) { return {&p.mu1, &p.mu2, &p.mu3, &p.mu4}; }
std::array<double*, 5> angle_refs(MeasurementAngles& a) {
  return {&a.a0, &a.a1, &a.a2, &a.b1, &a.b2};
}

void check_spec(const SearchSpec& spec) {
  if (spec.budget < 1) throw std::invalid_argument("optimizer: budget must be >= 1");
  if (!(spec.mu_min > 0.0) || !(spec.mu_max > spec.mu_min) ||
      !(spec.mu_max < kMaxMeanPhotonNumber)) {
    throw std::invalid_argument("optimizer: need 0 < mu_min < mu_max < 100");
  }
  for (int k = 0; k < 4; ++k) {
    if (!(mu_lo(spec, k) <= spec.mu_max)) {
      throw std::invalid_argument("optimizer: mu lower bound above mu_max");
    }
  }
  if (spec.refine_rounds < 0) throw std::invalid_argument("optimizer: refine_rounds < 0");
  if (!(spec.refine_radius > 0.0)) throw std::invalid_argument("optimizer: refine_radius <= 0");
}

void apply_fixed(const SearchSpec& spec, Parameters& p) {
  if (spec.fixed_pump) p.pump = *spec.fixed_pump;
  if (spec.fixed_angles) p.angles = *spec.fixed_angles;
}

Parameters perturb(const SearchSpec& spec, const Parameters& center, double radius,
                   std::mt19937_64& g) {
  Parameters p = center;
  auto pm = mus(p.pump);
  for (int k = 0; k < 4; ++k) {
    const double lo = std::log(mu_lo(spec, k));
    const double hi = std::log(spec.mu_max);
    const double v = std::log(std::max(*pm[k], mu_lo(spec, k))) + radius * (hi - lo) * normal(g);
    *pm[k] = std::exp(std::clamp(v, lo, hi));
  }
  for (double* a : angle_refs(p.angles)) {
    *a = wrap_angle(*a + radius * std::numbers::pi * normal(g));
  }
  apply_fixed(spec, p);
  return p;
}

double evaluate(const SearchSpec& spec, const NetworkConfig& config, const Parameters& p) {
  try {
    const ChshReport r =
        chsh_value(config, p.pump, p.angles, spec.objective == Objective::kMaximizeK);
    const double v = objective_value(spec.objective, r);
    return std::isnan(v) ? kFailed : v;
  } catch (const ModelError&) {
    return kFailed;
  }
}

// Evaluates the candidates in parallel and appends them to the trace in
// index order. Returns the index of the best (lowest index on ties).
std::size_t evaluate_batch(const SearchSpec& spec, const NetworkConfig& config,
                           const std::vector<Parameters>& candidates, SearchResult& out) {
  std::vector<double> values(candidates.size());
  parallel_for(candidates.size(), resolve_threads(spec.threads),
               [&](std::size_t i) { values[i] = evaluate(spec, config, candidates[i]); });
  std::size_t best = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    out.trace.push_back({candidates[i], values[i]});
    if (values[i] == kFailed) ++out.failures;
    if (values[i] > values[best]) best = i;
  }
  return best;
}

// Refinement rounds from `start` with value `start_value`; the stream
// offset keeps independent starts on independent random streams.
void refine_from(const SearchSpec& spec, const NetworkConfig& config, Parameters start,
                 double start_value, std::uint64_t stream_base, SearchResult& out,
                 Parameters& best, double& best_value) {
  Parameters incumbent = start;
  double value = start_value;
  double radius = spec.refine_radius;
  for (int round = 0; round < spec.refine_rounds; ++round) {
    std::vector<Parameters> batch(spec.refine_budget);
    for (std::size_t i = 0; i < batch.size(); ++i) {
      auto g = candidate_rng(spec.seed, stream_base + static_cast<std::uint64_t>(round), i);
      batch[i] = perturb(spec, incumbent, radius, g);
    }
    if (!batch.empty()) {
      const std::size_t first = out.trace.size();
      const std::size_t b = evaluate_batch(spec, config, batch, out);
      if (out.trace[first + b].value > value) {
        value = out.trace[first + b].value;
        incumbent = batch[b];
      }
    }
    radius *= 0.5;
  }
  if (value > best_value) {
    best_value = value;
    best = incumbent;
  }
}

void finish(const NetworkConfig& config, SearchResult& out) {
  if (out.value == kFailed) {
    throw ModelError("optimizer: every evaluation failed");
  }
  out.report = chsh_value(config, out.best.pump, out.best.angles, true);
}

}  // namespace

double objective_value(Objective objective, const ChshReport& report) {
  if (objective == Objective::kMaximizeS) return report.s;
  if (!(report.s > 2.0)) return report.s - 3.0;
  if (report.key.raw > 0.0) return report.key.raw * report.p_success;
  return report.key.raw;
}

Parameters sample_parameters(const SearchSpec& spec, std::uint64_t seed, std::uint64_t stream,
                             std::uint64_t index) {
  auto g = candidate_rng(seed, stream, index);
  Parameters p;
  auto pm = mus(p.pump);
  const double hi = std::log(spec.mu_max);
  if (index % 2 == 1) {
    // Balanced stratum: one shared mu, raised to any per-source lower bound.
    const double lo = std::log(spec.mu_min);
    const double shared = std::exp(lo + (hi - lo) * uniform01(g));
    for (int k = 0; k < 4; ++k) *pm[k] = std::max(shared, mu_lo(spec, k));
  } else {
    for (int k = 0; k < 4; ++k) {
      const double lo = std::log(mu_lo(spec, k));
      *pm[k] = std::exp(lo + (hi - lo) * uniform01(g));
    }
  }
  for (double* a : angle_refs(p.angles)) *a = std::numbers::pi * uniform01(g);
  apply_fixed(spec, p);
  return p;
}

SearchResult optimize(const SearchSpec& spec, const NetworkConfig& config) {
  check_spec(spec);
  validate(config);
  SearchResult out;
  out.trace.reserve(spec.budget + spec.refine_starts * spec.refine_budget *
                                      static_cast<std::size_t>(spec.refine_rounds));
  std::vector<Parameters> global(spec.budget);
  for (std::size_t i = 0; i < global.size(); ++i) global[i] = sample_parameters(spec, spec.seed, 0, i);
  evaluate_batch(spec, config, global, out);

  // Best samples of each stratum (even: independent mu, odd: shared mu),
  // by value then index, interleaved starting with the overall best.
  std::array<std::vector<std::size_t>, 2> strata;
  for (std::size_t i = 0; i < spec.budget; ++i) strata[i % 2].push_back(i);
  for (auto& st : strata) {
    std::stable_sort(st.begin(), st.end(), [&](std::size_t a, std::size_t b) {
      return out.trace[a].value > out.trace[b].value;
    });
  }
  const bool odd_first =
      !strata[1].empty() && out.trace[strata[1][0]].value > out.trace[strata[0][0]].value;
  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < spec.budget; ++k) {
    for (std::size_t which : {odd_first ? 1u : 0u, odd_first ? 0u : 1u}) {
      if (k < strata[which].size()) order.push_back(strata[which][k]);
    }
  }
  out.best = global[order[0]];
  out.value = out.trace[order[0]].value;

  const std::size_t starts = std::min(spec.refine_starts, order.size());
  for (std::size_t s = 0; s < starts; ++s) {
    const double v = out.trace[order[s]].value;
    if (v == kFailed) break;
    refine_from(spec, config, global[order[s]], v, 1 + 1000 * static_cast<std::uint64_t>(s), out,
                out.best, out.value);
  }
  finish(config, out);
  return out;
}

SearchResult refine(const SearchSpec& spec, const NetworkConfig& config, const Parameters& start) {
  check_spec(spec);
  validate(config);
  SearchResult out;
  Parameters p = start;
  apply_fixed(spec, p);
  out.best = p;
  out.value = evaluate(spec, config, p);
  out.trace.push_back({p, out.value});
  if (out.value == kFailed) ++out.failures;
  refine_from(spec, config, p, out.value, 1, out, out.best, out.value);
  finish(config, out);
  return out;
}

ThresholdResult threshold_efficiency(const NetworkConfig& config, const SearchSpec& spec,
                                     ThresholdPolicy policy, const std::optional<Parameters>& start,
                                     double lo, double hi, double tol) {
  if (!(lo >= 0.0 && lo < hi && hi <= 1.0)) {
    throw std::invalid_argument("threshold_efficiency: need 0 <= lo < hi <= 1");
  }
  auto at = [&](double eta) {
    NetworkConfig c = config;
    for (int d = 0; d < 4; ++d) c.eta[static_cast<std::size_t>(d)] = eta;
    return c;
  };
  Parameters incumbent;
  if (start) {
    incumbent = *start;
  } else {
    incumbent = optimize(spec, at(hi)).best;
  }
  auto s_at = [&](double eta, Parameters& params) {
    const NetworkConfig c = at(eta);
    switch (policy) {
      case ThresholdPolicy::kFixed:
        return chsh_value(c, params.pump, params.angles, false).s;
      case ThresholdPolicy::kRefine: {
        const SearchResult r = refine(spec, c, params);
        params = r.best;
        return r.report.s;
      }
      case ThresholdPolicy::kFull: {
        const SearchResult r = optimize(spec, c);
        params = r.best;
        return r.report.s;
      }
    }
    throw std::logic_error("threshold_efficiency: unknown policy");
  };

  Parameters p_hi = incumbent;
  const double s_hi = s_at(hi, p_hi);
  Parameters p_lo = p_hi;
  const double s_lo = s_at(lo, p_lo);
  if (!(s_hi > 2.0 && s_lo < 2.0)) {
    throw ModelError("threshold_efficiency: S - 2 does not change sign on the bracket");
  }
  ThresholdResult res;
  double a = lo;
  double b = hi;
  res.eta = hi;
  res.s_at_eta = s_hi;
  res.params = p_hi;
  while (b - a > 1e-7) {
    const double mid = 0.5 * (a + b);
    Parameters p = p_hi;
    const double s = s_at(mid, p);
    ++res.iterations;
    res.eta = mid;
    res.s_at_eta = s;
    res.params = p;
    if (std::abs(s - 2.0) <= tol) break;
    if (s > 2.0) {
      b = mid;
      p_hi = p;
    } else {
      a = mid;
    }
  }
  return res;
}

std::vector<ScanRow> distance_scan(const NetworkConfig& config, const SearchSpec& spec,
                                   const std::vector<double>& lengths_km,
                                   const std::optional<Parameters>& fixed) {
  if (lengths_km.empty()) throw std::invalid_argument("distance_scan: no distances given");
  std::vector<ScanRow> rows;
  std::optional<Parameters> previous;
  for (double length : lengths_km) {
    NetworkConfig c = config;
    c.length_km = length;
    c.channel_override.reset();
    ScanRow row;
    row.length_km = length;
    row.scheme = c.scheme;
    ChshReport report;
    if (fixed) {
      row.params = *fixed;
      report = chsh_value(c, fixed->pump, fixed->angles, true);
    } else {
      const SearchResult r = previous ? refine(spec, c, *previous) : optimize(spec, c);
      row.params = r.best;
      report = r.report;
      previous = r.best;
    }
    row.s = report.s;
    row.key_raw = report.key.raw;
    row.key = report.key.rate;
    row.key_per_pulse = report.key_rate_per_pulse;
    row.qber = report.key.qber;
    row.p_success = report.p_success;
    rows.push_back(row);
  }
  return rows;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SWAPSIM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace swapsim
