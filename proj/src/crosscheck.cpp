#include "swapsim/crosscheck.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "swapsim/fock.hpp"
#include "swapsim/optimizer.hpp"

namespace swapsim {

namespace {

double uniform(std::mt19937_64& g, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(g() >> 11) * 0x1.0p-53);
}

}  // namespace

double CrosscheckReport::max_rel() const {
  return std::max({max_rel_p_success, max_rel_outcomes, max_rel_pdm_diagonal});
}

double relative_difference(double a, double b, double floor) {
  const double d = std::abs(a - b);
  return std::abs(b) < floor ? d : d / std::abs(b);
}

CrosscheckCase random_crosscheck_case(std::uint64_t seed, std::uint64_t index, double mu) {
  std::mt19937_64 g(seed * 0x9E3779B97F4A7C15ull + index);
  CrosscheckCase c;
  auto& n = c.config;
  n.scheme = index % 2 == 0 ? Scheme::kCenter : Scheme::kSide;
  ChannelTransmittances ch;
  ch.eta_ah = uniform(g, 0.3, 1.0);
  ch.eta_av = uniform(g, 0.3, 1.0);
  ch.eta_bh = uniform(g, 0.3, 1.0);
  ch.eta_bv = uniform(g, 0.3, 1.0);
  n.channel_override = ch;
  for (double& e : n.eta) e = uniform(g, 0.5, 1.0);
  n.t_mode = uniform(g, 0.8, 1.0);
  n.nu = uniform(g, 0.0, 1e-4);
  n.bsm_patterns = (g() & 1) ? BsmPatterns::kBoth : BsmPatterns::kSingle;
  c.pump = {mu, mu, mu, mu};
  for (double* a : {&c.angles.a0, &c.angles.a1, &c.angles.a2, &c.angles.b1, &c.angles.b2}) {
    *a = uniform(g, 0.0, std::numbers::pi);
  }
  return c;
}

void run_crosscheck(CrosscheckCase& c, const oracle::OracleOptions& options) {
  const oracle::NetworkOracle orc(c.config, c.pump, options);
  const GaussianState pre = build_pre_bsm_state(c.config, c.pump);
  const HeraldedState heralded = heralded_state(pre, c.config.nu, c.config.bsm_patterns);

  c.p_success_gaussian = heralded.p_success;
  c.p_success_oracle = orc.p_success();
  c.rel_p_success = relative_difference(c.p_success_gaussian, c.p_success_oracle);

  c.rel_outcomes = 0.0;
  const auto& a = c.angles;
  for (double ta : {a.a1, a.a2}) {
    for (double tb : {a.b1, a.b2}) {
      const OutcomeDistribution dg = outcome_distribution(pre, ta, tb, c.config);
      const OutcomeDistribution dor = orc.outcome_distribution(ta, tb);
      for (std::size_t k = 0; k < 16; ++k) {
        c.rel_outcomes = std::max(c.rel_outcomes, relative_difference(dg.p[k], dor.p[k]));
      }
    }
  }

  const PartialDensityMatrix pg = partial_density_matrix(heralded);
  const Matrix6c po = orc.partial_density_matrix();
  c.rel_pdm_diagonal = 0.0;
  for (int i = 0; i < 6; ++i) {
    c.rel_pdm_diagonal = std::max(
        c.rel_pdm_diagonal, relative_difference(pg.elements(i, i).real(), po(i, i).real()));
  }
}

CrosscheckReport crosscheck(std::uint64_t seed, int count, double mu,
                            const oracle::OracleOptions& options, int threads) {
  CrosscheckReport report;
  report.cases.resize(static_cast<std::size_t>(std::max(count, 0)));
  parallel_for(report.cases.size(), resolve_threads(threads), [&](std::size_t i) {
    report.cases[i] = random_crosscheck_case(seed, i, mu);
    run_crosscheck(report.cases[i], options);
  });
  for (const auto& c : report.cases) {
    report.max_rel_p_success = std::max(report.max_rel_p_success, c.rel_p_success);
    report.max_rel_outcomes = std::max(report.max_rel_outcomes, c.rel_outcomes);
    report.max_rel_pdm_diagonal = std::max(report.max_rel_pdm_diagonal, c.rel_pdm_diagonal);
  }
  return report;
}

}  // namespace swapsim
