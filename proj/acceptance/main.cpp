// Acceptance run: one PASS/FAIL line per criterion, driven by the presets.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "swapsim/config.hpp"
#include "swapsim/crosscheck.hpp"
#include "swapsim/errors.hpp"
#include "swapsim/fock.hpp"
#include "swapsim/optimizer.hpp"
#include "swapsim/table.hpp"

using namespace swapsim;

namespace {

RunConfig preset(const std::string& name) {
  return load_config(std::string(SWAPSIM_PRESET_DIR) + "/" + name);
}

bool within(double value, double target, double tol) { return std::abs(value - target) <= tol; }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome criterion1() {
  const RunConfig rc = preset("ideal-0km-optimize.cfg");
  const auto t0 = std::chrono::steady_clock::now();
  const SearchResult r = optimize(rc.search, rc.network);
  const double secs = seconds_since(t0);
  const RunConfig fixed = preset("ideal-0km.cfg");
  const double s_fixed = chsh_value(fixed.network, fixed.pump, fixed.angles, false).s;
  const bool pass = within(r.report.s, 2.34, 0.01) && within(s_fixed, 2.34, 0.01) && secs <= 600;
  return {pass, "optimized S = " + fmt("%.4f", r.report.s) + " in " + fmt("%.0f", secs) +
                    " s; bundled parameters S = " + fmt("%.4f", s_fixed) +
                    " (target 2.34 +- 0.01, <= 600 s)"};
}

double run_threshold(const std::string& name) {
  const RunConfig rc = preset(name);
  std::optional<Parameters> start;
  if (rc.threshold.start == "config") start = Parameters{rc.pump, rc.angles};
  return threshold_efficiency(rc.network, rc.search, rc.threshold.policy, start, rc.threshold.lo,
                              rc.threshold.hi, rc.threshold.tol)
      .eta;
}

Outcome criterion2() {
  const double eta = run_threshold("threshold-ideal-0km.cfg");
  return {within(eta, 0.911, 0.002), "eta* = " + fmt("%.5f", eta) + " (target 0.911 +- 0.002)"};
}

Outcome criterion3() {
  const double e6 = run_threshold("threshold-50km-nu1e-6.cfg");
  const double e5 = run_threshold("threshold-50km-nu1e-5.cfg");
  const double ex = run_threshold("threshold-experimental-50km.cfg");
  const bool pass = within(e6, 0.916, 0.003) && within(e5, 0.927, 0.003) && within(ex, 0.974, 0.003);
  return {pass, "nu 1e-6: " + fmt("%.5f", e6) + " (0.916), nu 1e-5: " + fmt("%.5f", e5) +
                    " (0.927), experimental: " + fmt("%.5f", ex) + " (0.974); tol 0.003"};
}

Outcome criterion4() {
  const RunConfig rc = preset("experimental-0km.cfg");
  const auto t0 = std::chrono::steady_clock::now();
  const double s = chsh_value(rc.network, rc.pump, rc.angles, false).s;
  const double secs = seconds_since(t0);
  return {within(s, 1.486, 0.005) && secs < 60,
          "S = " + fmt("%.4f", s) + " in " + fmt("%.2f", secs) + " s (target 1.486 +- 0.005)"};
}

Outcome criterion5() {
  const RunConfig rc = preset("experimental-eta1-scan.cfg");
  const auto rows =
      distance_scan(rc.network, rc.search, rc.scan.lengths_km, Parameters{rc.pump, rc.angles});
  const std::array<double, 3> target{2.120, 2.115, 2.104};
  bool pass = rows.size() == 3;
  std::string detail = "S =";
  for (std::size_t i = 0; i < rows.size() && i < 3; ++i) {
    pass = pass && within(rows[i].s, target[i], 0.005);
    detail += " " + fmt("%.4f", rows[i].s) + " (" + fmt("%.3f", target[i]) + " at " +
              fmt("%.0f", rows[i].length_km) + " km)";
  }
  return {pass, detail + "; tol 0.005"};
}

Outcome criterion6() {
  const RunConfig rc = preset("experimental-50km-eta1.cfg");
  const PartialDensityMatrix raw = partial_density_matrix(herald(rc.network, rc.pump));
  const double f = bell_fidelity(renormalize(raw));
  return {within(f, 0.47, 0.01), "F = " + fmt("%.4f", f) + " (target 0.47 +- 0.01), trace before "
                                     "renormalization " + fmt("%.4f", raw.trace_raw)};
}

Outcome criterion7() {
  const RunConfig rc = preset("keyrate-100km.cfg");
  std::array<ScanRow, 2> rows;
  for (std::size_t i = 0; i < 2; ++i) {
    NetworkConfig n = rc.network;
    n.scheme = rc.scan.schemes.at(i);
    rows[i] = distance_scan(n, rc.search, rc.scan.lengths_km).at(0);
  }
  const double ch = rows[0].key_per_pulse, sh = rows[1].key_per_pulse;
  const double ratio = sh > 0.0 ? ch / sh : std::numeric_limits<double>::infinity();
  const bool pass = ch > 0.0 && sh > 0.0 && ratio >= 30 && ratio <= 300;
  return {pass, "K per pulse CH " + fmt("%.3e", ch) + " (S " + fmt("%.4f", rows[0].s) +
                    ", raw " + fmt("%.4f", rows[0].key_raw) + "), SH " + fmt("%.3e", sh) +
                    " (S " + fmt("%.4f", rows[1].s) + "), ratio " +
                    (sh > 0.0 ? fmt("%.1f", ratio) : std::string("undefined")) +
                    " (target [30, 300])"};
}

Outcome criterion8() {
  const RunConfig t1 = preset("hom-t1.cfg");
  const RunConfig t9 = preset("hom-t0.9.cfg");
  const double v1 = hom_visibility(t1.network, t1.pump).visibility;
  const double v9 = hom_visibility(t9.network, t9.pump).visibility;
  return {within(v1, 0.91, 0.01) && within(v9, 0.74, 0.01),
          "V = " + fmt("%.4f", v1) + " at T_mode 1 (0.91), " + fmt("%.4f", v9) +
              " at T_mode 0.9 (0.74); tol 0.01"};
}

Outcome criterion9() {
  const RunConfig rc = preset("oracle.cfg");
  const auto t0 = std::chrono::steady_clock::now();
  const CrosscheckReport r = crosscheck(rc.oracle.seed, rc.oracle.random_configs, rc.oracle.mu,
                                        {rc.oracle.n_max, rc.oracle.max_pairs}, 0);
  const double secs = seconds_since(t0);
  bool ch = false, sh = false;
  for (const auto& c : r.cases) (c.config.scheme == Scheme::kCenter ? ch : sh) = true;
  const bool pass = r.cases.size() >= 5 && ch && sh && r.max_rel() <= 1e-3 && secs <= 300;
  return {pass, std::to_string(r.cases.size()) + " configs, max relative deviation p_success " +
                    fmt("%.2e", r.max_rel_p_success) + ", outcomes " +
                    fmt("%.2e", r.max_rel_outcomes) + ", pdm diagonal " +
                    fmt("%.2e", r.max_rel_pdm_diagonal) + " in " + fmt("%.0f", secs) + " s"};
}

NetworkConfig random_network(std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  NetworkConfig n;
  n.scheme = u(g) < 0.5 ? Scheme::kCenter : Scheme::kSide;
  n.length_km = 100 * u(g);
  n.hbs_extra_loss = 0.2 + 0.8 * u(g);
  n.hbs_lossy_mode = std::array<const char*, 4>{"H2", "V2", "H3", "V3"}[g() % 4];
  n.t_mode = u(g);
  for (double& e : n.eta) e = 0.05 + 0.95 * u(g);
  n.nu = u(g) < 0.2 ? 0.0 : std::pow(10.0, -7 + 4 * u(g));
  n.bsm_patterns = u(g) < 0.5 ? BsmPatterns::kSingle : BsmPatterns::kBoth;
  return n;
}

std::string serialize(const SearchResult& r) {
  Table t;
  t.columns = {"value", "s", "mu1", "mu2", "mu3", "mu4", "a0", "a1", "a2", "b1", "b2"};
  for (const auto& e : r.trace) {
    const auto& p = e.params;
    t.rows.push_back({e.value, 0.0, p.pump.mu1, p.pump.mu2, p.pump.mu3, p.pump.mu4, p.angles.a0,
                      p.angles.a1, p.angles.a2, p.angles.b1, p.angles.b2});
  }
  t.rows.push_back({r.value, r.report.s, r.best.pump.mu1, r.best.pump.mu2, r.best.pump.mu3,
                    r.best.pump.mu4, r.best.angles.a0, r.best.angles.a1, r.best.angles.a2,
                    r.best.angles.b1, r.best.angles.b2});
  std::ostringstream out;
  write_csv(out, t);
  return out.str();
}

Outcome criterion10() {
  std::mt19937_64 g(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_sum = 0.0, min_p = 1.0, max_abs_s = 0.0, worst_symp = 0.0, min_eig = 1.0;
  int failures = 0;
  for (int i = 0; i < 100; ++i) {
    const NetworkConfig n = random_network(g);
    const PumpConfig pump{std::pow(10.0, -4 + 3 * u(g)), std::pow(10.0, -4 + 3 * u(g)),
                          std::pow(10.0, -4 + 3 * u(g)), std::pow(10.0, -4 + 3 * u(g))};
    MeasurementAngles a;
    for (double* x : {&a.a0, &a.a1, &a.a2, &a.b1, &a.b2}) *x = std::numbers::pi * u(g);
    try {
      const GaussianState pre = build_pre_bsm_state(n, pump);
      min_eig = std::min(min_eig, is_physical(pre) ? 1.0 : min_physical_eigenvalue(pre));
      worst_symp = std::max(worst_symp, symplectic_defect(beamsplitter(
                                            3 * u(g), "H1", "V4", pre.modes())));
      const HeraldedState h = heralded_state(pre, n.nu, n.bsm_patterns);
      for (const auto& c : h.components) {
        if (!is_physical(c.state)) min_eig = std::min(min_eig, min_physical_eigenvalue(c.state));
      }
      for (double ta : {a.a1, a.a2}) {
        for (double tb : {a.b1, a.b2}) {
          const OutcomeDistribution d = outcome_distribution(pre, ta, tb, n);
          worst_sum = std::max(worst_sum, std::abs(d.total() - 1.0));
          for (double p : d.p) min_p = std::min(min_p, p);
        }
      }
      max_abs_s = std::max(max_abs_s, std::abs(chsh_value(n, pump, a, false).s));
    } catch (const ModelError&) {
      ++failures;
    }
  }

  // Byte-identical optimizer output across thread counts.
  SearchSpec spec;
  spec.budget = 400;
  spec.refine_rounds = 4;
  spec.refine_budget = 40;
  spec.seed = 99;
  NetworkConfig n;
  n.length_km = 25;
  n.nu = 1e-6;
  std::string reference;
  bool identical = true;
  for (int threads : {1, 2, 5, 8}) {
    spec.threads = threads;
    const std::string text = serialize(optimize(spec, n));
    if (reference.empty()) reference = text;
    identical = identical && text == reference;
  }

  const bool pass = failures == 0 && worst_sum <= 1e-9 && min_p >= -1e-9 &&
                    max_abs_s <= 2 * std::numbers::sqrt2 + 1e-6 && worst_symp <= 1e-12 &&
                    min_eig > -1e-9 && identical;
  return {pass, "100 configs: model errors " + std::to_string(failures) + ", max |sum p - 1| " +
                    fmt("%.1e", worst_sum) + ", min p " + fmt("%.1e", min_p) + ", max |S| " +
                    fmt("%.4f", max_abs_s) + ", symplectic defect " + fmt("%.1e", worst_symp) +
                    ", physical " + (min_eig > -1e-9 ? "yes" : "no") +
                    "; thread counts 1/2/5/8 byte-identical: " + (identical ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::array<std::function<Outcome()>, 10> criteria{
      criterion1, criterion2, criterion3, criterion4, criterion5,
      criterion6, criterion7, criterion8, criterion9, criterion10};
  // Optional argument: run only the listed criterion numbers.
  std::vector<bool> selected(10, argc <= 1);
  for (int i = 1; i < argc; ++i) {
    const int k = std::atoi(argv[i]);
    if (k >= 1 && k <= 10) selected[static_cast<std::size_t>(k - 1)] = true;
  }
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!selected[i]) continue;
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %zu: %s  %s\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  return failed;
}
