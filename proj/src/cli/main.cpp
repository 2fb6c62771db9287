// swapsim command-line front end.
//
// Exit codes: 0 success, 1 model error (including a failed oracle
// crosscheck or a threshold search without a sign change), 2 configuration
// or usage error, 3 the configured network never heralds.

#include <CLI11.hpp>

#include <array>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <tuple>

#include "swapsim/config.hpp"
#include "swapsim/crosscheck.hpp"
#include "swapsim/errors.hpp"
#include "swapsim/fock.hpp"
#include "swapsim/optimizer.hpp"
#include "swapsim/table.hpp"

using namespace swapsim;

namespace {

constexpr int kExitModel = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNeverHeralds = 3;

struct Options {
  std::string config_path;
  std::string out;
  std::string format;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string trace;
};

const std::vector<std::string> kParamColumns{"mu1", "mu2", "mu3", "mu4", "a0",
                                             "a1",  "a2",  "b1",  "b2"};

void append_params(std::vector<Cell>& row, const Parameters& p) {
  for (double v : {p.pump.mu1, p.pump.mu2, p.pump.mu3, p.pump.mu4, p.angles.a0, p.angles.a1,
                   p.angles.a2, p.angles.b1, p.angles.b2}) {
    row.emplace_back(v);
  }
}

std::vector<std::string> with_params(std::vector<std::string> cols) {
  cols.insert(cols.end(), kParamColumns.begin(), kParamColumns.end());
  return cols;
}

std::vector<std::string> report_columns() {
  return with_params({"scheme", "L_km", "s", "e_a1b1", "e_a2b1", "e_a1b2", "e_a2b2",
                      "p_success", "qber", "key_raw", "key", "key_per_pulse"});
}

std::vector<Cell> report_row(const NetworkConfig& n, const ChshReport& r, const Parameters& p) {
  std::vector<Cell> row{scheme_name(n.scheme), n.length_km, r.s};
  for (double e : r.correlators) row.emplace_back(e);
  for (double v : {r.p_success, r.key.qber, r.key.raw, r.key.rate, r.key_rate_per_pulse}) {
    row.emplace_back(v);
  }
  append_params(row, p);
  return row;
}

Table base_table(const std::string& command, const RunConfig& rc, std::uint64_t seed) {
  Table t;
  t.metadata = {{"program", "swapsim"},
                {"version", SWAPSIM_VERSION},
                {"command", command},
                {"config_hash", config_hash(rc)},
                {"seed", std::to_string(seed)}};
  return t;
}

// Summary: the report at [pump]/[angles]. Rows: the four CHSH settings with
// their correlator and 16-outcome distribution, columns p_<D4 D3 D2 D1>.
Table run_chsh(const RunConfig& rc) {
  Table t = base_table("chsh", rc, rc.search.seed);
  const ChshReport r = chsh_value(rc.network, rc.pump, rc.angles, true);
  const std::vector<std::string> names = report_columns();
  const std::vector<Cell> values = report_row(rc.network, r, {rc.pump, rc.angles});
  for (std::size_t i = 0; i < names.size(); ++i) t.summary.emplace_back(names[i], values[i]);

  t.columns = {"setting", "theta_a", "theta_b", "correlator"};
  for (std::uint32_t mask = 0; mask < 16; ++mask) {
    std::string bits;
    for (int d = 3; d >= 0; --d) bits += ((mask >> d) & 1u) ? '1' : '0';
    t.columns.push_back("p_" + bits);
  }
  const GaussianState pre = build_pre_bsm_state(rc.network, rc.pump);
  const auto& a = rc.angles;
  const std::array<std::tuple<const char*, double, double>, 4> settings{
      {{"a1b1", a.a1, a.b1}, {"a2b1", a.a2, a.b1}, {"a1b2", a.a1, a.b2}, {"a2b2", a.a2, a.b2}}};
  for (const auto& [name, ta, tb] : settings) {
    const OutcomeDistribution d = outcome_distribution(pre, ta, tb, rc.network);
    std::vector<Cell> row{std::string(name), ta, tb, correlator(d)};
    for (double p : d.p) row.emplace_back(p);
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_trace(const std::string& path, const SearchResult& r) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write trace file '" + path + "'");
  Table t;
  t.columns = with_params({"index", "value"});
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    std::vector<Cell> row{static_cast<std::int64_t>(i), r.trace[i].value};
    append_params(row, r.trace[i].params);
    t.rows.push_back(std::move(row));
  }
  write_csv(f, t);
}

Table run_optimize(const RunConfig& rc, const Options& opt) {
  Table t = base_table("optimize", rc, rc.search.seed);
  const SearchResult r = optimize(rc.search, rc.network);
  if (!opt.trace.empty()) write_trace(opt.trace, r);
  t.summary = {{"objective_value", r.value},
               {"evaluations", static_cast<std::int64_t>(r.trace.size())},
               {"failures", static_cast<std::int64_t>(r.failures)}};
  t.columns = report_columns();
  t.rows.push_back(report_row(rc.network, r.report, r.best));
  return t;
}

Table run_scan(const RunConfig& rc) {
  Table t = base_table("scan", rc, rc.search.seed);
  t.columns = with_params({"L_km", "scheme", "s", "key_raw", "key", "p_success", "qber",
                           "key_per_pulse"});
  std::optional<Parameters> fixed;
  if (rc.scan.fixed) fixed = Parameters{rc.pump, rc.angles};
  for (Scheme scheme : rc.scan.schemes) {
    NetworkConfig n = rc.network;
    n.scheme = scheme;
    for (const ScanRow& s : distance_scan(n, rc.search, rc.scan.lengths_km, fixed)) {
      std::vector<Cell> row{s.length_km, scheme_name(s.scheme), s.s,    s.key_raw,
                            s.key,       s.p_success,           s.qber, s.key_per_pulse};
      append_params(row, s.params);
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

Table run_threshold(const RunConfig& rc) {
  Table t = base_table("threshold", rc, rc.search.seed);
  std::optional<Parameters> start;
  if (rc.threshold.start == "config") start = Parameters{rc.pump, rc.angles};
  const ThresholdResult r = threshold_efficiency(rc.network, rc.search, rc.threshold.policy, start,
                                                 rc.threshold.lo, rc.threshold.hi,
                                                 rc.threshold.tol);
  t.columns = with_params({"scheme", "L_km", "nu", "eta", "s_at_eta", "iterations"});
  std::vector<Cell> row{scheme_name(rc.network.scheme), rc.network.length_km, rc.network.nu,
                        r.eta, r.s_at_eta, static_cast<std::int64_t>(r.iterations)};
  append_params(row, r.params);
  t.rows.push_back(std::move(row));
  return t;
}

std::string basis_label(const FockIndex& f) {
  std::string s;
  for (int n : f.occupations) s += std::to_string(n);
  return s;
}

Table run_fock(const RunConfig& rc) {
  Table t = base_table("fock", rc, rc.search.seed);
  const HeraldedState h = herald(rc.network, rc.pump);
  const PartialDensityMatrix raw = partial_density_matrix(h);
  const PartialDensityMatrix norm = renormalize(raw);
  t.summary = {{"p_success", h.p_success},
               {"trace_raw", raw.trace_raw},
               {"truncation_deficit", raw.truncation_deficit},
               {"bell_fidelity", bell_fidelity(norm)}};
  t.columns = {"bra", "ket", "re", "im", "re_normalized", "im_normalized"};
  const auto& basis = reconstruction_basis();
  std::vector<std::vector<double>> re(6, std::vector<double>(6)), im = re, re_n = re, im_n = re;
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
      re[ui][uj] = raw.elements(i, j).real();
      im[ui][uj] = raw.elements(i, j).imag();
      re_n[ui][uj] = norm.elements(i, j).real();
      im_n[ui][uj] = norm.elements(i, j).imag();
    }
  }
  t.matrices = {{"real", re}, {"imag", im}, {"real_normalized", re_n}, {"imag_normalized", im_n}};
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      t.rows.push_back({basis_label(basis[static_cast<std::size_t>(i)]),
                        basis_label(basis[static_cast<std::size_t>(j)]),
                        raw.elements(i, j).real(), raw.elements(i, j).imag(),
                        norm.elements(i, j).real(), norm.elements(i, j).imag()});
    }
  }
  return t;
}

Table run_hom(const RunConfig& rc) {
  Table t = base_table("hom", rc, rc.search.seed);
  const HomReport r = hom_visibility(rc.network, rc.pump);
  t.columns = {"t_mode", "visibility", "coincidence", "coincidence_far"};
  t.rows.push_back({rc.network.t_mode, r.visibility, r.coincidence, r.coincidence_far});
  return t;
}

Table run_oracle(const RunConfig& rc, bool& passed) {
  Table t = base_table("oracle", rc, rc.oracle.seed);
  const oracle::OracleOptions o{rc.oracle.n_max, rc.oracle.max_pairs};
  const CrosscheckReport r =
      crosscheck(rc.oracle.seed, rc.oracle.random_configs, rc.oracle.mu, o, rc.search.threads);
  passed = r.max_rel() <= rc.oracle.tolerance;
  t.summary = {{"max_rel_p_success", r.max_rel_p_success},
               {"max_rel_outcomes", r.max_rel_outcomes},
               {"max_rel_pdm_diagonal", r.max_rel_pdm_diagonal},
               {"tolerance", rc.oracle.tolerance},
               {"passed", std::string(passed ? "true" : "false")}};
  t.columns = {"case", "scheme", "p_success_gaussian", "p_success_oracle", "rel_p_success",
               "rel_outcomes", "rel_pdm_diagonal"};
  for (std::size_t i = 0; i < r.cases.size(); ++i) {
    const auto& c = r.cases[i];
    t.rows.push_back({static_cast<std::int64_t>(i), scheme_name(c.config.scheme),
                      c.p_success_gaussian, c.p_success_oracle, c.rel_p_success, c.rel_outcomes,
                      c.rel_pdm_diagonal});
  }
  return t;
}

int execute(const std::string& command, const Options& opt) {
  RunConfig rc = opt.config_path.empty() ? RunConfig{} : load_config(opt.config_path);
  if (opt.seed) {
    rc.search.seed = *opt.seed;
    rc.oracle.seed = *opt.seed;
  }
  if (opt.threads) rc.search.threads = *opt.threads;
  if (!opt.out.empty()) rc.output.path = opt.out;
  if (!opt.format.empty()) rc.output.format = opt.format;

  bool passed = true;
  Table t;
  if (command == "chsh") {
    t = run_chsh(rc);
  } else if (command == "optimize") {
    t = run_optimize(rc, opt);
  } else if (command == "scan") {
    t = run_scan(rc);
  } else if (command == "threshold") {
    t = run_threshold(rc);
  } else if (command == "fock") {
    t = run_fock(rc);
  } else if (command == "hom") {
    t = run_hom(rc);
  } else {
    t = run_oracle(rc, passed);
  }

  if (rc.output.path.empty()) {
    write_table(std::cout, t, rc.output.format);
  } else {
    std::ofstream f(rc.output.path);
    if (!f) throw ConfigError("cannot write output file '" + rc.output.path + "'");
    write_table(f, t, rc.output.format);
  }
  if (!passed) {
    std::cerr << "swapsim: oracle crosscheck exceeded the tolerance\n";
    return kExitModel;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heralded entanglement-swapping relay simulator"};
  app.set_version_flag("--version", std::string(SWAPSIM_VERSION));
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&opt](CLI::App* sub) {
    sub->add_option("-c,--config", opt.config_path, "Configuration file")->check(CLI::ExistingFile);
    sub->add_option("-o,--out", opt.out, "Output file (default: stdout)");
    sub->add_option("-f,--format", opt.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", opt.seed, "Override the random seed");
    sub->add_option("--threads", opt.threads, "Worker threads (0: automatic)")
        ->check(CLI::NonNegativeNumber);
  };

  const std::vector<std::pair<std::string, std::string>> commands{
      {"chsh", "Evaluate S, QBER and key rate at [pump]/[angles]"},
      {"optimize", "Search pump and angles for the [search] objective"},
      {"scan", "Optimized or fixed-parameter distance scan"},
      {"threshold", "Detector efficiency at which the optimized S reaches 2"},
      {"fock", "Heralded two-qubit density matrix and Bell fidelity"},
      {"hom", "Hong-Ou-Mandel visibility between the sources"},
      {"oracle", "Crosscheck against the Fock-space oracle"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub);
    if (name == "optimize") sub->add_option("--trace", opt.trace, "Write every evaluation (CSV)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    return execute(app.get_subcommands().front()->get_name(), opt);
  } catch (const ConfigError& e) {
    std::cerr << "swapsim: configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "swapsim: invalid input: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NeverHeraldsError& e) {
    std::cerr << "swapsim: " << e.what() << "\n";
    return kExitNeverHeralds;
  } catch (const ModelError& e) {
    std::cerr << "swapsim: model error: " << e.what() << "\n";
    return kExitModel;
  }
}
