#include "swapsim/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

namespace swapsim {

namespace {

namespace pt = boost::property_tree;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty() || !std::isfinite(v)) {
    throw ConfigError("key '" + key + "': '" + text + "' is not a finite number");
  }
  return v;
}

std::uint64_t parse_uint(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("key '" + key + "': '" + text + "' is not a non-negative integer");
  }
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  const std::uint64_t v = parse_uint(key, text);
  if (v > static_cast<std::uint64_t>(std::numeric_limits<int>::max())) {
    throw ConfigError("key '" + key + "': value too large");
  }
  return static_cast<int>(v);
}

Scheme parse_scheme(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "CH") return Scheme::kCenter;
  if (t == "SH") return Scheme::kSide;
  throw ConfigError("key '" + key + "': expected CH or SH, got '" + text + "'");
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

// "section.key" -> setter.
const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> m;
    auto num = [&m](const std::string& k, auto field) {
      m[k] = [k, field](RunConfig& c, const std::string& v) { field(c) = parse_double(k, v); };
    };
    num("network.length_km", [](RunConfig& c) -> double& { return c.network.length_km; });
    num("network.attenuation_db_per_km",
        [](RunConfig& c) -> double& { return c.network.attenuation_db_per_km; });
    num("network.hbs_extra_loss", [](RunConfig& c) -> double& { return c.network.hbs_extra_loss; });
    num("network.t_mode", [](RunConfig& c) -> double& { return c.network.t_mode; });
    num("network.nu", [](RunConfig& c) -> double& { return c.network.nu; });
    for (int i = 0; i < 8; ++i) {
      const std::string k = "network.eta" + std::to_string(i + 1);
      m[k] = [k, i](RunConfig& c, const std::string& v) {
        c.network.eta[static_cast<std::size_t>(i)] = parse_double(k, v);
      };
    }
    const std::array<const char*, 4> arms{"eta_ah", "eta_av", "eta_bh", "eta_bv"};
    for (int i = 0; i < 4; ++i) {
      const std::string k = std::string("network.") + arms[static_cast<std::size_t>(i)];
      m[k] = [k, i](RunConfig& c, const std::string& v) {
        if (!c.network.channel_override) c.network.channel_override = ChannelTransmittances{};
        auto& ch = *c.network.channel_override;
        std::array<double*, 4> f{&ch.eta_ah, &ch.eta_av, &ch.eta_bh, &ch.eta_bv};
        *f[static_cast<std::size_t>(i)] = parse_double(k, v);
      };
    }
    m["network.scheme"] = [](RunConfig& c, const std::string& v) {
      c.network.scheme = parse_scheme("network.scheme", v);
    };
    m["network.hbs_lossy_mode"] = [](RunConfig& c, const std::string& v) {
      c.network.hbs_lossy_mode = trim(v);
    };
    m["network.bsm_patterns"] = [](RunConfig& c, const std::string& v) {
      const std::string t = trim(v);
      if (t == "single") {
        c.network.bsm_patterns = BsmPatterns::kSingle;
      } else if (t == "both") {
        c.network.bsm_patterns = BsmPatterns::kBoth;
      } else {
        throw ConfigError("key 'network.bsm_patterns': expected single or both, got '" + v + "'");
      }
    };

    num("pump.mu1", [](RunConfig& c) -> double& { return c.pump.mu1; });
    num("pump.mu2", [](RunConfig& c) -> double& { return c.pump.mu2; });
    num("pump.mu3", [](RunConfig& c) -> double& { return c.pump.mu3; });
    num("pump.mu4", [](RunConfig& c) -> double& { return c.pump.mu4; });

    num("angles.a0", [](RunConfig& c) -> double& { return c.angles.a0; });
    num("angles.a1", [](RunConfig& c) -> double& { return c.angles.a1; });
    num("angles.a2", [](RunConfig& c) -> double& { return c.angles.a2; });
    num("angles.b1", [](RunConfig& c) -> double& { return c.angles.b1; });
    num("angles.b2", [](RunConfig& c) -> double& { return c.angles.b2; });

    m["search.objective"] = [](RunConfig& c, const std::string& v) {
      const std::string t = trim(v);
      if (t == "S") {
        c.search.objective = Objective::kMaximizeS;
      } else if (t == "K") {
        c.search.objective = Objective::kMaximizeK;
      } else {
        throw ConfigError("key 'search.objective': expected S or K, got '" + v + "'");
      }
    };
    num("search.mu_min", [](RunConfig& c) -> double& { return c.search.mu_min; });
    num("search.mu_max", [](RunConfig& c) -> double& { return c.search.mu_max; });
    for (int i = 0; i < 4; ++i) {
      const std::string k = "search.mu_lower" + std::to_string(i + 1);
      m[k] = [k, i](RunConfig& c, const std::string& v) {
        c.search.mu_lower[static_cast<std::size_t>(i)] = parse_double(k, v);
      };
    }
    m["search.budget"] = [](RunConfig& c, const std::string& v) {
      c.search.budget = parse_uint("search.budget", v);
    };
    m["search.seed"] = [](RunConfig& c, const std::string& v) {
      c.search.seed = parse_uint("search.seed", v);
    };
    m["search.refine_rounds"] = [](RunConfig& c, const std::string& v) {
      c.search.refine_rounds = parse_int("search.refine_rounds", v);
    };
    m["search.refine_budget"] = [](RunConfig& c, const std::string& v) {
      c.search.refine_budget = parse_uint("search.refine_budget", v);
    };
    m["search.refine_starts"] = [](RunConfig& c, const std::string& v) {
      c.search.refine_starts = parse_uint("search.refine_starts", v);
    };
    num("search.refine_radius", [](RunConfig& c) -> double& { return c.search.refine_radius; });
    m["search.vary"] = [](RunConfig& c, const std::string& v) {
      const std::string t = trim(v);
      if (t != "all" && t != "angles" && t != "pump") {
        throw ConfigError("key 'search.vary': expected all, angles or pump, got '" + v + "'");
      }
      c.vary = t;
    };
    m["search.threads"] = [](RunConfig& c, const std::string& v) {
      c.search.threads = parse_int("search.threads", v);
    };

    m["scan.lengths_km"] = [](RunConfig& c, const std::string& v) {
      c.scan.lengths_km.clear();
      for (const auto& item : split_list(v)) {
        c.scan.lengths_km.push_back(parse_double("scan.lengths_km", item));
      }
      if (c.scan.lengths_km.empty()) throw ConfigError("key 'scan.lengths_km': empty list");
    };
    m["scan.schemes"] = [](RunConfig& c, const std::string& v) {
      c.scan.schemes.clear();
      for (const auto& item : split_list(v)) {
        c.scan.schemes.push_back(parse_scheme("scan.schemes", item));
      }
      if (c.scan.schemes.empty()) throw ConfigError("key 'scan.schemes': empty list");
    };
    m["scan.mode"] = [](RunConfig& c, const std::string& v) {
      const std::string t = trim(v);
      if (t == "fixed") {
        c.scan.fixed = true;
      } else if (t == "optimize") {
        c.scan.fixed = false;
      } else {
        throw ConfigError("key 'scan.mode': expected fixed or optimize, got '" + v + "'");
      }
    };

    m["threshold.policy"] = [](RunConfig& c, const std::string& v) {
      const std::string t = trim(v);
      if (t == "fixed") {
        c.threshold.policy = ThresholdPolicy::kFixed;
      } else if (t == "refine") {
        c.threshold.policy = ThresholdPolicy::kRefine;
      } else if (t == "full") {
        c.threshold.policy = ThresholdPolicy::kFull;
      } else {
        throw ConfigError("key 'threshold.policy': expected fixed, refine or full, got '" + v + "'");
      }
    };
    m["threshold.start"] = [](RunConfig& c, const std::string& v) {
      const std::string t = trim(v);
      if (t != "search" && t != "config") {
        throw ConfigError("key 'threshold.start': expected search or config, got '" + v + "'");
      }
      c.threshold.start = t;
    };
    num("threshold.lo", [](RunConfig& c) -> double& { return c.threshold.lo; });
    num("threshold.hi", [](RunConfig& c) -> double& { return c.threshold.hi; });
    num("threshold.tol", [](RunConfig& c) -> double& { return c.threshold.tol; });

    num("oracle.mu", [](RunConfig& c) -> double& { return c.oracle.mu; });
    m["oracle.seed"] = [](RunConfig& c, const std::string& v) {
      c.oracle.seed = parse_uint("oracle.seed", v);
    };
    m["oracle.n_max"] = [](RunConfig& c, const std::string& v) {
      c.oracle.n_max = parse_int("oracle.n_max", v);
    };
    m["oracle.max_pairs"] = [](RunConfig& c, const std::string& v) {
      c.oracle.max_pairs = parse_int("oracle.max_pairs", v);
    };
    m["oracle.random_configs"] = [](RunConfig& c, const std::string& v) {
      c.oracle.random_configs = parse_int("oracle.random_configs", v);
    };
    num("oracle.tolerance", [](RunConfig& c) -> double& { return c.oracle.tolerance; });

    m["output.path"] = [](RunConfig& c, const std::string& v) { c.output.path = trim(v); };
    m["output.format"] = [](RunConfig& c, const std::string& v) {
      const std::string t = trim(v);
      if (t != "csv" && t != "json") {
        throw ConfigError("key 'output.format': expected csv or json, got '" + v + "'");
      }
      c.output.format = t;
    };
    return m;
  }();
  return table;
}

// Line of `key` inside `[section]` in the raw text, or 0.
int find_line(const std::string& text, const std::string& section, const std::string& key) {
  std::stringstream ss(text);
  std::string line;
  std::string current;
  int n = 0;
  while (std::getline(ss, line)) {
    ++n;
    const std::string t = trim(line);
    if (t.size() >= 2 && t.front() == '[' && t.back() == ']') {
      current = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq != std::string::npos && current == section && trim(t.substr(0, eq)) == key) return n;
  }
  return 0;
}

void check_consistency(RunConfig& c) {
  try {
    validate(c.network);
    validate(c.pump);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (c.vary == "angles") c.search.fixed_pump = c.pump;
  if (c.vary == "pump") c.search.fixed_angles = c.angles;
  if (c.search.budget < 1) throw ConfigError("key 'search.budget': must be >= 1");
  if (!(c.search.mu_min > 0.0 && c.search.mu_min < c.search.mu_max &&
        c.search.mu_max < kMaxMeanPhotonNumber)) {
    throw ConfigError("keys 'search.mu_min'/'search.mu_max': need 0 < mu_min < mu_max < 100");
  }
  if (!(c.search.refine_radius > 0.0)) throw ConfigError("key 'search.refine_radius': must be > 0");
  if (!(c.threshold.lo >= 0.0 && c.threshold.lo < c.threshold.hi && c.threshold.hi <= 1.0)) {
    throw ConfigError("keys 'threshold.lo'/'threshold.hi': need 0 <= lo < hi <= 1");
  }
  if (!(c.threshold.tol > 0.0)) throw ConfigError("key 'threshold.tol': must be > 0");
  if (c.oracle.n_max < 1 || c.oracle.max_pairs < 1) {
    throw ConfigError("keys 'oracle.n_max'/'oracle.max_pairs': must be >= 1");
  }
  if (!(c.oracle.mu > 0.0 && c.oracle.mu < kMaxMeanPhotonNumber)) {
    throw ConfigError("key 'oracle.mu': need 0 < mu < 100");
  }
  if (!(c.oracle.tolerance > 0.0)) throw ConfigError("key 'oracle.tolerance': must be > 0");
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

std::string scheme_name(Scheme s) { return s == Scheme::kCenter ? "CH" : "SH"; }

RunConfig parse_config(std::istream& in, const std::string& source_name) {
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  pt::ptree tree;
  try {
    std::stringstream ss(text);
    pt::read_ini(ss, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(source_name + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  RunConfig config;
  const auto& table = setters();
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      throw ConfigError(source_name + ": key '" + section + "' is outside any section");
    }
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      const auto it = table.find(full);
      const int line = find_line(text, section, key);
      const std::string where = source_name + (line > 0 ? ":" + std::to_string(line) : "");
      if (it == table.end()) throw ConfigError(where + ": unknown key '" + full + "'");
      try {
        it->second(config, value.data());
      } catch (const ConfigError& e) {
        throw ConfigError(where + ": " + e.what());
      }
    }
  }
  try {
    check_consistency(config);
  } catch (const ConfigError& e) {
    throw ConfigError(source_name + ": " + e.what());
  }
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

std::string canonical_text(const RunConfig& c) {
  std::ostringstream o;
  auto kv = [&o](const std::string& k, const std::string& v) { o << k << " = " << v << "\n"; };
  auto kd = [&kv](const std::string& k, double v) { kv(k, format_double(v)); };
  const auto& n = c.network;
  o << "[network]\n";
  kv("scheme", scheme_name(n.scheme));
  kd("length_km", n.length_km);
  kd("attenuation_db_per_km", n.attenuation_db_per_km);
  if (n.channel_override) {
    kd("eta_ah", n.channel_override->eta_ah);
    kd("eta_av", n.channel_override->eta_av);
    kd("eta_bh", n.channel_override->eta_bh);
    kd("eta_bv", n.channel_override->eta_bv);
  }
  kd("hbs_extra_loss", n.hbs_extra_loss);
  kv("hbs_lossy_mode", n.hbs_lossy_mode);
  kd("t_mode", n.t_mode);
  for (int i = 0; i < 8; ++i) kd("eta" + std::to_string(i + 1), n.eta[static_cast<std::size_t>(i)]);
  kd("nu", n.nu);
  kv("bsm_patterns", n.bsm_patterns == BsmPatterns::kSingle ? "single" : "both");
  o << "[pump]\n";
  kd("mu1", c.pump.mu1);
  kd("mu2", c.pump.mu2);
  kd("mu3", c.pump.mu3);
  kd("mu4", c.pump.mu4);
  o << "[angles]\n";
  kd("a0", c.angles.a0);
  kd("a1", c.angles.a1);
  kd("a2", c.angles.a2);
  kd("b1", c.angles.b1);
  kd("b2", c.angles.b2);
  const auto& s = c.search;
  o << "[search]\n";
  kv("objective", s.objective == Objective::kMaximizeS ? "S" : "K");
  kd("mu_min", s.mu_min);
  kd("mu_max", s.mu_max);
  for (int i = 0; i < 4; ++i) {
    kd("mu_lower" + std::to_string(i + 1), s.mu_lower[static_cast<std::size_t>(i)]);
  }
  kv("budget", std::to_string(s.budget));
  kv("seed", std::to_string(s.seed));
  kv("refine_rounds", std::to_string(s.refine_rounds));
  kv("refine_budget", std::to_string(s.refine_budget));
  kv("refine_starts", std::to_string(s.refine_starts));
  kd("refine_radius", s.refine_radius);
  kv("vary", c.vary);
  o << "[scan]\n";
  std::string lengths;
  for (std::size_t i = 0; i < c.scan.lengths_km.size(); ++i) {
    lengths += (i ? ", " : "") + format_double(c.scan.lengths_km[i]);
  }
  kv("lengths_km", lengths);
  std::string schemes;
  for (std::size_t i = 0; i < c.scan.schemes.size(); ++i) {
    schemes += (i ? ", " : "") + scheme_name(c.scan.schemes[i]);
  }
  kv("schemes", schemes);
  kv("mode", c.scan.fixed ? "fixed" : "optimize");
  o << "[threshold]\n";
  const char* policy = c.threshold.policy == ThresholdPolicy::kFixed    ? "fixed"
                       : c.threshold.policy == ThresholdPolicy::kRefine ? "refine"
                                                                        : "full";
  kv("policy", policy);
  kv("start", c.threshold.start);
  kd("lo", c.threshold.lo);
  kd("hi", c.threshold.hi);
  kd("tol", c.threshold.tol);
  o << "[oracle]\n";
  kd("mu", c.oracle.mu);
  kv("n_max", std::to_string(c.oracle.n_max));
  kv("max_pairs", std::to_string(c.oracle.max_pairs));
  kv("random_configs", std::to_string(c.oracle.random_configs));
  kv("seed", std::to_string(c.oracle.seed));
  kd("tolerance", c.oracle.tolerance);
  return o.str();
}

std::string config_hash(const RunConfig& config) {
  const std::string text = canonical_text(config);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("config_hash: SHA-256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

}  // namespace swapsim
