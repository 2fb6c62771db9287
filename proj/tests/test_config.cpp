#include <gtest/gtest.h>

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "swapsim/config.hpp"
#include "swapsim/table.hpp"

using namespace swapsim;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "test.cfg");
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, ParsesSections) {
  const RunConfig c = parse(
      "# comment\n[network]\nscheme = SH\nlength_km = 24\neta3 = 0.5\nnu = 1e-6\n"
      "bsm_patterns = single\n[pump]\nmu1 = 1.64e-2\n[angles]\nb2 = 2.01\n"
      "[search]\nobjective = K\nbudget = 10\nvary = angles\n"
      "[scan]\nlengths_km = 0, 24, 50\nschemes = CH, SH\nmode = fixed\n"
      "[threshold]\npolicy = full\n[oracle]\nmax_pairs = 4\n[output]\nformat = json\n");
  EXPECT_EQ(c.network.scheme, Scheme::kSide);
  EXPECT_EQ(c.network.length_km, 24.0);
  EXPECT_EQ(c.network.eta[2], 0.5);
  EXPECT_EQ(c.network.bsm_patterns, BsmPatterns::kSingle);
  EXPECT_EQ(c.pump.mu1, 1.64e-2);
  EXPECT_EQ(c.angles.b2, 2.01);
  EXPECT_EQ(c.search.objective, Objective::kMaximizeK);
  EXPECT_EQ(c.search.budget, 10u);
  ASSERT_TRUE(c.search.fixed_pump.has_value());
  EXPECT_EQ(c.search.fixed_pump->mu1, 1.64e-2);
  EXPECT_EQ(c.scan.lengths_km, (std::vector<double>{0, 24, 50}));
  EXPECT_EQ(c.scan.schemes.size(), 2u);
  EXPECT_TRUE(c.scan.fixed);
  EXPECT_EQ(c.threshold.policy, ThresholdPolicy::kFull);
  EXPECT_EQ(c.oracle.max_pairs, 4);
  EXPECT_EQ(c.output.format, "json");
}

TEST(Config, UnknownKeyIsNamedWithLine) {
  const std::string e = error_of("[network]\nscheme = CH\nlenght_km = 3\n");
  EXPECT_NE(e.find("network.lenght_km"), std::string::npos) << e;
  EXPECT_NE(e.find("test.cfg:3"), std::string::npos) << e;
  EXPECT_NE(error_of("[netwrk]\nscheme = CH\n").find("netwrk.scheme"), std::string::npos);
}

TEST(Config, MalformedValuesAreRejected) {
  EXPECT_NE(error_of("[network]\nnu = 1e-6x\n").find("network.nu"), std::string::npos);
  EXPECT_NE(error_of("[network]\nscheme = XX\n").find("network.scheme"), std::string::npos);
  EXPECT_NE(error_of("[search]\nbudget = -3\n").find("search.budget"), std::string::npos);
  EXPECT_NE(error_of("[network]\neta1 = 1.5\n"), "");
  EXPECT_NE(error_of("[pump]\nmu2 = -0.1\n"), "");
  EXPECT_NE(error_of("[threshold]\nlo = 0.9\nhi = 0.8\n"), "");
  EXPECT_NE(error_of("[network]\nlength_km = nan\n"), "");
  EXPECT_NE(error_of("[network\nscheme = CH\n"), "");
}

TEST(Config, ChannelOverride) {
  const RunConfig c = parse("[network]\neta_ah = 0.5\neta_bv = 0.25\n");
  ASSERT_TRUE(c.network.channel_override.has_value());
  EXPECT_EQ(c.network.channel_override->eta_ah, 0.5);
  EXPECT_EQ(c.network.channel_override->eta_av, 1.0);
  EXPECT_EQ(c.network.channel_override->eta_bv, 0.25);
}

TEST(Config, CanonicalTextAndHash) {
  const RunConfig a = parse("[network]\nlength_km = 50\n[search]\nthreads = 3\n");
  const RunConfig b = parse("[search]\nthreads = 1\n[network]\nlength_km = 5e1\n[output]\nformat = json\n");
  EXPECT_EQ(canonical_text(a), canonical_text(b));
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 64u);
  const RunConfig c = parse("[network]\nlength_km = 50.000001\n");
  EXPECT_NE(config_hash(a), config_hash(c));
  // The canonical text parses back to the same configuration.
  EXPECT_EQ(canonical_text(parse(canonical_text(a))), canonical_text(a));
}

TEST(Config, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 2.3367412345678901, 1e-300, 123456789.0, -0.0}) {
    const std::string s = format_double(v);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    EXPECT_EQ(back, v) << s;
  }
  EXPECT_EQ(format_double(0.5), "0.5");
}

TEST(Table, NonFiniteValuesAreEmptyOrNull) {
  Table t;
  t.metadata = {{"seed", "1"}};
  t.summary = {{"x", 0.25}};
  t.columns = {"a", "b", "c"};
  t.rows.push_back({std::string("CH"), -std::numeric_limits<double>::infinity(),
                    std::int64_t{3}});
  std::ostringstream csv;
  write_csv(csv, t);
  EXPECT_EQ(csv.str(), "# seed = 1\n# x = 0.25\na,b,c\nCH,,3\n");
  std::ostringstream json;
  write_json(json, t);
  EXPECT_NE(json.str().find("\"b\": null"), std::string::npos) << json.str();
  EXPECT_THROW(write_table(json, t, "xml"), std::invalid_argument);
}
