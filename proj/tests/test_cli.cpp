#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "fence/cli.hpp"
#include "fence/document.hpp"
#include "fence/strategies.hpp"
#include "generators.hpp"

namespace fs = std::filesystem;
using fence::Rational;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = fence::run_cli(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(FENCE_SOURCE_DIR) + "/fixtures/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("fencepatrol_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const std::string path = (dir_ / name).string();
    std::ofstream(path, std::ios::binary) << text;
    return path;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string edited_fig1(const std::string& from, const std::string& to) {
    std::string text = slurp(fixture("fig1.json"));
    const auto pos = text.find(from);
    EXPECT_NE(pos, std::string::npos);
    text.replace(pos, from.size(), to);
    return write("edited.json", text);
  }

private:
  fs::path dir_;
};

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

}  // namespace

TEST_F(Cli, FixturesMatchBuildOutput) {
  for (const char* kind : {"fig1", "fig2", "weighted3"}) {
    const CliRun r = run({"build", kind});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, slurp(fixture(std::string(kind) + ".json"))) << kind;
  }
}

TEST_F(Cli, VerifyFixtures) {
  const CliRun fig1 = run({"verify", fixture("fig1.json")});
  EXPECT_EQ(fig1.code, 0);
  EXPECT_EQ(first_line(fig1.out), "PATROLS l=7/2 ratio=21/41");
  const CliRun fig2 = run({"verify", fixture("fig2.json")});
  EXPECT_EQ(fig2.code, 0);
  EXPECT_EQ(first_line(fig2.out), "PATROLS l=50/3 ratio=50/99");
  const CliRun w3 = run({"verify", fixture("weighted3.json")});
  EXPECT_EQ(w3.code, 0);
  EXPECT_EQ(first_line(w3.out), "PATROLS l=7/2 ratio=21/41");
  EXPECT_EQ(w3.out.find("idle_max"), std::string::npos);
  EXPECT_NE(fig1.out.find("idle_max=1"), std::string::npos);
}

TEST_F(Cli, VerifyLongerFenceFailsWithWitness) {
  const CliRun r = run({"verify", edited_fig1("\"fence_length\": \"7/2\"", "\"fence_length\": \"18/5\"")});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(first_line(r.out).rfind("FAILS l=18/5", 0), 0u);
  EXPECT_NE(r.out.find("witness x="), std::string::npos);
}

TEST_F(Cli, VerifyInvalidInput) {
  const CliRun bad_rational = run({"verify", edited_fig1("\"period\": \"7\"", "\"period\": \"7/0\"")});
  EXPECT_EQ(bad_rational.code, 2);
  EXPECT_NE(bad_rational.err.find("period"), std::string::npos);

  const CliRun unknown = run({"verify", edited_fig1("\"period\": \"7\"", "\"period\": \"7\", \"colour\": \"red\"")});
  EXPECT_EQ(unknown.code, 2);
  EXPECT_NE(unknown.err.find("colour"), std::string::npos);

  const CliRun number = run({"verify", edited_fig1("\"period\": \"7\"", "\"period\": 7")});
  EXPECT_EQ(number.code, 2);

  const CliRun too_fast = run({"verify", edited_fig1("\"speed\": \"7/3\"", "\"speed\": \"2\"")});
  EXPECT_EQ(too_fast.code, 2);
  EXPECT_NE(too_fast.err.find("agents[4]"), std::string::npos);

  EXPECT_EQ(run({"verify", path("missing.json")}).code, 2);
  EXPECT_EQ(run({"verify", write("garbage.json", "{not json")}).code, 2);
}

TEST_F(Cli, BuildPartition) {
  const CliRun r = run({"build", "partition", "--speeds", "1,1,1,1,7/3,1/2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(fence::parse_document(r.out).fence_length, Rational(41, 12));

  const CliRun fig2 = run({"build", "fig2"});
  const auto doc = fence::parse_document(fig2.out);
  EXPECT_EQ(doc.fence_length, Rational(50, 3));
  EXPECT_EQ(doc.period, Rational(10, 3));

  EXPECT_EQ(run({"build", "partition", "--speeds", "1", "--length", "3/4"}).code, 2);
  EXPECT_EQ(run({"build", "partition"}).code, 2);
  EXPECT_EQ(run({"build", "circle"}).code, 2);
  EXPECT_EQ(run({"build", "partition", "--speeds", "1,2", "--weights", "1"}).code, 2);
}

TEST_F(Cli, Bounds) {
  const CliRun fig1 = run({"bounds", "--speeds", "1,1,1,1,7/3,1/2"});
  EXPECT_EQ(fig1.code, 0);
  EXPECT_EQ(fig1.out, "partition_length=41/12 (3.416667)\ntrivial_upper=41/6 (6.833333)\n");
  const CliRun fig2 = run({"bounds", "--speeds", "5,5,5,5,5,5,1,1,1"});
  EXPECT_EQ(fig2.out, "partition_length=33/2 (16.500000)\ntrivial_upper=33 (33.000000)\n");
  const CliRun weighted = run({"bounds", "--speeds", "2", "--weights", "3"});
  EXPECT_EQ(weighted.out, "partition_length=3 (3.000000)\ntrivial_upper=6 (6.000000)\n");
  EXPECT_EQ(run({"bounds", "--speeds", "0"}).code, 2);
  EXPECT_EQ(run({"bounds", "--speeds", "1", "--weights", "-1"}).code, 2);
}

TEST_F(Cli, Search) {
  const CliRun ok = run({"search", "--speeds", "1,1", "--length", "1", "--seed", "7", "--budget", "10000"});
  ASSERT_EQ(ok.code, 0) << ok.err;
  const auto doc = fence::parse_document(ok.out);
  ASSERT_TRUE(doc.metadata.has_value());
  EXPECT_EQ(doc.metadata->seed, 7u);
  EXPECT_EQ(doc.metadata->budget, 10000u);
  EXPECT_EQ(doc.metadata->grid, 840);
  EXPECT_EQ(run({"verify", write("found.json", ok.out)}).code, 0);

  const CliRun exhausted = run({"search", "--speeds", "1,1", "--length", "101/100"});
  EXPECT_EQ(exhausted.code, 1);
  EXPECT_EQ(exhausted.out.rfind("EXHAUSTED", 0), 0u);

  EXPECT_EQ(run({"search", "--length", "1"}).code, 2);
  EXPECT_EQ(run({"search", "--speeds", "1", "--length", "-1"}).code, 2);
}

TEST_F(Cli, SearchFig1RegressionWarmStart) {
  fence::Schedule start = fence::fig1_schedule();
  start.agents[5].trajectory = fence::time_shift(start.agents[5].trajectory, Rational(1, 420));
  const std::string warm = write("warm.json", fence::emit_document(fence::to_document(start)));
  EXPECT_EQ(run({"verify", warm}).code, 1);
  const CliRun r = run({"search", "--warm-start", warm, "--seed", "1", "--budget", "20000"});
  ASSERT_EQ(r.code, 0) << r.out << r.err;
  const auto found = write("found.json", r.out);
  const CliRun v = run({"verify", found});
  EXPECT_EQ(v.code, 0);
  EXPECT_EQ(first_line(v.out), "PATROLS l=7/2 ratio=21/41");
}

TEST_F(Cli, Render) {
  const std::string out1 = path("p1.svg"), out2 = path("p2.svg"), again = path("again.svg");
  ASSERT_EQ(run({"render", fixture("fig1.json"), "--out", out1, "--periods", "1"}).code, 0);
  ASSERT_EQ(run({"render", fixture("fig1.json"), "--out", out2, "--periods", "2"}).code, 0);
  ASSERT_EQ(run({"render", fixture("fig1.json"), "--out", again, "--periods", "2"}).code, 0);
  EXPECT_EQ(slurp(out2), slurp(again));

  boost::property_tree::ptree t1, t2;
  std::istringstream s1(slurp(out1)), s2(slurp(out2));
  boost::property_tree::read_xml(s1, t1);
  boost::property_tree::read_xml(s2, t2);
  EXPECT_DOUBLE_EQ(t2.get<double>("svg.<xmlattr>.height"), 2 * t1.get<double>("svg.<xmlattr>.height"));
  std::size_t bands = 0;
  for (const auto& [tag, child] : t2.get_child("svg")) {
    if (tag == "g" && child.get<std::string>("<xmlattr>.class") == "band") ++bands;
  }
  EXPECT_EQ(bands, 6u);

  EXPECT_EQ(run({"render", fixture("fig1.json"), "--out", path("no/such/dir/x.svg")}).code, 2);
  EXPECT_EQ(run({"render", path("missing.json")}).code, 2);
  EXPECT_EQ(run({"render", fixture("fig1.json"), "--periods", "0"}).code, 2);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"verify"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Document, RoundTripsFixtures) {
  for (const char* name : {"fig1.json", "fig2.json", "weighted3.json"}) {
    const std::string text = slurp(fixture(name));
    const auto doc = fence::parse_document(text);
    EXPECT_EQ(fence::emit_document(doc), text);
    EXPECT_EQ(fence::parse_document(fence::emit_document(doc)), doc);
  }
  EXPECT_EQ(fence::to_schedule(fence::parse_document(slurp(fixture("fig1.json")))), fence::fig1_schedule());
  EXPECT_EQ(fence::to_schedule(fence::parse_document(slurp(fixture("fig2.json")))), fence::fig2_schedule());
}

TEST(Document, RoundTripsRandomDocuments) {
  fence::testing::Rng rng(9);
  for (int i = 0; i < 200; ++i) {
    fence::DocumentMetadata meta;
    if (rng.coin()) meta.name = "trial \"" + std::to_string(i) + "\" ü";
    if (rng.coin()) meta.seed = rng.below(1ULL << 62) * 2;
    if (rng.coin()) meta.grid = static_cast<std::int64_t>(rng.below(1000)) + 1;
    auto doc = fence::to_document(fence::testing::random_mixed_schedule(rng),
                                  rng.coin() ? std::optional(meta) : std::nullopt);
    // Documents need not be valid schedules to round-trip.
    if (rng.coin()) doc.fence_length = Rational(-static_cast<long>(rng.below(100)), 7);
    EXPECT_EQ(fence::parse_document(fence::emit_document(doc)), doc);
  }
}

TEST(Document, StrictParsing) {
  EXPECT_THROW((void)fence::parse_document("[]"), fence::DocumentError);
  EXPECT_THROW((void)fence::parse_document(R"({"format_version": 2, "fence_length": "1", "period": "1",
                                                "agents": []})"),
               fence::DocumentError);
  try {
    (void)fence::parse_document(R"({"format_version": 1, "fence_length": "1", "period": "1",
        "agents": [{"speed": "1", "weight": "1", "breakpoints": [["0", "0"], ["1/2", "1.5"]]}]})");
    FAIL();
  } catch (const fence::DocumentError& e) {
    EXPECT_EQ(e.where(), "agents[0].breakpoints[1][1]");
  }
  try {
    (void)fence::parse_document(R"({"format_version": 1, "fence_length": "1", "period": "1",
        "agents": [], "metadata": {"seed": 1, "note": "x"}})");
    FAIL();
  } catch (const fence::DocumentError& e) {
    EXPECT_EQ(e.where(), "metadata.note");
  }
  EXPECT_THROW((void)fence::to_schedule(fence::parse_document(R"({"format_version": 1, "fence_length": "1",
      "period": "1", "agents": [{"speed": "0", "weight": "1", "breakpoints": [["0", "0"], ["1", "0"]]}]})")),
               fence::DocumentError);
}
