#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli.hpp"
#include "pqk/crl_text.hpp"
#include "pqk/json.hpp"
#include "support.hpp"

namespace pqk {
namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result pqk_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "pqk");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("pqk_cli_test_" + name)).string();
}

TEST(Cli, CheckPrintsTheType) {
  auto r = pqk_cli({"check", test::sample_path("one-way.pqk")});
  EXPECT_EQ(r.code, cli::Success) << r.err;
  EXPECT_EQ(r.out, "tree: _\ntype: Qubit -o Qubit -o[<u ? _ | _>] <u ? Qubit | Bit>\n");
}

TEST(Cli, CheckJson) {
  auto r = pqk_cli({"check", test::sample_path("example-let.pqk"), "--json"});
  ASSERT_EQ(r.code, cli::Success) << r.err;
  Json j = Json::parse(r.out);
  EXPECT_EQ(tree_from_json(j.at("tree")).to_string(), "<u ? _ | _>");
  EXPECT_EQ(j.at("type").at("one").at("leaf"), "Qubit");
}

TEST(Cli, CheckRejectsDuplicatedLabelWithSpan) {
  auto r = pqk_cli({"check", test::fixture_path("dup-label.pqk")});
  EXPECT_EQ(r.code, cli::UserError);
  EXPECT_NE(r.err.find("LinearityViolation"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("3:13"), std::string::npos) << r.err;
}

TEST(Cli, SyntaxErrorsAreUserErrors) {
  auto r = pqk_cli({"check", test::fixture_path("bad-syntax.pqk")});
  EXPECT_EQ(r.code, cli::UserError);
  EXPECT_NE(r.err.find("1:9"), std::string::npos) << r.err;
}

TEST(Cli, UnknownFlagsAndMissingFiles) {
  auto flag = pqk_cli({"check", test::sample_path("one-way.pqk"), "--frobnicate"});
  EXPECT_EQ(flag.code, cli::UserError);
  EXPECT_FALSE(flag.err.empty());
  auto none = pqk_cli({});
  EXPECT_EQ(none.code, cli::UserError);
  auto missing = pqk_cli({"run", "/nonexistent/x.pqk"});
  EXPECT_EQ(missing.code, cli::UserError);
  EXPECT_NE(missing.err.find("cannot read"), std::string::npos);
  auto help = pqk_cli({"--help"});
  EXPECT_EQ(help.code, cli::Success);
  EXPECT_NE(help.out.find("fuzz"), std::string::npos);
}

TEST(Cli, RunJsonListsBothPaths) {
  auto r = pqk_cli({"run", test::sample_path("one-way-run.pqk"), "--json"});
  ASSERT_EQ(r.code, cli::Success) << r.err;
  Json j = Json::parse(r.out);
  EXPECT_EQ(j.at("paths"), Json::parse(R"([{"u":0},{"u":1}])"));
  EXPECT_EQ(j.at("value").at("var"), "u");
  EXPECT_EQ(j.at("value").at("zero").at("leaf"), "@a");
  Circuit c = circuit_from_json(j.at("circuit"));
  EXPECT_EQ(signature_from_json(j.at("signature")), check_signature(c));
}

TEST(Cli, EmittingACircuitDoesNotChangeTheRun) {
  auto plain = pqk_cli({"run", test::sample_path("teleport-sim.pqk")});
  std::string crl = temp_path("teleport.crl");
  std::string dot = temp_path("teleport.dot");
  auto with_crl = pqk_cli({"run", test::sample_path("teleport-sim.pqk"), "--emit-circuit", crl});
  auto with_dot = pqk_cli({"run", test::sample_path("teleport-sim.pqk"), "--emit-circuit", dot});
  ASSERT_EQ(plain.code, cli::Success) << plain.err;
  EXPECT_EQ(with_crl.out, plain.out);
  EXPECT_EQ(with_dot.out, plain.out);
  auto listing = test::read_text(crl);
  EXPECT_NE(plain.out.find(listing), std::string::npos);
  EXPECT_NE(test::read_text(dot).find("digraph"), std::string::npos);
  std::filesystem::remove(crl);
  std::filesystem::remove(dot);
}

TEST(Cli, CircuitRendering) {
  std::string dot = temp_path("boxed.dot");
  auto r = pqk_cli({"circuit", test::sample_path("teleport.pqk"), "--boxed", "--dot", dot});
  ASSERT_EQ(r.code, cli::Success) << r.err;
  EXPECT_NE(r.out.find("tree: <u ? <s ? _ | _> | <s ? _ | _>>"), std::string::npos) << r.out;
  EXPECT_NE(test::read_text(dot).find("digraph"), std::string::npos);
  std::filesystem::remove(dot);
  auto listing = pqk_cli({"circuit", test::sample_path("teleport.crl"), "--json"});
  ASSERT_EQ(listing.code, cli::Success) << listing.err;
  EXPECT_EQ(circuit_from_json(Json::parse(listing.out).at("circuit")),
            parse_crl(test::sample("teleport.crl")).circuit);
  auto not_boxed = pqk_cli({"circuit", test::sample_path("example-let.pqk"), "--boxed"});
  EXPECT_EQ(not_boxed.code, cli::UserError);
}

TEST(Cli, SimJson) {
  auto r = pqk_cli({"sim", test::sample_path("one-way-run.pqk"), "--shots", "400", "--seed", "2", "--json", "--trace"});
  ASSERT_EQ(r.code, cli::Success) << r.err;
  Json j = Json::parse(r.out);
  std::uint64_t total = 0;
  for (const auto& entry : j.at("distribution")) total += entry.at("count").get<std::uint64_t>();
  EXPECT_EQ(total, 400u);
  EXPECT_EQ(j.at("distribution").size(), 2u);
  EXPECT_TRUE(j.at("trace").contains("amplitudes"));
}

TEST(Cli, SimRejectsBadInit) {
  EXPECT_EQ(pqk_cli({"sim", test::sample_path("teleport.crl"), "--shots", "2", "--seed", "1", "--init", "q0=7"}).code,
            cli::UserError);
  EXPECT_EQ(pqk_cli({"sim", test::sample_path("teleport.crl"), "--shots", "2", "--seed", "1", "--init", "zz=0"}).code,
            cli::UserError);
  EXPECT_EQ(pqk_cli({"sim", test::sample_path("teleport.crl"), "--seed", "1"}).code, cli::UserError);
}

TEST(Cli, RunRejectsCircuitListings) {
  EXPECT_EQ(pqk_cli({"run", test::sample_path("teleport.crl")}).code, cli::UserError);
}

TEST(Cli, FuzzExitCodes) {
  std::string report = temp_path("report.json");
  auto clean = pqk_cli({"fuzz", "--count", "40", "--seed", "3", "--report", report});
  EXPECT_EQ(clean.code, cli::Success) << clean.out;
  EXPECT_EQ(Json::parse(test::read_text(report)).at("count"), 40);
  std::filesystem::remove(report);
  auto mutated = pqk_cli({"fuzz", "--count", "60", "--seed", "3", "--mutate-skip-let-flatten", "--no-shrink"});
  EXPECT_EQ(mutated.code, cli::InternalError) << mutated.out;
  EXPECT_NE(mutated.out.find("SubjectReduction"), std::string::npos);
}

TEST(Cli, GateSetFromEnvironment) {
  std::string path = temp_path("gates.json");
  {
    std::ofstream out(path);
    out << R"({"gates":[{"name":"Meas","in":"Qubit","out":"Bit"}]})";
  }
  ::setenv("PQK_GATESET", path.c_str(), 1);
  auto without_h = pqk_cli({"check", test::sample_path("alice.pqk")});
  auto meas_only = pqk_cli({"check", test::sample_path("example-let.pqk")});
  ::unsetenv("PQK_GATESET");
  std::filesystem::remove(path);
  EXPECT_EQ(without_h.code, cli::UserError);
  EXPECT_EQ(meas_only.code, cli::UserError);
  EXPECT_EQ(pqk_cli({"check", test::sample_path("alice.pqk")}).code, cli::Success);
}

}  // namespace
}  // namespace pqk
