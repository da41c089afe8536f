#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "support.hpp"

namespace fs = std::filesystem;
using qnlp::test::fixture;
using qnlp::test::slurp;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = qnlp::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string drop_first_line(const std::string& s) { return s.substr(s.find('\n') + 1); }

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "qnlp_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Cli, ParsePrintsLinks) {
  auto r = run({"parse", "--vocab", fixture("vocab_time_flies.json"), "--sentence", "Time flies like an arrow"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("links: (0,1) (3,4) (6,7) (5,8)"), std::string::npos);
  EXPECT_NE(r.out.find("residue: s"), std::string::npos);

  auto bad = run({"parse", "--vocab", fixture("vocab_time_flies.json"), "--sentence", "Time ants like an arrow"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("NoParse"), std::string::npos);
}

TEST(Cli, InputErrorsExitOne) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"bogus"}).code, 1);
  EXPECT_EQ(run({"storage", "--dim", "2"}).code, 1);
  auto r = run({"parse", "--vocab", "/nonexistent/v.json", "--sentence", "x"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("InvalidInput"), std::string::npos);
}

TEST(Cli, Storage) {
  EXPECT_EQ(run({"storage", "--dim", "2000", "--wires", "3", "--instances", "1"}).out, "8e9 bits / 33 qubits\n");
  EXPECT_EQ(run({"storage", "--dim", "2", "--wires", "1", "--instances", "1"}).out, "2 bits / 1 qubit\n");
  auto big = run({"storage", "--dim", "2000", "--wires", "10", "--instances", "1"});
  EXPECT_EQ(big.code, 0);
  EXPECT_EQ(big.out.rfind("1.024e33 bits / 110 qubits", 0), 0u);
}

TEST(Cli, EmbedSingleWord) {
  auto r = run({"embed", "--corpus", fixture("corpus_royals.txt"), "--basis", fixture("basis_royals.txt"), "--word",
                "queens"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "queens = [0.5, 0, 0, 0.5]\n");
}

TEST(Cli, EntailCsv) {
  auto r = run({"entail", "--space", fixture("wordspace_pets.json"), "--pair", "pug:pet"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("# config: ", 0), 0u);
  EXPECT_EQ(drop_first_line(r.out), "pair,crisp,k\npug:pet,true,1\n");
}

TEST(Cli, GenerateIsSeeded) {
  std::vector<std::string> args{"generate", "--vocab", fixture("vocab_alice_bob.json"), "--max-len", "3",
                                "--max-count", "3", "--seed", "5"};
  auto a = run(args);
  auto b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  auto body = drop_first_line(a.out);
  EXPECT_EQ(std::count(body.begin(), body.end(), '\n'), 3);
}

TEST(Cli, SimRetrieve) {
  auto r = run({"sim-retrieve", "--pattern", "0110", "--pattern", "1001", "--target", "0110", "--shots", "100",
                "--seed", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto body = drop_first_line(r.out);
  EXPECT_EQ(body.rfind("pattern,probability,count\n0110,1,100\n1001,", 0), 0u);
  EXPECT_EQ(run({"sim-retrieve", "--pattern", "011", "--target", "0110"}).code, 1);
}

TEST(Cli, TrainThenRerunReproducesArtifacts) {
  const auto report = scratch("report.json");
  const auto curve = scratch("curve.csv");
  auto r = run({"qa-train", "--vocab", fixture("vocab_alice_bob.json"), "--data", fixture("qa_self_labels.tsv"),
                "--iterations", "20", "--seed", "3", "--out", report.string(), "--curve", curve.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  auto first = nlohmann::json::parse(slurp(report.string()));
  EXPECT_EQ(first["config"]["subcommand"], "qa-train");
  EXPECT_EQ(first["loss_curve"].size(), 20u);
  const auto curve_text = slurp(curve.string());
  EXPECT_EQ(curve_text.rfind("# config: ", 0), 0u);
  EXPECT_EQ(drop_first_line(curve_text).rfind("iteration,mean_loss\n0,", 0), 0u);

  const auto report2 = scratch("report2.json");
  ASSERT_EQ(run({"rerun", "--from", report.string(), "--out", report2.string()}).code, 0);
  auto second = nlohmann::json::parse(slurp(report2.string()));
  first.erase("config");
  second.erase("config");
  EXPECT_EQ(first.dump(), second.dump());

  const auto curve2 = scratch("curve2.csv");
  ASSERT_EQ(run({"rerun", "--from", curve.string(), "--out", curve2.string()}).code, 0);
  EXPECT_EQ(drop_first_line(slurp(curve2.string())), drop_first_line(curve_text));

  EXPECT_EQ(run({"rerun", "--from", fixture("qa_self_labels.tsv")}).code, 1);
}

TEST(Cli, EvalWithGeneratingParams) {
  auto r = run({"qa-eval", "--vocab", fixture("vocab_alice_bob.json"), "--data", fixture("qa_self_labels.tsv"),
                "--params", "0,0.5,0.5,1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("sentence,label,probability,predicted\nAlice is rich,1,1,1\n"), std::string::npos);
  EXPECT_EQ(run({"qa-eval", "--vocab", fixture("vocab_alice_bob.json"), "--data", fixture("qa_self_labels.tsv"),
                 "--params", "0,0.5"})
                .code,
            1);
}

TEST(Cli, RerunResolvesRelativeInputsFromAnotherDirectory) {
  const auto home = fs::current_path();
  const auto first = scratch("entail.csv");
  const auto second = scratch("entail2.csv");
  fs::current_path(QNLP_FIXTURE_DIR);
  auto r = run({"entail", "--space", "wordspace_pets.json", "--pair", "pug:pet", "--out", first.string()});
  fs::current_path(first.parent_path());
  auto again = run({"rerun", "--from", first.filename().string(), "--out", second.filename().string()});
  fs::current_path(home);
  ASSERT_EQ(r.code, 0) << r.err;
  ASSERT_EQ(again.code, 0) << again.err;
  EXPECT_EQ(drop_first_line(slurp(second.string())), "pair,crisp,k\npug:pet,true,1\n");
}
