#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "skillclf/cli.hpp"
#include "support/fixtures.hpp"

using namespace skillclf;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("skillclf_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  void write(const std::string& name, std::string_view content) const { io::write_file_atomic(dir_ / name, content); }
  std::string read(const std::string& name) const { return io::read_file(dir_ / name); }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return cli::run_command(args, out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

constexpr std::string_view kSmallGrid = R"json([
  {"trial": 1, "architecture": "16 : 8(elu) : 1(sigmoid)", "epochs": 20, "learning_rate": 0.01,
   "lambda": 0, "optimizer": "adam", "motivation": "small"},
  {"trial": 2, "architecture": "16 : 4(tanh) : 1(sigmoid)", "epochs": 20, "learning_rate": 0.01,
   "lambda": 0.00001, "optimizer": "rmsprop", "motivation": "smaller"}
])json";

constexpr std::string_view kSmallLevel2Grid = R"json([
  {"trial": 1, "architecture": "16 : 8(lrelu) : no(sigmoid)", "epochs": 20, "learning_rate": 0.01,
   "lambda": 0, "optimizer": "adam", "motivation": "small"}
])json";

constexpr std::string_view kSynthSpec = R"json({"counts": {"T1.1": 6, "T1.3": 4, "T2.1": 5, "T3.2": 5, "T4.4": 5,
  "T5.1": 5, "T6.6": 5}, "negatives": 30})json";

}  // namespace

TEST_F(CliTest, ParseCheckCountsSampleRecords) {
  write("ads.lab", fixtures::kSampleThreeLines);
  EXPECT_EQ(run({"parse", "--in", path("ads.lab"), "--check"}), 0) << err_.str();
  EXPECT_EQ(out_.str(), "3 records\n");
  EXPECT_NE(err_.str().find("skillclf parse {"), std::string::npos);
}

TEST_F(CliTest, ParseRewritesCanonically) {
  write("ads.lab", "# comment\n1-3: 1;   Task description ;0\n");
  EXPECT_EQ(run({"parse", "--in", path("ads.lab"), "--out", path("canon.lab")}), 0) << err_.str();
  EXPECT_EQ(read("canon.lab"), "1-3: 1; Task description; 0\n");
}

TEST_F(CliTest, ExitCodes) {
  write("bad.lab", "1-3 Task description\n");
  EXPECT_EQ(run({"parse", "--in", path("bad.lab")}), 1);
  EXPECT_NE(err_.str().find("error:"), std::string::npos);
  EXPECT_EQ(run({"parse"}), 2);
  EXPECT_EQ(run({"parse", "--in", path("bad.lab"), "--bogus"}), 2);
  EXPECT_EQ(run({"frobnicate"}), 2);
  EXPECT_EQ(run({}), 2);
  EXPECT_EQ(run({"embed", "--provider", "hash", "--in", path("bad.lab"), "--out", path("x.emb")}), 2);
  EXPECT_EQ(run({"parse", "--in", path("missing.lab")}), 1);
  EXPECT_FALSE(fs::exists(path("x.emb")));
}

TEST_F(CliTest, ScrubWritesOneSentencePerLine) {
  write("raw.txt", "Required skills. Visit https://example.com now!\nMail a@b.org; thanks\n");
  EXPECT_EQ(run({"scrub", "--in", path("raw.txt"), "--out", path("clean.txt")}), 0) << err_.str();
  EXPECT_EQ(read("clean.txt"), "Required skills\nVisit now\nMail , thanks\n");
}

TEST_F(CliTest, EmbedIsByteIdenticalAcrossRuns) {
  write("ads.lab", fixtures::kSampleCorpus);
  ASSERT_EQ(run({"embed", "--provider", "hash", "--seed", "42", "--in", path("ads.lab"), "--out", path("a.emb")}), 0);
  ASSERT_EQ(run({"embed", "--provider", "hash", "--seed", "42", "--in", path("ads.lab"), "--out", path("b.emb")}), 0);
  EXPECT_EQ(read("a.emb"), read("b.emb"));
  const auto table = read_embedding_file(read("a.emb"));
  EXPECT_EQ(table.entries.size(), 20u);
  EXPECT_EQ(table.dim, 768u);
  ASSERT_EQ(run({"embed", "--provider", "file", "--table", path("a.emb"), "--in", path("ads.lab"), "--out",
                 path("c.emb")}), 0) << err_.str();
  EXPECT_EQ(read("c.emb"), read("a.emb"));
}

TEST_F(CliTest, PipelineIsDeterministic) {
  write("spec.json", kSynthSpec);
  write("g1.json", kSmallGrid);
  write("g2.json", kSmallLevel2Grid);
  auto pipeline = [&](const std::string& tag, const std::string& jobs) {
    ASSERT_EQ(run({"synth", "--spec", path("spec.json"), "--seed", "42", "--out", path(tag + ".lab")}), 0) << err_.str();
    ASSERT_EQ(run({"embed", "--provider", "hash", "--seed", "7", "--dim", "16", "--in", path(tag + ".lab"), "--out",
                   path(tag + ".emb")}), 0) << err_.str();
    ASSERT_EQ(run({"cv", "--corpus", path(tag + ".lab"), "--embeddings", path(tag + ".emb"), "--level", "1",
                   "--class", "T3", "--grid", path("g1.json"), "--k", "3", "--repeats", "2", "--seed", "1",
                   "--jobs", jobs, "--out", path(tag + ".cv.json")}), 0) << err_.str();
    ASSERT_EQ(run({"grid", "--corpus", path(tag + ".lab"), "--embeddings", path(tag + ".emb"), "--level", "2",
                   "--grid", path("g2.json"), "--k", "2", "--repeats", "1", "--seed", "1", "--jobs", jobs, "--out",
                   path(tag + ".grid.json")}), 0) << err_.str();
    ASSERT_EQ(run({"report", "--in", path(tag + ".cv.json"), "--out", path(tag + ".md")}), 0) << err_.str();
    ASSERT_EQ(run({"train", "--corpus", path(tag + ".lab"), "--embeddings", path(tag + ".emb"), "--level1-grid",
                   path("g1.json"), "--level2-grid", path("g2.json"), "--level1-trial", "2", "--seed", "5", "--jobs",
                   jobs, "--out", path(tag + ".models")}), 0) << err_.str();
    ASSERT_EQ(run({"predict", "--models", path(tag + ".models"), "--in", path(tag + ".lab"), "--out",
                   path(tag + ".pred")}), 0) << err_.str();
  };
  pipeline("a", "1");
  pipeline("b", "2");
  for (const auto* ext : {".lab", ".emb", ".cv.json", ".grid.json", ".md", ".pred"}) {
    EXPECT_EQ(read(std::string("a") + ext), read(std::string("b") + ext)) << ext;
  }
  for (const auto& entry : fs::directory_iterator(dir_ / "a.models")) {
    EXPECT_EQ(read("a.models/" + entry.path().filename().string()),
              read("b.models/" + entry.path().filename().string()))
        << entry.path();
  }

  const auto cv = nlohmann::json::parse(read("a.cv.json"));
  EXPECT_EQ(cv.at("cells").size(), 2u);
  EXPECT_EQ(cv.at("cells")[0].at("accuracies").size(), 2u);
  EXPECT_EQ(cv.at("cells")[0].at("accuracies")[0].size(), 3u);
  EXPECT_EQ(cv.at("clone_before_split"), false);
  EXPECT_EQ(cv.at("augment"), "after-split");
  EXPECT_EQ(cv.at("embedding_provider"), "hash(seed=7)");
  EXPECT_EQ(read("a.md"), cv.at("report").get<std::string>());

  const auto grid = nlohmann::json::parse(read("a.grid.json"));
  EXPECT_EQ(grid.at("cells").size(), 6u);  // one trial x six classes

  EXPECT_TRUE(fs::exists(dir_ / "a.models" / "manifest.json"));
  EXPECT_TRUE(fs::exists(dir_ / "a.models" / "level2_T6.json"));
  const auto pred = read("a.pred");
  EXPECT_EQ(static_cast<std::size_t>(std::count(pred.begin(), pred.end(), '\n')), 65u);
  const auto first = pred.substr(0, pred.find('\n'));
  EXPECT_EQ(std::count(first.begin(), first.end(), '\t'), 2);
  EXPECT_NE(first.find("T6="), std::string::npos);

  ASSERT_EQ(run({"predict", "--models", path("a.models"), "--text", "t1s1k0 t1s1k1 team"}), 0) << err_.str();
  EXPECT_EQ(out_.str().substr(0, out_.str().find('\t')), "t1s1k0 t1s1k1 team");
}

TEST_F(CliTest, CloneBeforeSplitIsRecorded) {
  write("spec.json", kSynthSpec);
  write("g1.json", kSmallGrid);
  ASSERT_EQ(run({"synth", "--spec", path("spec.json"), "--seed", "1", "--out", path("c.lab")}), 0);
  ASSERT_EQ(run({"embed", "--provider", "hash", "--seed", "1", "--dim", "16", "--in", path("c.lab"), "--out",
                 path("c.emb")}), 0);
  ASSERT_EQ(run({"cv", "--corpus", path("c.lab"), "--embeddings", path("c.emb"), "--class", "T1", "--grid",
                 path("g1.json"), "--k", "2", "--repeats", "1", "--clone-before-split", "--out", path("r.json")}), 0)
      << err_.str();
  const auto doc = nlohmann::json::parse(read("r.json"));
  EXPECT_EQ(doc.at("clone_before_split"), true);
  EXPECT_EQ(doc.at("augment"), "before-split");
}

TEST_F(CliTest, InputsAreNotModified) {
  write("ads.lab", fixtures::kSampleCorpus);
  const auto before = read("ads.lab");
  ASSERT_EQ(run({"parse", "--in", path("ads.lab"), "--out", path("ads2.lab")}), 0);
  ASSERT_EQ(run({"embed", "--provider", "hash", "--seed", "1", "--in", path("ads.lab"), "--out", path("e.emb")}), 0);
  EXPECT_EQ(read("ads.lab"), before);
  EXPECT_EQ(read("ads2.lab"), before);
}
