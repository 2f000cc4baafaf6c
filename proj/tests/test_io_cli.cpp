#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "csi/io.hpp"

using namespace csi;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("csi_test_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::vector<std::string>& args) { return cli_main(args); }

}  // namespace

TEST_CASE("dense csv: basic load, header and comments") {
  TempDir dir;
  write_file(dir.file("a.csv"), "# comment\ny,x0,x1\n1,0.5,2\n-1,1.5,-3\n");
  const Dataset ds = load_dense_csv(dir.file("a.csv"));
  CHECK(ds.size() == 2);
  CHECK(ds.dim() == 2);
  CHECK(ds.kind() == ResponseKind::kBinaryClassification);
  CHECK(ds.responses()[0] == 1.0);
  CHECK(ds.features().dense_values()[3] == -3.0);
}

TEST_CASE("dense csv: ragged row names its line") {
  TempDir dir;
  write_file(dir.file("bad.csv"), "1,2,3\n1,2\n");
  try {
    load_dense_csv(dir.file("bad.csv"));
    FAIL("expected an error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("dense csv: non-numeric cell names its line") {
  TempDir dir;
  write_file(dir.file("bad.csv"), "1,2,3\n1,huh,3\n");
  try {
    load_dense_csv(dir.file("bad.csv"));
    FAIL("expected an error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("dense csv round-trips content exactly") {
  TempDir dir;
  const Dataset ds(
      FeatureMatrix::dense(2, 2, {0.1, -1.0 / 3.0, 1e-17, 123456.789}),
      Vector({1.0, -1.0}), ResponseKind::kBinaryClassification);
  save_dense_csv(ds, dir.file("r.csv"), "probe");
  const Dataset back = load_dense_csv(dir.file("r.csv"));
  CHECK(back.responses() == ds.responses());
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(back.features().dense_values()[i] == ds.features().dense_values()[i]);
}

TEST_CASE("sparse format: parsing, zero rows, d inference") {
  TempDir dir;
  write_file(dir.file("s.txt"), "+1 1:0.5 3:1.0\n-1\n+1 2:2.0\n");
  const Dataset ds = load_sparse(dir.file("s.txt"));
  CHECK(ds.size() == 3);
  CHECK(ds.dim() == 3);  // max index
  CHECK(ds.features().is_sparse());
  CHECK(ds.features().row_offsets()[1] == 2);
  CHECK(ds.features().row_offsets()[2] == 2);  // all-zero row

  const Dataset wide = load_sparse(dir.file("s.txt"), 10);
  CHECK(wide.dim() == 10);
  CHECK_THROWS_AS(load_sparse(dir.file("s.txt"), 2), std::runtime_error);
}

TEST_CASE("sparse format: index rules") {
  TempDir dir;
  write_file(dir.file("bad1.txt"), "+1 3:1 1:2\n");
  try {
    load_sparse(dir.file("bad1.txt"));
    FAIL("expected an error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("line 1") != std::string::npos);
  }
  write_file(dir.file("bad2.txt"), "+1 0:1\n");
  CHECK_THROWS_AS(load_sparse(dir.file("bad2.txt")), std::runtime_error);
}

TEST_CASE("split: sizes, determinism, coverage") {
  std::vector<double> x(100), y(100);
  for (std::size_t i = 0; i < 100; ++i) {
    x[i] = static_cast<double>(i);
    y[i] = static_cast<double>(i);
  }
  const Dataset ds(FeatureMatrix::dense(100, 1, x), Vector(y),
                   ResponseKind::kRegression);
  const SplitResult parts = split(ds, SplitFractions{0.5, 0.25, 0.25}, 9);
  CHECK(parts.train.size() == 50);
  CHECK(parts.val.size() == 25);
  CHECK(parts.test.size() == 25);

  // disjoint and covering: responses are the row ids here
  std::vector<bool> seen(100, false);
  for (const Dataset* part : {&parts.train, &parts.val, &parts.test})
    for (std::size_t i = 0; i < part->size(); ++i) {
      const auto id = static_cast<std::size_t>(part->responses()[i]);
      CHECK(!seen[id]);
      seen[id] = true;
    }
  for (bool s : seen) CHECK(s);

  const SplitResult again = split(ds, SplitFractions{0.5, 0.25, 0.25}, 9);
  CHECK(again.train.responses() == parts.train.responses());

  // n=10 with (0.8, 0.1, 0.1): floor gives 1/1, remainder to train
  std::vector<double> x10(10), y10(10);
  const Dataset small(FeatureMatrix::dense(10, 1, x10), Vector(y10),
                      ResponseKind::kRegression);
  const SplitResult tiny = split(small, SplitFractions{0.8, 0.1, 0.1}, 1);
  CHECK(tiny.train.size() == 8);
  CHECK(tiny.val.size() == 1);
  CHECK(tiny.test.size() == 1);
}

TEST_CASE("split: empty parts and bad fractions raise") {
  std::vector<double> x(5), y(5);
  const Dataset ds(FeatureMatrix::dense(5, 1, x), Vector(y), ResponseKind::kRegression);
  CHECK_THROWS_AS(split(ds, SplitFractions{0.9, 0.05, 0.05}, 1), std::invalid_argument);
  CHECK_THROWS_AS(split(ds, SplitFractions{0.5, 0.2, 0.2}, 1), std::invalid_argument);
}

TEST_CASE("cli: synth is byte-deterministic") {
  TempDir dir;
  const std::vector<std::string> args{"synth", "--n",    "20",           "--d",
                                      "6",     "--k",    "2",            "--seed",
                                      "7",     "--out",  dir.file("one")};
  std::vector<std::string> args2 = args;
  args2.back() = dir.file("two");
  REQUIRE(run_cli(args) == 0);
  REQUIRE(run_cli(args2) == 0);
  CHECK(read_file(dir.file("one") + "/data.csv") == read_file(dir.file("two") + "/data.csv"));
  CHECK(read_file(dir.file("one") + "/wstar.csv") == read_file(dir.file("two") + "/wstar.csv"));
}

TEST_CASE("cli: train then eval on a separable toy reaches AUC 1") {
  TempDir dir;
  // y = sign(x0); x1 is noise
  write_file(dir.file("toy.csv"),
             "y,x0,x1\n"
             "1,2,0.1\n1,1,-0.2\n1,1.5,0.3\n1,2.5,-0.1\n"
             "-1,-2,0.2\n-1,-1,-0.3\n-1,-1.5,0.1\n-1,-2.5,-0.2\n");
  REQUIRE(run_cli({"train", "--data", dir.file("toy.csv"), "--atoms", "sparse", "--s",
                   "1", "--eta", "0.5", "--iters", "30", "--model-out",
                   dir.file("m.csi")}) == 0);
  REQUIRE(run_cli({"eval", "--data", dir.file("toy.csv"), "--model", dir.file("m.csi"),
                   "--metric", "auc", "--out", dir.file("ev")}) == 0);
  const std::string eval_csv = read_file(dir.file("ev") + "/eval.csv");
  CHECK(eval_csv.find("auc,1,") != std::string::npos);
  CHECK(fs::exists(dir.file("ev") + "/manifest.json"));
  CHECK(fs::exists(dir.path / "manifest.json"));  // train wrote one next to the model
}

TEST_CASE("cli: predict writes row,score,pred") {
  TempDir dir;
  write_file(dir.file("toy.csv"), "y,x0\n1,1\n-1,-1\n1,2\n-1,-2\n");
  REQUIRE(run_cli({"train", "--data", dir.file("toy.csv"), "--s", "1", "--eta", "0.5",
                   "--iters", "20", "--model-out", dir.file("m.csi")}) == 0);
  REQUIRE(run_cli({"predict", "--data", dir.file("toy.csv"), "--model",
                   dir.file("m.csi"), "--out", dir.file("p")}) == 0);
  const std::string scores = read_file(dir.file("p") + "/scores.csv");
  CHECK(scores.rfind("row,score,pred\n", 0) == 0);
  CHECK(scores.find("\n0,") != std::string::npos);

  // two runs are byte-identical
  REQUIRE(run_cli({"predict", "--data", dir.file("toy.csv"), "--model",
                   dir.file("m.csi"), "--out", dir.file("p2")}) == 0);
  CHECK(read_file(dir.file("p") + "/scores.csv") ==
        read_file(dir.file("p2") + "/scores.csv"));
}

TEST_CASE("cli: group atoms demand a groups file") {
  TempDir dir;
  write_file(dir.file("toy.csv"), "y,x0,x1\n1,1,0\n-1,-1,0\n");
  const int rc = run_cli({"train", "--data", dir.file("toy.csv"), "--atoms", "group",
                          "--s", "1", "--model-out", dir.file("m.csi")});
  CHECK(rc != 0);
}

TEST_CASE("cli: unknown flags are usage errors") {
  CHECK(run_cli({"train", "--no-such-flag"}) != 0);
  CHECK(run_cli({"no-such-command"}) != 0);
}

TEST_CASE("cli: sweep produces results, summary and a best model") {
  TempDir dir;
  REQUIRE(run_cli({"synth", "--n", "120", "--d", "12", "--k", "3", "--seed", "3",
                   "--out", dir.file("data")}) == 0);
  REQUIRE(run_cli({"sweep", "--data", dir.file("data") + "/data.csv", "--s-grid",
                   "2,3,6", "--etas", "0.5,1", "--lambda", "0.001", "--iters", "15",
                   "--seed", "11", "--out", dir.file("sw")}) == 0);
  CHECK(fs::exists(dir.file("sw") + "/results.csv"));
  CHECK(fs::exists(dir.file("sw") + "/summary.csv"));
  CHECK(fs::exists(dir.file("sw") + "/best_model.csi"));
  const std::string results = read_file(dir.file("sw") + "/results.csv");
  CHECK(results.rfind("s,eta,val_auc,status\n", 0) == 0);
  // 3 budgets x 2 etas = 6 grid rows + header
  CHECK(std::count(results.begin(), results.end(), '\n') == 7);
}

TEST_CASE("cli: convergence writes the d,t,distance trace") {
  TempDir dir;
  REQUIRE(run_cli({"convergence", "--dims", "16,25", "--n", "60", "--iters", "5",
                   "--etas", "0.5,1", "--seed", "2", "--out", dir.file("c")}) == 0);
  const std::string trace = read_file(dir.file("c") + "/trace.csv");
  CHECK(trace.rfind("d,t,distance\n", 0) == 0);
  CHECK(std::count(trace.begin(), trace.end(), '\n') == 11);  // header + 2*5 rows
  CHECK(fs::exists(dir.file("c") + "/summary.csv"));
}

TEST_CASE("manifest records inputs and config") {
  TempDir dir;
  write_file(dir.file("toy.csv"), "y,x0\n1,1\n-1,-1\n");
  REQUIRE(run_cli({"train", "--data", dir.file("toy.csv"), "--s", "1", "--iters", "5",
                   "--model-out", dir.file("m.csi")}) == 0);
  const std::string manifest = read_file((dir.path / "manifest.json").string());
  CHECK(manifest.find("\"command\": \"train\"") != std::string::npos);
  CHECK(manifest.find("toy.csv") != std::string::npos);
  CHECK(manifest.find("\"s\": \"1\"") != std::string::npos);
}

TEST_CASE("fnv1a64 digest is stable") {
  TempDir dir;
  write_file(dir.file("x"), "hello");
  // FNV-1a 64 of "hello"
  CHECK(fnv1a64_file(dir.file("x")) == "a430d84680aabd0b");
}
