#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "logdim/graph.hpp"

namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("logdim_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // exit status of `logdim <args>`; stderr goes to err.txt
  int run(const std::string& args) {
    const std::string cmd = std::string(LOGDIM_CLI_PATH) + " " + args + " 2>" + path("err.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  fs::path path(const std::string& name) const { return dir_ / name; }

  std::string slurp(const std::string& name) const {
    std::ifstream in(path(name));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

  std::string p(const std::string& name) const { return path(name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, GenerateWritesAnEdgeList) {
  ASSERT_EQ(run("generate --n 300 --m 2 --alpha 0.5 --beta 0.2 --seed 4 --out " + p("g.txt") + " --positions " +
                p("pos.tsv")),
            0);
  const auto g = logdim::load_edge_list(path("g.txt")).graph;
  EXPECT_GT(g.edge_count(), 100u);
  std::ifstream pos(path("pos.tsv"));
  std::string line;
  std::size_t rows = 0;
  while (std::getline(pos, line)) rows += !line.empty() && line[0] != '#';
  EXPECT_GE(rows, 300u);
  // same seed, same bytes
  ASSERT_EQ(run("generate --n 300 --m 2 --alpha 0.5 --beta 0.2 --seed 4 --out " + p("g2.txt")), 0);
  EXPECT_EQ(slurp("g.txt"), slurp("g2.txt"));
}

TEST_F(Cli, ParamsJsonAndCsv) {
  ASSERT_EQ(run("generate --n 500 --m 2 --alpha 0.5 --beta 0.2 --out " + p("g.txt")), 0);
  ASSERT_EQ(run("params --graph " + p("g.txt") + " --out " + p("p.json")), 0);
  const auto j = nlohmann::json::parse(slurp("p.json"));
  for (const char* key : {"n", "edges", "rho", "eta", "x_min", "alpha", "beta", "clamped", "eff_diameter", "m_model"})
    EXPECT_TRUE(j.contains(key)) << key;
  ASSERT_EQ(run("--format csv params --graph " + p("g.txt") + " --out " + p("p.csv")), 0);
  EXPECT_EQ(slurp("p.csv").rfind("n,edges,rho,eta,x_min,alpha,beta,clamped,eff_diameter,m_model\n", 0), 0u);
}

TEST_F(Cli, GraphletsAndSpectrum) {
  write("k4.txt", "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n");
  ASSERT_EQ(run("graphlets --exact --graph " + p("k4.txt") + " --out " + p("gl.json")), 0);
  const auto j = nlohmann::json::parse(slurp("gl.json"));
  EXPECT_EQ(j["counts"][1].get<double>(), 4.0);
  EXPECT_EQ(j["counts"][7].get<double>(), 1.0);
  ASSERT_EQ(run("spectrum --graph " + p("k4.txt") + " --out " + p("s.csv")), 0);
  const auto s = slurp("s.csv");
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 202);
}

TEST_F(Cli, SvmTrainAndPredict) {
  std::string csv = "f1,f2,label\n";
  for (int i = 0; i < 20; ++i) {
    csv += std::to_string(-1.0 - 0.05 * i) + "," + std::to_string(0.01 * i) + ",3\n";
    csv += std::to_string(1.0 + 0.05 * i) + "," + std::to_string(0.02 * i) + ",8\n";
  }
  write("train.csv", csv);
  ASSERT_EQ(run("svm-train --features " + p("train.csv") + " --cv 4 --out " + p("model.json")), 0);
  ASSERT_EQ(run("svm-predict --model " + p("model.json") + " --features " + p("train.csv") + " --out " + p("pred.csv")),
            0);
  std::istringstream in(slurp("pred.csv"));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "row,predicted,label");
  while (std::getline(in, line)) {
    const auto a = line.find(','), b = line.rfind(',');
    EXPECT_EQ(line.substr(a + 1, b - a - 1), line.substr(b + 1));
  }
}

TEST_F(Cli, NullModelHeader) {
  ASSERT_EQ(run("generate --n 200 --m 2 --alpha 0.5 --beta 0.2 --out " + p("g.txt")), 0);
  ASSERT_EQ(run("nullmodel --type rewire --graph " + p("g.txt") + " --out " + p("r.txt")), 0);
  EXPECT_EQ(slurp("r.txt").rfind("# nullmodel=swap\n", 0), 0u);
  ASSERT_EQ(run("nullmodel --type percolate --fraction 0.1 --graph " + p("g.txt") + " --out " + p("q.txt")), 0);
  EXPECT_EQ(logdim::load_edge_list(path("q.txt")).graph.edge_count(),
            logdim::load_edge_list(path("g.txt")).graph.edge_count());
}

TEST_F(Cli, FitSensitivityAndReport) {
  ASSERT_EQ(run("generate --n 200 --m 2 --alpha 0.5 --beta 0.2 --out " + p("g200.txt")), 0);
  EXPECT_EQ(run("fit --method spectral --dims 1-3 --graph " + p("g200.txt") + " --out " + p("fits/x.json")), 2)
      << "missing output directory is an input error";
  fs::create_directories(path("fits"));
  for (int i = 0; i < 3; ++i) {
    const std::string n = std::to_string(200 + 150 * i);
    ASSERT_EQ(run("generate --n " + n + " --m 2 --alpha 0.5 --beta 0.2 --out " + p("g" + n + ".txt")), 0);
    ASSERT_EQ(run("fit --method spectral --dims 1-3 --graph " + p("g" + n + ".txt") + " --out " +
                  p("fits/g" + n + ".json")),
              0);
  }
  ASSERT_EQ(run("report --fits " + p("fits") + " --out " + p("report.json")), 0);
  const auto r = nlohmann::json::parse(slurp("report.json"));
  EXPECT_EQ(r["points"].size(), 3u);
  EXPECT_TRUE(r.contains("ci_slope"));
  EXPECT_TRUE(r.contains("model_curve"));

  ASSERT_EQ(run("fit --dims 1-2 --samples-per-dim 3 --graph " + p("g200.txt") + " --training-out " + p("t.csv") +
                " --out " + p("fit.json")),
            0);
  EXPECT_EQ(nlohmann::json::parse(slurp("fit.json"))["method"], "graphlets");
  EXPECT_EQ(slurp("t.csv").rfind("label,index,edges,", 0), 0u);
  ASSERT_EQ(run("sensitivity --study percolation --levels 0,0.05 --trials 2 --dims 1-2 --samples-per-dim 3 --graph " +
                p("g200.txt") + " --out " + p("sens.csv")),
            0);
  const auto sens = slurp("sens.csv");
  EXPECT_EQ(std::count(sens.begin(), sens.end(), '\n'), 5);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run("params --graph " + p("missing.txt")), 2);
  write("bad.txt", "0 1\nx y\n");
  EXPECT_EQ(run("params --graph " + p("bad.txt")), 2);
  EXPECT_NE(slurp("err.txt").find("bad.txt:2"), std::string::npos);
  EXPECT_EQ(run("generate --n 10 --m 2 --alpha 1.5 --beta 0.2"), 2);
  EXPECT_EQ(run("nosuchcommand"), 2);
  EXPECT_EQ(run("fit --graph " + p("bad.txt") + " --method magic"), 2);
  // a single edge: every degree is 1, so the power-law fit has nothing to work with
  write("edge.txt", "0 1\n");
  EXPECT_EQ(run("fit --graph " + p("edge.txt") + " --dims 1-2"), 3);
  write("fits.json", "{}");
  EXPECT_EQ(run("report --fits " + p("fits.json")), 2);
}

TEST_F(Cli, KCore) {
  // K4 with a pendant path: the 3-core is the K4
  write("g.txt", "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n3 4\n4 5\n");
  ASSERT_EQ(run("kcore --k 3 --graph " + p("g.txt") + " --out " + p("core.txt")), 0);
  const auto c = logdim::load_edge_list(path("core.txt")).graph;
  EXPECT_EQ(c.node_count(), 4u);
  EXPECT_EQ(c.edge_count(), 6u);
}
