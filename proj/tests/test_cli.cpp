#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "paw1d/cli.hpp"
#include "paw1d/study.hpp"

using namespace paw1d;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "paw1d");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

double field(const std::string& text, const std::string& key) {
  const auto pos = text.find(key + " = ");
  REQUIRE(pos != std::string::npos);
  return std::stod(text.substr(pos + key.size() + 3));
}

std::string tmp(const std::string& name) { return std::string(PAW1D_TEST_TMP) + "/" + name; }

}  // namespace

TEST_CASE("exact prints E0 and residuals") {
  const auto r = run({"exact"});
  CHECK(r.code == kExitOk);
  CHECK(field(r.out, "E0") == doctest::Approx(-32.58219841295506).epsilon(1e-14));
  CHECK(r.out.find("residual") != std::string::npos);
  const auto sym = run({"exact", "--a", "0.5"});
  CHECK(sym.out.find("mirror_symmetric = true") != std::string::npos);
  const auto asym = run({"exact", "--Za", "3"});
  CHECK(asym.out.find("mirror_symmetric = false") != std::string::npos);
}

TEST_CASE("validation failures exit with 2 and name the constraint") {
  const auto r = run({"exact", "--a", "1.5"});
  CHECK(r.code == kExitValidation);
  CHECK(r.err.find("a must lie in (0,1)") != std::string::npos);
  CHECK(run({"solve", "--eta", "0.3"}).code == kExitValidation);
  CHECK(run({"solve", "--method", "nope"}).code == kExitValidation);
  CHECK(run({"solve", "--unknown", "1"}).code == kExitValidation);
  CHECK(run({"solve", "positional"}).code == kExitValidation);
  CHECK(run({}).code == kExitValidation);
}

TEST_CASE("numerical failures exit with 3") {
  const auto r = run({"solve", "--method", "direct", "--M", "8", "--dense-limit", "1",
                      "--eig-max-iterations", "1", "--eig-tolerance", "1e-300"});
  CHECK(r.code == kExitNumerical);
  CHECK(r.err.find("NoConvergence") != std::string::npos);
}

TEST_CASE("solve reports lambda relative to E0") {
  const auto d = run({"solve", "--method", "direct", "--M", "1024"});
  REQUIRE(d.code == kExitOk);
  CHECK(std::abs(field(d.out, "lambda") - field(d.out, "E0")) < 1e-2);
  const auto v = run({"solve", "--method", "vpaw", "--M", "64"});
  CHECK(field(v.out, "lambda") >= field(v.out, "E0"));
  const auto t = run({"solve", "--method", "paw_trunc", "--eta", "0.15", "--M", "128"});
  CHECK(field(t.out, "lambda") <= field(t.out, "E0"));
}

TEST_CASE("solve writes matrix and eigenvector dumps") {
  const auto r = run({"solve", "--method", "paw_pseudo", "--M", "4", "--dump", tmp("m.txt"),
                      "--vector", tmp("v.csv")});
  REQUIRE(r.code == kExitOk);
  std::ifstream m(tmp("m.txt")), v(tmp("v.csv"));
  std::string line;
  std::getline(m, line);
  CHECK(line.rfind("# method=paw_pseudo M=4 eta=", 0) == 0);
  std::getline(v, line);
  CHECK(line == "n,re,im");
  int rows = 0;
  while (std::getline(v, line)) ++rows;
  CHECK(rows == 9);
}

TEST_CASE("sweep from a config file with overrides") {
  {
    std::ofstream ini(tmp("sweep.ini"));
    ini << "# eta sweep\nmethod = paw_trunc,paw_pseudo\nM = 32\neta-grid = 0.2,0.1,0.05\nN = 1\n";
  }
  const auto r = run({"sweep", "--config", tmp("sweep.ini"), "--N", "2", "--output", tmp("s.csv"),
                      "--plot", tmp("s.gp")});
  REQUIRE(r.code == kExitOk);
  std::ifstream csv(tmp("s.csv"));
  const auto recs = read_csv(csv);
  REQUIRE(recs.size() == 6);
  CHECK(recs[0].method == Method::paw_trunc);
  CHECK(recs[0].N == 2);
  CHECK(recs[5].method == Method::paw_pseudo);
  CHECK(recs[5].eta == 0.05);
  std::ifstream gp(tmp("s.gp"));
  std::stringstream script;
  script << gp.rdbuf();
  CHECK(script.str().find(tmp("s.csv")) != std::string::npos);

  std::ofstream bad(tmp("bad.ini"));
  bad << "etaa = 0.1\n";
  bad.close();
  CHECK(run({"sweep", "--config", tmp("bad.ini")}).code == kExitValidation);
}

TEST_CASE("sweep output is byte-identical across runs") {
  const std::vector<std::string> args{"sweep", "--method", "direct,vpaw", "--sweep", "M",
                                      "--M-grid", "8,16"};
  const auto a = run(args), b = run(args);
  REQUIRE(a.code == kExitOk);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind(kCsvHeader, 0) == 0);
}

TEST_CASE("sweep over several N") {
  const auto r = run({"sweep", "--method", "paw_pseudo_odd", "--N-grid", "1,2", "--eta-grid",
                      "0.1,0.05", "--M", "16"});
  REQUIRE(r.code == kExitOk);
  std::istringstream in(r.out);
  const auto recs = read_csv(in);
  REQUIRE(recs.size() == 4);
  CHECK(recs[0].N == 1);
  CHECK(recs[3].N == 2);
}
