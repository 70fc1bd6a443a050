#include <catch2/catch_amalgamated.hpp>

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

std::string cli_path() {
  const char* p = std::getenv("CQCA_CLI");
  REQUIRE(p != nullptr);
  return p;
}

std::filesystem::path temp_file(const std::string& stem) {
  static int counter = 0;
  return std::filesystem::temp_directory_path() /
         (stem + "-" + std::to_string(::getpid()) + "-" +
          std::to_string(counter++));
}

RunResult run(const std::string& args) {
  std::filesystem::path out = temp_file("cli-out");
  std::string cmd =
      "\"" + cli_path() + "\" " + args + " > \"" + out.string() + "\" 2>&1";
  int rc = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  std::ifstream in(out);
  std::ostringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  std::filesystem::remove(out);
  return r;
}

}  // namespace

TEST_CASE("classify reports class and trace") {
  RunResult r = run("classify --cqca Tg");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("Glider(1)") != std::string::npos);
  CHECK(r.output.find("\"simple\": true") != std::string::npos);

  RunResult f = run("classify --cqca Tf");
  CHECK(f.exit_code == 0);
  CHECK(f.output.find("Fractal") != std::string::npos);
}

TEST_CASE("unknown preset is a user error") {
  RunResult r = run("classify --cqca Tz");
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("error:") != std::string::npos);
}

TEST_CASE("custom CQCA from a matrix file") {
  std::filesystem::path f = temp_file("cqca-json");
  {
    std::ofstream out(f);
    out << "{\"matrix\": [[\"1\", \"0\"], [\"u^-1+u\", \"1\"]]}\n";
  }
  RunResult r = run("classify --cqca \"" + f.string() + "\"");
  std::filesystem::remove(f);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("Periodic") != std::string::npos);
}

TEST_CASE("period golden check passes") {
  RunResult r = run("period --cqca Tf --Nmax 16 --golden");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"golden_match\": true") != std::string::npos);
}

TEST_CASE("render emits a PBM raster") {
  RunResult r = run("render --cqca Tg -N 6 --format pbm");
  CHECK(r.exit_code == 0);
  CHECK(r.output.rfind("P1\n6 6\n", 0) == 0);
}

TEST_CASE("render rejects a mismatched seed") {
  RunResult r = run("render --cqca Tg -N 6 --seed \"Z0 @N=4\"");
  CHECK(r.exit_code == 1);
}

TEST_CASE("stabilizers verify and export") {
  RunResult v = run("stabilizers --cqca Tg -N 4 -M 4 --verify");
  CHECK(v.exit_code == 0);
  CHECK(v.output.find("\"pass\": true") != std::string::npos);

  RunResult t = run("stabilizers --cqca Tp -N 2 -M 2 --format text");
  CHECK(t.exit_code == 0);
  CHECK(t.output.find("K[0,0] =") != std::string::npos);

  RunResult e = run("stabilizers --cqca Te -N 4 -M 4");
  CHECK(e.exit_code == 1);  // two-qubit automaton needs --cell two
  RunResult e2 = run("stabilizers --cqca Te -N 4 -M 4 --cell two --verify");
  CHECK(e2.exit_code == 0);
  CHECK(e2.output.find("\"pass\": true") != std::string::npos);
}

TEST_CASE("universality exit codes") {
  RunResult g = run("universality --cqca Tg -N 4");
  CHECK(g.exit_code == 0);
  CHECK(g.output.find("\"universal\": true") != std::string::npos);

  RunResult p = run("universality --cqca Tp -N 4");
  CHECK(p.exit_code == 3);
  CHECK(p.output.find("\"universal\": false") != std::string::npos);
}

TEST_CASE("gates and closure listings") {
  RunResult g = run("gates --cqca Tg -N 4");
  CHECK(g.exit_code == 0);
  CHECK(g.output.find("\"L\": 4") != std::string::npos);
  CHECK(g.output.find("\"image\": \"X1 @N=4\"") != std::string::npos);

  RunResult c = run("closure --cqca Tg -N 4");
  CHECK(c.exit_code == 0);
  CHECK(c.output.find("\"closure_size\": 120") != std::string::npos);
}

TEST_CASE("apply prints the orbit") {
  RunResult r = run("apply --cqca Tg --pauli \"Z0 @N=5\" --steps 2");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"Z0 @N=5\"") != std::string::npos);
  CHECK(r.output.find("\"X0 @N=5\"") != std::string::npos);
}

TEST_CASE("simulate contracts a pattern") {
  std::filesystem::path f = temp_file("pattern-json");
  {
    std::ofstream out(f);
    out << "{\"n\": 2, \"cell\": \"one\", \"block_columns\": 2, "
           "\"dalpha\": 0.001, "
           "\"tilt\": {\"column\": 1, \"site\": 0, \"p\": \"Z\"}}\n";
  }
  RunResult r = run("simulate --cqca Tg --pattern \"" + f.string() + "\"");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"pass\": true") != std::string::npos);

  RunResult p = run("simulate --cqca Tg --pattern \"" + f.string() +
                    "\" --state perturbed:0.05:7");
  CHECK(p.exit_code == 0);
  CHECK(p.output.find("\"pass\": true") != std::string::npos);
  std::filesystem::remove(f);

  RunResult bad = run("simulate --cqca Tg --pattern /nonexistent.json");
  CHECK(bad.exit_code == 1);
}
