#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

const fs::path& scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("clawham_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string data(const std::string& name) { return std::string(CLAWHAM_DATA) + "/" + name; }

Result cli(const std::string& args) {
  const auto out = scratch() / "stdout.txt";
  const std::string cmd = std::string("\"") + CLAWHAM_CLI + "\" " + args + " > \"" + out.string() + "\" 2>/dev/null";
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cli check") {
  CHECK(cli("check --spec " + data("blowup_LS3.json") + " --radius 4").code == 0);
  const auto tree = cli("check --spec " + data("tree_S3.json"));
  CHECK(tree.code == 1);
  CHECK(json::parse(tree.out)["ok"] == false);
  CHECK(cli("check --spec " + data("bad.json")).code == 2);
  CHECK(cli("check --spec /nonexistent.json").code == 2);
  CHECK(cli("check").code == 2);
  CHECK(cli("bogus").code == 2);
}

TEST_CASE("cli run and verify") {
  const auto t1 = scratch() / "s3a.json", t2 = scratch() / "s3b.json";
  const auto r1 = cli("run --spec " + data("blowup_LS3.json") + " --stages 4 --out " + t1.string());
  CHECK(r1.code == 0);
  CHECK(json::parse(r1.out)["ok"] == true);
  CHECK(cli("run --spec " + data("blowup_LS3.json") + " --stages 4 --out " + t2.string()).code == 0);
  CHECK(slurp(t1) == slurp(t2));
  CHECK(cli("verify --trace " + t1.string()).code == 0);

  // Tampered: one cycle vertex dropped from the last stage.
  auto doc = nlohmann::ordered_json::parse(slurp(t1));
  auto& c = doc["stages"].back()["cycle"];
  c.erase(c.begin() + 3);
  const auto bad = scratch() / "tampered.json";
  std::ofstream(bad) << doc.dump();
  const auto v = cli("verify --trace " + bad.string());
  CHECK(v.code == 1);
  CHECK(json::parse(v.out)["ok"] == false);

  const auto empty = scratch() / "empty.json";
  std::ofstream(empty) << "";
  CHECK(cli("verify --trace " + empty.string()).code == 0);
  CHECK(cli("verify --trace " + data("bad.json")).code == 2);

  // Trace on standard output, stage 0 only.
  const auto s0 = cli("run --spec " + data("blowup_LS3.json") + " --stages 0");
  CHECK(s0.code == 0);
  CHECK(json::parse(s0.out)["stages"].size() == 1);
}

TEST_CASE("cli run failures") {
  const auto out = (scratch() / "c12.json").string();
  CHECK(cli("run --spec " + data("cycle12_spec.json") + " --cap 4 --out " + out).code == 3);
  CHECK(cli("run --spec " + data("blowup_LS3.json") + " --cap 3 --out " + out).code == 2);
  CHECK(cli("run --spec " + data("tree_S3.json") + " --out " + out).code == 1);
  CHECK(cli("run --spec " + data("bad.json") + " --out " + out).code == 2);
}

TEST_CASE("cli finite") {
  const auto k6 = cli("finite --graph " + data("k6_minus_matching.json") + " --mode both");
  CHECK(k6.code == 0);
  const auto r = json::parse(k6.out);
  CHECK(r["agree"] == true);
  CHECK(r["class"] == "CLIQUE_MINUS_MATCHING");
  CHECK(r["extension_valid"] == true);

  const auto p4 = cli("finite --graph " + data("path4.json") + " --mode brute");
  CHECK(p4.code == 0);
  CHECK(json::parse(p4.out)["hamiltonian"] == false);

  const auto claw = cli("finite --graph " + data("claw_cycle.json") + " --mode extension");
  CHECK(claw.code == 1);
  CHECK(json::parse(claw.out).contains("extension_error"));

  const auto c5 = cli("finite --graph " + data("cycle5.json"));
  CHECK(c5.code == 0);
  CHECK(json::parse(c5.out)["class"] == "CYCLE");
  CHECK(cli("finite --graph " + data("cycle5.json") + " --mode fast").code == 2);
}

TEST_CASE("cli export-dot") {
  const auto spec = scratch() / "ls3.json";
  std::ofstream(spec) << R"({"base":{"kind":"S","n":3},"transforms":[{"op":"line_graph"}]})";
  const auto d = cli("export-dot --spec " + spec.string() + " --radius 2");
  CHECK(d.code == 0);
  CHECK(d.out.rfind("graph", 0) == 0);
  // The three edges at the centre of S3 form a triangle.
  for (const char* e : {R"e("(c|0:1)" -- "(c|1:1)")e", R"e("(c|0:1)" -- "(c|2:1)")e", R"e("(c|1:1)" -- "(c|2:1)")e"})
    CHECK(d.out.find(e) != std::string::npos);
  CHECK(d.out == cli("export-dot --spec " + spec.string() + " --radius 2").out);

  const auto d0 = cli("export-dot --spec " + spec.string() + " --radius 0");
  CHECK(d0.out.find("--") == std::string::npos);

  const auto trace = scratch() / "dot_trace.json";
  REQUIRE(cli("run --spec " + data("blowup_LS3.json") + " --stages 1 --out " + trace.string()).code == 0);
  const auto overlay = cli("export-dot --trace " + trace.string() + " --radius 1");
  CHECK(overlay.code == 0);
  const auto doc = json::parse(slurp(trace));
  std::size_t red = 0;
  for (std::size_t pos = 0; (pos = overlay.out.find("color=red", pos)) != std::string::npos; ++pos) ++red;
  CHECK(red == doc["stages"].back()["cycle"].size());
  CHECK(cli("export-dot --radius 2").code == 2);
}
