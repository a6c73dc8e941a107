#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "ambicon/io.hpp"
#include "fixtures.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

using namespace ambicon;
using namespace ambicon::testing;
using json = nlohmann::ordered_json;

namespace {

struct RunResult {
  int status = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(AMBICON_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  int rc = pclose(pipe);
  r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return r;
}

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "ambicon_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
  auto path = scratch_dir() / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.close();
  return path.string();
}

const char* kExample1 =
    R"({"costs":[0,0,1],"rewards":[0,4,8],
        "probs":[["1/2","1/2",0],["3/4",0,"1/4"],["1/4","1/2","1/4"]]})";

}  // namespace

TEST_CASE("instance JSON round trip is exact") {
  Instance inst = io::parse_instance(kExample1);
  CHECK(inst.n() == 3);
  CHECK(inst.m() == 3);
  CHECK(inst.prob(0, 0) == Q(1, 2));
  std::string emitted = io::emit_instance(inst);
  Instance back = io::parse_instance(emitted);
  CHECK(eq(back.costs(), inst.costs()));
  CHECK(eq(back.rewards(), inst.rewards()));
  for (int i = 0; i < inst.n(); ++i)
    for (int j = 0; j < inst.m(); ++j) CHECK(back.prob(i, j) == inst.prob(i, j));
  CHECK(io::emit_instance(back) == emitted);
}

TEST_CASE("instance JSON accepts exact decimals and rejects bad input") {
  Instance dec = io::parse_instance(
      R"({"costs":[0],"rewards":[1,2],"probs":[["0.25","0.75"]]})");
  CHECK(dec.prob(0, 0) == Q(1, 4));
  CHECK_THROWS_AS(io::parse_instance("{"), std::invalid_argument);
  CHECK_THROWS_AS(io::parse_instance(R"({"costs":[0],"rewards":[1]})"),
                  std::invalid_argument);
  // Non-integer numeric literals must be strings to stay exact.
  CHECK_THROWS_AS(io::parse_instance(R"({"costs":[0],"rewards":[1],"probs":[[0.25,0.75]]})"),
                  std::invalid_argument);
  // Ragged row.
  CHECK_THROWS_AS(io::parse_instance(R"({"costs":[0],"rewards":[1,2],"probs":[[1]]})"),
                  std::invalid_argument);
  // Bad row sum reports the row.
  try {
    io::parse_instance(R"({"costs":[0],"rewards":[1],"probs":[["99/100"]]})");
    CHECK(false);
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("row 0") != std::string::npos);
  }
  // Negative entries.
  CHECK_THROWS_AS(io::parse_instance(R"({"costs":[-1],"rewards":[1],"probs":[[1]]})"),
                  std::invalid_argument);
}

TEST_CASE("tau JSON round trip") {
  AmbiguousContract tau = io::parse_tau(R"({"contracts":[[0,2,0],["0","0","4"]]})", 3);
  CHECK(tau.size() == 2);
  CHECK(tau.contracts[0](1) == 2);
  AmbiguousContract back = io::parse_tau(io::emit_tau(tau), 3);
  CHECK(back.size() == 2);
  CHECK(eq(back.contracts[1], vec({0, 0, 4})));
  CHECK_THROWS_AS(io::parse_tau(R"({"contracts":[[1,2]]})", 3), std::invalid_argument);
  CHECK_THROWS_AS(io::parse_tau(R"({"contracts":[]})", 3), std::invalid_argument);
  CHECK_THROWS_AS(io::parse_tau(R"({"contracts":[[-1,0,0]]})", 3), std::invalid_argument);
}

TEST_CASE("solve subcommand on the 3x3 instance") {
  std::string file = write_file("example1.json", kExample1);
  RunResult amb = run_cli("solve --mode ambiguous " + file);
  REQUIRE(amb.status == 0);
  json doc = json::parse(amb.out);
  CHECK(doc["status"] == "ok");
  CHECK(doc["action"] == 3);
  CHECK(doc["payment"] == "1");
  CHECK(doc["principal_utility"] == "3");
  CHECK(doc["tau"].size() == 2);

  RunResult single = run_cli("solve --mode single " + file);
  REQUIRE(single.status == 0);
  CHECK(json::parse(single.out)["principal_utility"] == "2");

  // Identical commands emit byte-identical documents.
  CHECK(run_cli("solve --mode ambiguous " + file).out == amb.out);
}

TEST_CASE("solve per-action and in-band negative results") {
  std::string file = write_file(
      "unimpl.json",
      R"({"costs":[0,0,1],"rewards":[0,1],"probs":[[1,0],[0,1],["1/2","1/2"]]})");
  RunResult r = run_cli("solve --mode single --action 3 " + file);
  REQUIRE(r.status == 0);
  CHECK(json::parse(r.out)["status"] == "not-implementable");

  // An ambiguous contract can still incentivize it (two single-outcome
  // payments), even though no single contract can.
  RunResult amb = run_cli("solve --mode ambiguous --action 3 " + file);
  REQUIRE(amb.status == 0);
  json adoc = json::parse(amb.out);
  CHECK(adoc["status"] == "ok");
  CHECK(adoc["payment"] == "1");
}

TEST_CASE("duplicate rows are removed and reported") {
  std::string file = write_file(
      "dup.json",
      R"({"costs":[0,1,0],"rewards":[0,1],"probs":[["1/2","1/2"],["1/2","1/2"],[0,1]]})");
  RunResult r = run_cli("solve --mode ambiguous " + file);
  REQUIRE(r.status == 0);
  json doc = json::parse(r.out);
  REQUIRE(doc.contains("removed_duplicate_actions"));
  CHECK(doc["removed_duplicate_actions"] == json::array({2}));
  // Asking for the removed action is a domain error.
  CHECK(run_cli("solve --mode ambiguous --action 2 " + file).status == 1);
}

TEST_CASE("gap subcommand and csv table") {
  std::string file = write_file("example1.json", kExample1);
  RunResult g = run_cli("gap --first-best " + file);
  REQUIRE(g.status == 0);
  json doc = json::parse(g.out);
  CHECK(doc["rho"] == "3/2");
  CHECK(doc["rho_hat"] == "3/2");
  CHECK(doc["max_welfare"] == "3");
  CHECK(doc["first_best_action"] == 3);

  RunResult csv = run_cli("gap --format csv " + file);
  REQUIRE(csv.status == 0);
  CHECK(csv.out ==
        "action,R,W,min_payment_single,payment_ambiguous,U_P\n"
        "1,2,2,0,0,2\n"
        "2,2,2,0,,\n"
        "3,4,3,2,1,3\n");
}

TEST_CASE("validate subcommand") {
  std::string file = write_file("example1.json", kExample1);
  std::string tau = write_file("tau.json", R"({"contracts":[[0,2,0],[0,0,4]]})");
  RunResult r = run_cli("validate " + file + " --tau " + tau + " --action 3");
  REQUIRE(r.status == 0);
  json doc = json::parse(r.out);
  CHECK(doc["validates"] == true);
  CHECK(doc["max_payment"] == "1");

  RunResult bad = run_cli("validate " + file + " --tau " + tau + " --action 2");
  REQUIRE(bad.status == 0);
  CHECK(json::parse(bad.out)["validates"] == false);
}

TEST_CASE("gen subcommand emits instances with references") {
  RunResult r = run_cli("gen two_effort 1/10 1/2");
  REQUIRE(r.status == 0);
  Instance te = io::parse_instance(r.out);
  CHECK(te.n() == 4);
  CHECK(te.cost(3) == Q(81, 100));

  RunResult fx = run_cli("gen sop_tight 5");
  REQUIRE(fx.status == 0);
  json doc = json::parse(fx.out);
  CHECK(doc["reference"]["single_payment"] == "3/2");
  CHECK(io::parse_instance(fx.out).n() == 6);

  RunResult dg = run_cli("gen diagonal 2 1/2 0 0 1");
  REQUIRE(dg.status == 0);
  json frag = json::parse(dg.out);
  CHECK(frag["probs"][1] == json::array({"1/2", "1/2"}));

  CHECK(run_cli("gen no_such_generator").status == 2);
  CHECK(run_cli("gen two_effort 1/2 1/10").status == 1);  // eps >= delta
  CHECK(run_cli("gen diagonal 2 1/2").status == 2);       // missing rewards
}

TEST_CASE("check-class subcommand") {
  std::string lin = write_file(
      "linear.json", R"({"kind":"linear","alphas":["1/10","1/2",1],"grid":["1/2",1,2]})");
  RunResult r = run_cli("check-class " + lin);
  REQUIRE(r.status == 0);
  CHECK(json::parse(r.out)["status"] == "holds-analytically");

  std::string poly = write_file(
      "poly.json",
      R"({"kind":"polynomial","curves":[[0,0,1],[0,0,0,0,1]],"grid":["1/4","1/2",1,2,4]})");
  RunResult v = run_cli("check-class " + poly);
  REQUIRE(v.status == 0);
  json doc = json::parse(v.out);
  CHECK(doc["status"] == "violated");
  CHECK(doc["verdict"] == "manipulable");
  REQUIRE(doc.contains("witness"));
  // The emitted witness instance is itself a valid exact instance.
  Instance w = io::parse_instance(doc["witness"]["instance"].dump());
  CHECK(w.n() == 3);
}

TEST_CASE("exit codes and environment validation") {
  std::string file = write_file("example1.json", kExample1);
  CHECK(run_cli("solve --mode single /no/such/file.json").status == 2);
  CHECK(run_cli("frobnicate").status == 2);
  CHECK(run_cli("solve --mode neither " + file).status == 2);
  std::string bad = write_file("badsum.json",
                               R"({"costs":[0],"rewards":[1],"probs":[["99/100"]]})");
  CHECK(run_cli("solve --mode single " + bad).status == 2);

  RunResult env_bad = run_cli("gap " + file);
  CHECK(env_bad.status == 0);
  CHECK(run_cli("--help").status == 0);
  // Environment cap must be a positive integer when present.
  std::string cmd_ok = "AMBICON_THREADS=4 " + std::string(AMBICON_CLI_PATH) + " gap " + file +
                       " > /dev/null 2>&1";
  CHECK(WEXITSTATUS(std::system(cmd_ok.c_str())) == 0);
  std::string cmd_bad = "AMBICON_THREADS=zero " + std::string(AMBICON_CLI_PATH) + " gap " +
                        file + " > /dev/null 2>&1";
  CHECK(WEXITSTATUS(std::system(cmd_bad.c_str())) == 2);
}
