// End-to-end tests that spawn the command-line binary. The binary path comes
// in through the QMPLAB_CLI_PATH compile definition so the tests run against
// the freshly built executable regardless of build directory layout.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>

#include "json.hpp"

#include "qmplab/matrix_json.hpp"

namespace {

namespace fs = std::filesystem;

const std::string cli = QMPLAB_CLI_PATH;

// Scratch directory shared by all cases in this binary, cleaned up at exit.
const fs::path& work_dir() {
  static const fs::path dir = [] {
    std::random_device rd;
    const fs::path p =
        fs::temp_directory_path() / ("qmplab_cli_" + std::to_string(rd()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

struct WorkDirCleanup {
  fs::path dir = work_dir();
  ~WorkDirCleanup() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
} cleanup_guard;

std::string path_in(const std::string& name) { return (work_dir() / name).string(); }

// Runs the binary through the shell with color disabled and both streams
// captured, returning the exit code.
int run(const std::string& args, const std::string& tag) {
  const std::string out = path_in(tag + ".out");
  const std::string err = path_in(tag + ".err");
  const std::string command =
      "NO_COLOR=1 \"" + cli + "\" " + args + " >\"" + out + "\" 2>\"" + err + "\"";
  const int status = std::system(command.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string captured(const std::string& tag, const char* stream = ".out") {
  return qmplab::read_text_file(path_in(tag + stream));
}

std::string first_line(const std::string& text) {
  return text.substr(0, text.find('\n'));
}

} // namespace

TEST_CASE("density sweep reports pass and valid JSON") {
  const int code = run("qmp-impure --ds 2 --de 4 --rank 2 --epsilon 0.1 --samples 40 --seed 7",
                       "impure");
  CHECK(code == 0);

  const nlohmann::json j = nlohmann::json::parse(captured("impure"));
  CHECK(j["name"] == "qmp-impure");
  CHECK(j["verdict"] == "pass");
  CHECK(j["counters"]["total"] == 40);
  CHECK(j["counters"]["indefinite"] == 40);
  CHECK(j["config"]["de"] == 4);
  CHECK(captured("impure", ".err").find("qmp-impure: pass") != std::string::npos);
}

TEST_CASE("pure sweep emits CSV when asked") {
  const int code = run("qmp-pure --samples 25 --seed 9 --format csv", "purecsv");
  CHECK(code == 0);
  CHECK(first_line(captured("purecsv")) == "sample_index,delta_actual,overlap1,overlap2,label");
}

TEST_CASE("sweep subcommand defaults to CSV and is reproducible") {
  const std::string out1 = path_in("sweep1.csv");
  const std::string out2 = path_in("sweep2.csv");
  CHECK(run("sweep --samples 30 --seed 3 --output \"" + out1 + "\"", "sweep1") == 0);
  CHECK(run("sweep --samples 30 --seed 3 --output \"" + out2 + "\"", "sweep2") == 0);

  const std::string body1 = qmplab::read_text_file(out1);
  CHECK(first_line(body1) == "sample_index,delta_actual,overlap1,overlap2,label");
  CHECK(body1 == qmplab::read_text_file(out2));
  CHECK(!fs::exists(out1 + ".tmp"));

  // explicit json overrides the default
  CHECK(run("sweep --samples 5 --seed 3 --format json", "sweepjson") == 0);
  CHECK(first_line(captured("sweepjson")) == "{");
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run("", "nosub") == 2);
  CHECK(run("frobnicate", "badsub") == 2);
  CHECK(run("qmp-pure --no-such-flag", "badflag") == 2);
  CHECK(run("qmp-pure --samples 5 --epsilon 0.6", "badeps") == 2);
  CHECK(run("qmp-pure --samples 0", "badsamples") == 2);
  CHECK(run("qmp-impure --samples 5 --delta banana", "baddelta") == 2);
  CHECK(run("qmp-impure --samples 5 --de 4 --rank 3", "badrank") == 2);
  CHECK(run("qmp-pure --samples 5 --format yaml", "badformat") == 2);
  CHECK(captured("badeps", ".err").find("error:") != std::string::npos);
}

TEST_CASE("help exits cleanly") {
  CHECK(run("--help", "help") == 0);
  CHECK(run("qmp-impure --help", "helpsub") == 0);
  CHECK(captured("help").find("verify") != std::string::npos);
}

TEST_CASE("emitted model and state classify into configuration 1") {
  const std::string model = path_in("model.json");
  const std::string state = path_in("state.json");
  const int code = run("qmp-impure --de 4 --rank 2 --samples 5 --seed 11 --emit-model \"" +
                           model + "\" --emit-state \"" + state + "\"",
                       "emit");
  CHECK(code == 0);
  REQUIRE(fs::exists(model));
  REQUIRE(fs::exists(state));

  const int cls = run("classify --model \"" + model + "\" --state \"" + state +
                          "\" --epsilon 0.1",
                      "classify");
  CHECK(cls == 0);
  const nlohmann::json j = nlohmann::json::parse(captured("classify"));
  CHECK(j["label"] == "Config1");
  CHECK(j["overlap1"].get<double>() > 0.999);
  CHECK(j["overlap2"].get<double>() < 1e-9);
}

TEST_CASE("classify rejects a missing model file") {
  CHECK(run("classify --model /no/such/model.json --state /no/such/state.json", "clsmissing") ==
        2);
  CHECK(captured("clsmissing", ".err").find("cannot open") != std::string::npos);
}

TEST_CASE("verify writes the combined report and sweep sidecars") {
  const std::string out = path_in("suite.json");
  const int code = run("verify --samples 12 --seed 5 --output \"" + out + "\"", "verify");
  CHECK(code == 0);

  const nlohmann::json j = nlohmann::json::parse(qmplab::read_text_file(out));
  CHECK(j["suite"] == "verify");
  CHECK(j["verdict"] == "pass");
  REQUIRE(j["reports"].size() == 4);
  CHECK(j["reports"][0]["name"] == "automorphism");
  CHECK(j["reports"][3]["name"] == "qmp-impure");

  CHECK(fs::exists(path_in("suite-pure.csv")));
  CHECK(fs::exists(path_in("suite-impure.csv")));
  CHECK(first_line(qmplab::read_text_file(path_in("suite-pure.csv"))) ==
        "sample_index,delta_actual,overlap1,overlap2,label");

  const std::string err = captured("verify", ".err");
  CHECK(err.find("automorphism: pass") != std::string::npos);
  CHECK(err.find("suite: pass") != std::string::npos);
}
