#include <gtest/gtest.h>

#include <csignal>
#include <cstdio>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include "cli/cli.hpp"
#include "support.hpp"

using namespace twinops;
namespace ts = twinops::testsupport;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args, bool with_scenario = true) {
  std::vector<std::string> full{"twinops"};
  if (with_scenario) {
    full.push_back("--scenario");
    full.push_back(ts::reference_scenario_path().string());
  }
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : full) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

Json run_json(std::vector<std::string> args) {
  args.insert(args.begin(), {"--output", "json", "--deterministic"});
  const auto r = run_cli(args);
  EXPECT_EQ(r.code, 0) << r.err;
  return Json::parse(r.out);
}

}  // namespace

TEST(Cli, ExitCodeMapping) {
  EXPECT_EQ(cli::exit_code_for(Errc::NoPath), cli::kExitNoSolution);
  EXPECT_EQ(cli::exit_code_for(Errc::NoDetections), cli::kExitNoSolution);
  EXPECT_EQ(cli::exit_code_for(Errc::IoError), cli::kExitIo);
  EXPECT_EQ(cli::exit_code_for(Errc::BindFailure), cli::kExitIo);
  EXPECT_EQ(cli::exit_code_for(Errc::ScenarioInvalid), cli::kExitConfig);
  EXPECT_EQ(cli::exit_code_for(Errc::UnknownPoint), cli::kExitConfig);
}

TEST(Cli, LocalizeText) {
  const auto r = run_cli({"localize"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("root cause: TN1/S1/1/OT"), std::string::npos);
  EXPECT_NE(r.out.find("explained alarms"), std::string::npos);
}

TEST(Cli, LocalizeJsonIsDeterministic) {
  const auto a = run_json({"localize", "--algo", "mp"});
  const auto b = run_json({"localize", "--algo", "mp"});
  EXPECT_EQ(a, b);
  EXPECT_EQ(a["root_cause_id"], "TN1/S1/1/OT");
  EXPECT_EQ(a["algo"], "mp");
  EXPECT_FALSE(a.contains("elapsed_ms"));
}

TEST(Cli, NavigateJsonAndRender) {
  const auto doc = run_json({"navigate", "--from", "P1", "--to", "P4", "--shelf-level", "1"});
  EXPECT_EQ(doc["from"], "P1");
  EXPECT_DOUBLE_EQ(doc["flag"]["height_m"].get<double>(), 1.5);
  EXPECT_GT(doc["arrows"].size(), 1u);
  const auto r = run_cli({"navigate", "--from", "P1", "--target", "TN1/S1/1/OT", "--render"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find('S'), std::string::npos);
  EXPECT_NE(r.out.find('F'), std::string::npos);
  EXPECT_NE(r.out.find("height 1.50 m"), std::string::npos);
}

TEST(Cli, NavigateErrors) {
  EXPECT_EQ(run_cli({"navigate", "--from", "P1", "--to", "P9"}).code, cli::kExitConfig);
  EXPECT_EQ(run_cli({"navigate", "--from", "P1"}).code, cli::kExitConfig);
  EXPECT_EQ(run_cli({"navigate", "--from", "P1", "--to", "P4", "--target", "TN1/S1/1/OT"}).code, cli::kExitConfig);
  EXPECT_EQ(run_cli({"navigate", "--from", "P1", "--to", "P4", "--shelf-level", "3"}).code, cli::kExitConfig);
}

TEST(Cli, CardIdShelf1) {
  const auto doc = run_json({"card-id", "--layout", "tn1-shelf1"});
  EXPECT_EQ(doc["root_cause_id"], "TN1/S1/1/OT");
  EXPECT_EQ(doc["root_cause_visible"], true);
  std::map<int, std::string> colours;
  for (const auto& it : doc["items"]) colours[it["slot"].get<int>()] = it["color"].get<std::string>();
  EXPECT_EQ(colours, (std::map<int, std::string>{{1, "RED"}, {2, "NONE"}, {3, "NONE"}, {4, "NONE"}, {5, "BLUE"}}));
  const auto r = run_cli({"card-id"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("RED"), std::string::npos);
  EXPECT_EQ(run_cli({"card-id", "--layout", "nope"}).code, cli::kExitConfig);
}

TEST(Cli, CardIdThresholdFiltersEverything) {
  const auto doc = run_json({"card-id", "--threshold", "1.0"});
  EXPECT_EQ(doc["root_cause_visible"], false);
  EXPECT_TRUE(doc["items"].empty());
  EXPECT_EQ(doc["assignment"]["unmatched_detections"].size(), 5u);
  EXPECT_EQ(run_cli({"card-id", "--threshold", "1.01"}).code, cli::kExitConfig);
}

TEST(Cli, SimulateQosMeterComparison) {
  const auto on = run_json({"simulate-qos", "--duration", "0.2", "--meter", "on"});
  const auto off = run_json({"simulate-qos", "--duration", "0.2", "--meter", "off"});
  auto cbr = [](const Json& d) {
    for (const auto& f : d["flows"]) {
      if (f["class"] == "CBR") return f["achieved_gbps"].get<double>();
    }
    return -1.0;
  };
  EXPECT_NEAR(cbr(on), 90.0, 1.8);
  EXPECT_LE(cbr(on), cbr(off));
  EXPECT_EQ(on, run_json({"simulate-qos", "--duration", "0.2", "--meter", "on"}));
  EXPECT_EQ(run_cli({"simulate-qos", "--capacity", "0"}).code, cli::kExitConfig);
}

TEST(Cli, MissingOrBadScenario) {
  unsetenv("TWINOPS_SCENARIO");
  EXPECT_EQ(run_cli({"localize"}, false).code, cli::kExitConfig);
  EXPECT_EQ(run_cli({"--scenario", "/nonexistent.json", "localize"}, false).code, cli::kExitIo);
  setenv("TWINOPS_SCENARIO", ts::reference_scenario_path().c_str(), 1);
  EXPECT_EQ(run_cli({"localize"}, false).code, 0);
  unsetenv("TWINOPS_SCENARIO");
}

TEST(Cli, UsageErrorsAndHelp) {
  EXPECT_EQ(run_cli({}).code, cli::kExitConfig);
  EXPECT_EQ(run_cli({"frobnicate"}).code, cli::kExitConfig);
  EXPECT_EQ(run_cli({"localize", "--bogus"}).code, cli::kExitConfig);
  const auto help = run_cli({"--help"}, false);
  EXPECT_EQ(help.code, 0);
  EXPECT_NE((help.out + help.err).find("simulate-qos"), std::string::npos);
}

TEST(Cli, ServeAndProbe) {
  int pipefd[2];
  ASSERT_EQ(pipe(pipefd), 0);
  const pid_t pid = fork();
  ASSERT_GE(pid, 0);
  if (pid == 0) {
    dup2(pipefd[1], STDOUT_FILENO);
    close(pipefd[0]);
    const std::string scenario = ts::reference_scenario_path().string();
    execl(TWINOPS_CLI_BINARY, "twinops", "--scenario", scenario.c_str(), "serve", "--listen", "127.0.0.1:0",
          "--ws-listen", "127.0.0.1:0", static_cast<char*>(nullptr));
    _exit(127);
  }
  close(pipefd[1]);
  FILE* child_out = fdopen(pipefd[0], "r");
  char line[256] = {};
  ASSERT_NE(fgets(line, sizeof line, child_out), nullptr);
  const std::string text(line);
  ASSERT_EQ(text.rfind("listening on 127.0.0.1:", 0), 0u) << text;
  EXPECT_NE(text.find("websocket on"), std::string::npos);
  const auto port = text.substr(23, text.find_first_of(",\n", 23) - 23);

  const auto probe = run_cli({"probe", "--connect", "127.0.0.1:" + port, "--count", "20"}, false);
  EXPECT_EQ(probe.code, 0) << probe.err;
  EXPECT_NE(probe.out.find("ping: 20 requests, 0 errors"), std::string::npos) << probe.out;
  const auto card = run_cli({"--output", "json", "probe", "--connect", "127.0.0.1:" + port, "--count", "5", "--kind",
                             "card_id_request"},
                            false);
  ASSERT_EQ(card.code, 0) << card.err;
  EXPECT_EQ(Json::parse(card.out)["count"], 5);

  kill(pid, SIGTERM);
  int status = 0;
  waitpid(pid, &status, 0);
  fclose(child_out);
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 0);
}

TEST(Cli, ProbeWithoutServerIsIoError) {
  EXPECT_EQ(run_cli({"probe", "--connect", "127.0.0.1:1", "--count", "1"}, false).code, cli::kExitIo);
}
