// Copyright 2026 The RMTL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rmtl/scenario.hpp"

namespace rmtl {
namespace {

struct Result {
  int exit = -1;
  std::string out;
  std::string err;
};

std::string temp_file(const std::string& name, const std::string& contents) {
  const auto path = std::filesystem::temp_directory_path() / ("rmtl-cli-" + name);
  std::ofstream(path) << contents;
  return path.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Result cli(const std::string& args, const std::string& stdin_text = "") {
  const std::string in = temp_file("stdin", stdin_text);
  const std::string err = (std::filesystem::temp_directory_path() / "rmtl-cli-stderr").string();
  const std::string cmd = std::string(RMTL_CLI) + " " + args + " <" + in + " 2>" + err;
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, pipe)) > 0;) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.exit = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err);
  return r;
}

std::string scenario(const std::string& name, const std::string& file) {
  return std::string(RMTL_SCENARIOS) + "/" + name + "/" + file;
}

std::string policy_and_trace(const std::string& name) {
  return scenario(name, "policy.rmtl") + " " + scenario(name, "trace.jsonl");
}

TEST(Cli, CompileValidPolicy) {
  EXPECT_EQ(cli("compile " + scenario("policy2-chain", "policy.rmtl")).exit, 0);
}

TEST(Cli, CompileUnguardedDefinition) {
  const std::string path = temp_file("bad.rmtl",
                                     "sort app\nconst a : app\nevent call(app, app)\n"
                                     "def P(x:app) := call(x,x) or P(x)\n");
  const Result r = cli("compile " + path);
  EXPECT_EQ(r.exit, 2);
  EXPECT_NE(r.err.find("UnguardedRecursion"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find(":4:"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("'P'"), std::string::npos) << r.err;
}

TEST(Cli, DumpTableIsStable) {
  const std::string args = "compile --dump-table " + scenario("policy2-chain", "policy.rmtl");
  const Result a = cli(args);
  EXPECT_EQ(a.exit, 0);
  EXPECT_FALSE(a.out.empty());
  EXPECT_EQ(cli(args).out, a.out);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli("").exit, 2);
  EXPECT_EQ(cli("frobnicate").exit, 2);
  EXPECT_EQ(cli("check " + scenario("policy1-direct-call", "policy.rmtl")).exit, 2);
  EXPECT_EQ(cli("fuzz --trials many").exit, 2);
  EXPECT_EQ(cli("--help").exit, 0);
}

TEST(Cli, MissingFilesAreIoErrors) {
  EXPECT_EQ(cli("compile /nonexistent/policy.rmtl").exit, 3);
  EXPECT_EQ(cli("check " + scenario("policy1-direct-call", "policy.rmtl") + " /nonexistent.jsonl").exit, 3);
}

TEST(Cli, MonitorFlagsDirectCall) {
  const Result r = cli("monitor " + scenario("policy1-direct-call", "policy.rmtl"),
                       slurp(scenario("policy1-direct-call", "trace.jsonl")));
  EXPECT_EQ(r.exit, 1);
  EXPECT_NE(r.out.find("4 300 policy1 VIOLATION\n"), std::string::npos) << r.out;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 5);
}

TEST(Cli, MonitorEmptyInput) {
  const Result r = cli("monitor " + scenario("policy1-direct-call", "policy.rmtl"));
  EXPECT_EQ(r.exit, 0);
  EXPECT_EQ(r.out, "");
}

TEST(Cli, MonitorRejectsNonMonotoneInput) {
  const Result r = cli("monitor " + scenario("policy1-direct-call", "policy.rmtl"),
                       "{\"ts\":5,\"events\":[]}\n{\"ts\":3,\"events\":[]}\n");
  EXPECT_EQ(r.exit, 3);
  EXPECT_EQ(r.out, "1 5 policy1 ok\n");
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
}

TEST(Cli, MonitorRejectsMalformedInput) {
  const Result r = cli("monitor " + scenario("policy1-direct-call", "policy.rmtl"), "{oops\n");
  EXPECT_EQ(r.exit, 3);
  EXPECT_NE(r.err.find("line 1"), std::string::npos) << r.err;
}

TEST(Cli, JsonVerdicts) {
  const Result r = cli("check --json " + policy_and_trace("policy2-chain"));
  EXPECT_EQ(r.exit, 1);
  EXPECT_NE(r.out.find(R"({"world":2,"ts":5000,"policy":"policy2","violation":true})"),
            std::string::npos)
      << r.out;
}

TEST(Cli, CheckEqualsOracleAndRegeneratesExpected) {
  for (const auto& name : list_scenarios(RMTL_SCENARIOS)) {
    const Result check = cli("check " + policy_and_trace(name));
    const Result oracle = cli("oracle " + policy_and_trace(name));
    const std::string expected = slurp(scenario(name, "expected.txt"));
    EXPECT_EQ(check.out, oracle.out) << name;
    EXPECT_EQ(oracle.out, expected) << name;
    EXPECT_EQ(check.exit, oracle.exit) << name;
    const auto worlds = std::count(expected.begin(), expected.end(), '\n');
    const std::string trace = slurp(scenario(name, "trace.jsonl"));
    EXPECT_EQ(worlds, std::count(trace.begin(), trace.end(), '\n')) << name;
  }
}

TEST(Cli, FuzzIsDeterministic) {
  const Result a = cli("fuzz --trials 300 --seed 42");
  EXPECT_EQ(a.exit, 0) << a.out;
  EXPECT_NE(a.out.find("mismatches=0"), std::string::npos);
  EXPECT_EQ(cli("fuzz --trials 300 --seed 42").out, a.out);
}

TEST(Cli, FuzzReportsMutantWithRepro) {
  const auto dir = std::filesystem::temp_directory_path() / "rmtl-cli-cex";
  std::filesystem::remove_all(dir);
  const Result r = cli("fuzz --trials 2000 --seed 42 --mutation since-slack-gt --out " + dir.string());
  EXPECT_EQ(r.exit, 1);
  EXPECT_NE(r.out.find("repro.rmtl"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(dir / "repro.rmtl"));
  EXPECT_TRUE(std::filesystem::exists(dir / "repro.jsonl"));
  EXPECT_TRUE(std::filesystem::exists(dir / "report.txt"));
  // The repro shows the broken rule against the real monitor: check and oracle agree.
  const std::string files = (dir / "repro.rmtl").string() + " " + (dir / "repro.jsonl").string();
  EXPECT_EQ(cli("check " + files).out, cli("oracle " + files).out);
  std::filesystem::remove_all(dir);
}

TEST(Cli, BenchPrintsOneRowPerLength) {
  const Result r = cli("bench --apps 3 --lengths 200 2000 --warmup 10");
  EXPECT_EQ(r.exit, 0);
  std::istringstream in(r.out);
  std::string header, policy;
  std::getline(in, header);
  std::size_t length = 0, cells[2] = {0, 0};
  double median = 0, p95 = 0;
  for (int row = 0; row < 2; ++row) {
    in >> policy >> length >> median >> p95 >> cells[row];
    EXPECT_EQ(policy, "policy2");
  }
  EXPECT_EQ(length, 2000u);
  EXPECT_EQ(cells[0], cells[1]);
  EXPECT_GT(cells[0], 0u);
}

// Feeds one line, waits for its verdict while stdin stays open, then feeds
// the next.
TEST(Cli, MonitorStreamsBeforeInputCloses) {
  int to_child[2], from_child[2];
  ASSERT_EQ(pipe(to_child), 0);
  ASSERT_EQ(pipe(from_child), 0);
  const pid_t pid = fork();
  ASSERT_GE(pid, 0);
  const std::string policy = scenario("policy1-direct-call", "policy.rmtl");
  if (pid == 0) {
    dup2(to_child[0], 0);
    dup2(from_child[1], 1);
    close(to_child[1]);
    close(from_child[0]);
    execl(RMTL_CLI, RMTL_CLI, "monitor", policy.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(to_child[0]);
  close(from_child[1]);
  auto read_line = [&]() {
    std::string line;
    char c;
    pollfd pfd{from_child[0], POLLIN, 0};
    while (poll(&pfd, 1, 10000) > 0 && read(from_child[0], &c, 1) == 1) {
      if (c == '\n') return line;
      line += c;
    }
    return std::string("<timeout>");
  };
  const std::string first = "{\"ts\":0,\"events\":[{\"pred\":\"call\",\"args\":[\"a\",\"sink\"]}]}\n";
  ASSERT_EQ(write(to_child[1], first.data(), first.size()), static_cast<ssize_t>(first.size()));
  EXPECT_EQ(read_line(), "1 0 policy1 VIOLATION");
  const std::string second = "{\"ts\":10,\"events\":[]}\n";
  ASSERT_EQ(write(to_child[1], second.data(), second.size()), static_cast<ssize_t>(second.size()));
  EXPECT_EQ(read_line(), "2 10 policy1 ok");
  close(to_child[1]);
  int status = 0;
  waitpid(pid, &status, 0);
  close(from_child[0]);
  EXPECT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 1);
}

}  // namespace
}  // namespace rmtl
