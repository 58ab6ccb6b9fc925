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

#include <pthread.h>

#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rmtl/compiler.hpp"
#include "rmtl/dsl.hpp"
#include "rmtl/harness.hpp"
#include "rmtl/monitor.hpp"
#include "rmtl/trace_io.hpp"
#include "rmtl/verdicts.hpp"

namespace {

using namespace rmtl;

enum Exit : int { kClean = 0, kViolation = 1, kUsage = 2, kIo = 3 };

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

PolicySpec load_policy(const std::string& path) {
  try {
    return load_policy_file(path);
  } catch (const PolicyError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
}

Trace load_trace(const std::string& path, const PolicySpec& spec) {
  try {
    return load_trace_file(path, &spec);
  } catch (const TraceError& e) {
    throw InputError(path + ": " + e.what());
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
}

// The oracle recurses once per world through recursive definitions, so long
// traces need far more than the default stack.
void with_large_stack(const std::function<void()>& body) {
  pthread_attr_t attr;
  pthread_attr_init(&attr);
  pthread_attr_setstacksize(&attr, std::size_t{1} << 30);
  struct Job {
    const std::function<void()>* body;
    std::exception_ptr error;
  } job{&body, nullptr};
  auto entry = [](void* p) -> void* {
    auto* j = static_cast<Job*>(p);
    try {
      (*j->body)();
    } catch (...) {
      j->error = std::current_exception();
    }
    return nullptr;
  };
  pthread_t thread;
  if (pthread_create(&thread, &attr, entry, &job) != 0) {
    pthread_attr_destroy(&attr);
    body();
    return;
  }
  pthread_join(thread, nullptr);
  pthread_attr_destroy(&attr);
  if (job.error) std::rethrow_exception(job.error);
}

std::string render(const PolicySpec& spec, const Verdict& v, bool json) {
  return json ? format_verdict_json(spec, v) : format_verdict(spec, v);
}

int print_verdicts(const PolicySpec& spec, const std::vector<Verdict>& verdicts, bool json) {
  bool any = false;
  for (const auto& v : verdicts) {
    std::cout << render(spec, v, json);
    any = any || v.any();
  }
  std::cout.flush();
  return any ? kViolation : kClean;
}

int cmd_compile(const std::string& policy, bool dump) {
  const PolicySpec spec = load_policy(policy);
  const CompiledPolicy cp = compile(spec);
  if (dump) std::cout << dump_table(cp);
  return kClean;
}

int cmd_monitor(const std::string& policy, bool json) {
  const PolicySpec spec = load_policy(policy);
  const CompiledPolicy cp = compile(spec);
  Monitor monitor(cp);
  TraceReader reader(std::cin, &spec);
  bool any = false;
  try {
    while (auto world = reader.next()) {
      const Verdict v = monitor.process(*world);
      std::cout << render(spec, v, json) << std::flush;
      any = any || v.any();
    }
  } catch (const TraceError& e) {
    throw InputError(std::string("<stdin>: ") + e.what());
  } catch (const NonMonotoneTimestamp& e) {
    throw InputError("<stdin>: line " + std::to_string(reader.line()) + ": " + e.what());
  }
  return any ? kViolation : kClean;
}

int cmd_check(const std::string& policy, const std::string& trace_path, bool json) {
  const PolicySpec spec = load_policy(policy);
  const Trace trace = load_trace(trace_path, spec);
  const CompiledPolicy cp = compile(spec);
  return print_verdicts(spec, run(cp, trace), json);
}

int cmd_oracle(const std::string& policy, const std::string& trace_path, bool json) {
  const PolicySpec spec = load_policy(policy);
  const Trace trace = load_trace(trace_path, spec);
  std::vector<Verdict> verdicts;
  with_large_stack([&] { verdicts = oracle_verdicts(spec, trace); });
  return print_verdicts(spec, verdicts, json);
}

const std::map<std::string, StepMutation> kMutations = {
    {"none", StepMutation::kNone},
    {"earlier-window-le", StepMutation::kEarlierMWindowLe},
    {"earlier-slack-gt", StepMutation::kEarlierMSlackGt},
    {"since-slack-gt", StepMutation::kSinceMSlackGt},
    {"prev-window-le", StepMutation::kPrevMWindowLe},
};

int cmd_fuzz(std::size_t trials, std::uint64_t seed, const std::string& out,
             const std::string& mutation) {
  DiffOptions options;
  options.mutation = kMutations.at(mutation);
  DiffReport report;
  with_large_stack([&] { report = differential(fuzz_config(seed), trials, options); });
  std::cout << report.summary() << '\n';
  if (!report.counterexample) return kClean;
  try {
    write_counterexample(*report.counterexample, out);
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
  std::cout << "repro: " << (std::filesystem::path(out) / "repro.rmtl").string() << ' '
            << (std::filesystem::path(out) / "repro.jsonl").string() << ' '
            << (std::filesystem::path(out) / "report.txt").string() << '\n';
  return kViolation;
}

int cmd_bench(const std::string& policy, std::size_t apps, Timestamp window,
              const std::vector<std::size_t>& lengths, std::uint64_t seed, std::size_t warmup) {
  const PolicySpec spec = policy.empty() ? escalation_spec(apps, window) : load_policy(policy);
  const CompiledPolicy cp = compile(spec);
  BenchOptions options;
  options.seed = seed;
  options.warmup = warmup;
  std::cout << "policy length median_ns p95_ns state_cells\n";
  for (const auto& r : bench(cp, lengths, options)) {
    std::printf("%s %zu %.1f %.1f %zu\n", r.policy_name.c_str(), r.trace_length, r.median_ns,
                r.p95_ns, r.peak_state_cells);
  }
  std::fflush(stdout);
  return kClean;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Policy monitor for past-time metric temporal logic with recursive definitions"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::string policy, trace_path, out = "rmtl-counterexample", mutation = "none";
  bool dump = false, json = false;
  std::size_t trials = 1000, apps = 5, warmup = 1000;
  std::uint64_t seed = 1;
  Timestamp window = 10000;
  std::vector<std::size_t> lengths = {1000, 1000000};

  auto* compile_cmd = app.add_subcommand("compile", "Validate and compile a policy");
  compile_cmd->add_option("policy", policy, "Policy file (.rmtl)")->required();
  compile_cmd->add_flag("--dump-table", dump, "Print the subformula table");

  auto* monitor_cmd = app.add_subcommand("monitor", "Monitor JSONL events from stdin");
  monitor_cmd->add_option("policy", policy, "Policy file (.rmtl)")->required();
  monitor_cmd->add_flag("--json", json, "Emit verdicts as JSON lines");

  auto* check_cmd = app.add_subcommand("check", "Run the incremental monitor over a trace file");
  auto* oracle_cmd = app.add_subcommand("oracle", "Evaluate a trace file by brute force");
  for (auto* sub : {check_cmd, oracle_cmd}) {
    sub->add_option("policy", policy, "Policy file (.rmtl)")->required();
    sub->add_option("trace", trace_path, "Trace file (.jsonl)")->required();
    sub->add_flag("--json", json, "Emit verdicts as JSON lines");
  }

  auto* fuzz_cmd = app.add_subcommand("fuzz", "Differential test of monitor against oracle");
  fuzz_cmd->add_option("--trials", trials, "Number of random trials")->capture_default_str();
  fuzz_cmd->add_option("--seed", seed, "Base seed")->capture_default_str();
  fuzz_cmd->add_option("--out", out, "Directory for counterexample files")->capture_default_str();
  std::vector<std::string> mutation_names;
  for (const auto& [name, m] : kMutations) mutation_names.push_back(name);
  fuzz_cmd->add_option("--mutation", mutation, "Deliberately broken step rule to test against")
      ->check(CLI::IsMember(mutation_names))
      ->capture_default_str();

  auto* bench_cmd = app.add_subcommand("bench", "Per-event monitor cost across trace lengths");
  auto* policy_opt = bench_cmd->add_option("--policy", policy, "Policy file (.rmtl)");
  bench_cmd->add_option("--apps", apps, "Domain size of the built-in escalation policy")
      ->excludes(policy_opt)
      ->check(CLI::Range(std::size_t{1}, std::size_t{64}))
      ->capture_default_str();
  bench_cmd->add_option("--window", window, "Window of the built-in escalation policy")
      ->excludes(policy_opt)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench_cmd->add_option("--lengths", lengths, "Trace lengths")->capture_default_str();
  bench_cmd->add_option("--seed", seed, "Seed for synthetic events")->capture_default_str();
  bench_cmd->add_option("--warmup", warmup, "Untimed events before each run")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*compile_cmd) return cmd_compile(policy, dump);
    if (*monitor_cmd) return cmd_monitor(policy, json);
    if (*check_cmd) return cmd_check(policy, trace_path, json);
    if (*oracle_cmd) return cmd_oracle(policy, trace_path, json);
    if (*fuzz_cmd) return cmd_fuzz(trials, seed, out, mutation);
    if (*bench_cmd) return cmd_bench(policy, apps, window, lengths, seed, warmup);
  } catch (const PolicyError& e) {
    std::cout.flush();
    std::cerr << e.what() << '\n';
    return kUsage;
  } catch (const InputError& e) {
    std::cout.flush();
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  }
  return kUsage;
}
