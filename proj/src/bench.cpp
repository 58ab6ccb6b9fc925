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

#include <algorithm>
#include <chrono>
#include <random>

#include "rmtl/harness.hpp"

namespace rmtl {
namespace {

double percentile(std::vector<double> xs, double q) {
  if (xs.empty()) return 0;
  const auto k = static_cast<std::size_t>(q * static_cast<double>(xs.size() - 1));
  std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(k), xs.end());
  return xs[k];
}

}  // namespace

std::vector<BenchReport> bench(const CompiledPolicy& cp, std::span<const std::size_t> lengths,
                               const BenchOptions& options) {
  using Clock = std::chrono::steady_clock;
  const std::vector<GroundAtom> universe = ground_event_atoms(*cp.spec);
  const std::size_t batch = std::max<std::size_t>(1, options.batch);

  std::vector<BenchReport> out;
  for (const std::size_t length : lengths) {
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<Timestamp> gap(0, std::max<Timestamp>(0, options.max_ts_gap));
    // Pre-built worlds so the timed loop only rewrites timestamps.
    std::vector<TimedState> pool(4096);
    for (auto& w : pool) {
      if (!universe.empty()) {
        w.atoms = {universe[std::uniform_int_distribution<std::size_t>(0, universe.size() - 1)(rng)]};
      }
    }
    std::vector<Timestamp> gaps(pool.size());
    for (auto& g : gaps) g = gap(rng);

    Monitor monitor(cp);
    Timestamp ts = 0;
    std::size_t cursor = 0;
    std::size_t violations = 0;
    auto feed = [&] {
      TimedState& w = pool[cursor % pool.size()];
      ts += gaps[cursor % gaps.size()];
      w.ts = ts;
      ++cursor;
      violations += monitor.process(w).any() ? 1 : 0;
    };

    std::size_t peak = 0;
    for (std::size_t k = 0; k < options.warmup; ++k) feed();
    peak = std::max(peak, monitor.state().cells());

    std::vector<double> samples;
    samples.reserve(length / batch + 1);
    for (std::size_t done = 0; done < length;) {
      const std::size_t n = std::min(batch, length - done);
      const auto start = Clock::now();
      for (std::size_t k = 0; k < n; ++k) feed();
      const auto stop = Clock::now();
      samples.push_back(std::chrono::duration<double, std::nano>(stop - start).count() /
                        static_cast<double>(n));
      peak = std::max(peak, monitor.state().cells());
      done += n;
    }

    BenchReport r;
    r.policy_name = cp.roots.empty() ? "" : cp.roots.front().name;
    r.trace_length = length;
    r.median_ns = percentile(samples, 0.5);
    r.p95_ns = percentile(samples, 0.95);
    r.peak_state_cells = peak;
    // Keeps the verdicts observable so the loop is not optimized away.
    if (violations > cursor) r.p95_ns = -1;
    out.push_back(r);
  }
  return out;
}

}  // namespace rmtl
