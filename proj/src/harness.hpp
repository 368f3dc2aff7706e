/*
 * Copyright 2026 The stsynth Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef STSYNTH_HARNESS_HPP
#define STSYNTH_HARNESS_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"
#include "logic.hpp"
#include "synthesis.hpp"

namespace stsynth {

struct TrajectorySample
{
    double t = 0;
    State x;
    uint32_t step = 0;    // index of the signal being applied
    uint32_t signal = 0;
    Input input;          // input of the current segment
};

/// x_0 u_0 x_1 u_1 ... at trigger instants plus the dense trajectory.
struct ClosedLoopRun
{
    std::string config_hash;
    uint64_t seed = 0;
    std::vector<State> states;        // x_0 .. x_K
    std::vector<uint32_t> signals;    // u_0 .. u_{K-1}
    std::vector<uint32_t> memories;   // controller memory when u_k was issued
    std::vector<double> lengths;      // len(u_k)
    std::vector<TrajectorySample> samples;
    size_t bound_violations = 0;
    std::string failure;              // empty when every step was controlled

    bool ok() const { return failure.empty() && bound_violations == 0; }
    void save(std::ostream& os) const;
    static ClosedLoopRun load(std::istream& is);
    /// Columns t,x1..xn,signal_index,segment_input.
    void write_csv(std::ostream& os) const;
};

/// Self-triggered loop: observe, project, issue a signal, sleep for its length under seeded disturbances.
ClosedLoopRun closed_loop_run(const ControlSystem& sys, const SymbolicController& sc, const State& x0, int64_t steps,
                              uint64_t seed, double h);

struct Verdict
{
    bool pass = false;
    std::string detail;
    int64_t grace = 0, burn_in = 0, horizon = 0;
    int64_t max_gap = 0;  // largest recurrence gap (steps) seen by GF subformulas after burn-in
};

/// Finite-horizon reading of the path formula on the dense samples of a run.
Verdict check_bounded(const ClosedLoopRun& run, const PathFormula& phi, const PredicateSet& preds, const SystemSpec& spec,
                      int64_t grace, double burn_in);

struct RunMetrics
{
    double average_length = 0;        // over all signals
    double tail_average_length = 0;   // after burn-in
    double total_time = 0;
    double trigger_rate = 0;          // signals per unit time
    std::vector<double> running_average;
    std::vector<std::pair<std::string, double>> max_gap;  // per predicate, in time units
};

RunMetrics metrics(const ClosedLoopRun& run, const PredicateSet& preds, const SystemSpec& spec, double burn_in);

/// Randomized oracle comparison of every game solver. Returns true if all agree.
bool run_selftest(uint64_t seed, int instances, std::ostream& report);

} // namespace stsynth

#endif
