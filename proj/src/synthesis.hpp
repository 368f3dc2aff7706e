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

#ifndef STSYNTH_SYNTHESIS_HPP
#define STSYNTH_SYNTHESIS_HPP

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "threshold.hpp"
#include "translate.hpp"

namespace stsynth {

/**
 * Finite-memory controller over grid cells. Memory ids stand for pairs
 * (annotation copy, tracked energy); the energy part is dropped when the game
 * strategy is memoryless.
 */
struct SymbolicController
{
    std::string config_hash;
    std::string formula;
    std::vector<Axis> state_box;
    std::vector<double> eta;
    StateGrid grid;
    SignalTable signals;
    std::vector<std::pair<uint32_t, Int>> memory_meaning;       // id -> (copy, tracked energy)
    std::map<uint32_t, uint32_t> initial;                       // initial cell -> memory
    std::map<std::pair<uint32_t, uint32_t>, uint32_t> output;   // (memory, cell) -> signal
    /// (memory, cell) -> sorted (successor cell, next memory)
    std::map<std::pair<uint32_t, uint32_t>, std::vector<std::pair<uint32_t, uint32_t>>> update;

    size_t memory_count() const { return memory_meaning.size(); }

    uint32_t initial_memory(uint32_t cell) const;
    uint32_t signal(uint32_t memory, uint32_t cell) const;
    /// Next memory after observing `next`; throws UncontrollableState if not a listed successor.
    uint32_t next_memory(uint32_t memory, uint32_t cell, uint32_t signal, uint32_t next) const;
    const std::vector<std::pair<uint32_t, uint32_t>>& successors(uint32_t memory, uint32_t cell) const;

    void save(std::ostream& os) const;
    static SymbolicController load(std::istream& is);
};

/// Copies the strategy's signal choices through the back-maps, starting from every initial cell.
SymbolicController extract_controller(const SymbolicModel& model, const ParityAnnotation& ann, const Translation& tr,
                                      const ThresholdSolution& sol);

/// Continuous-state wrapper: observed states are projected onto the grid before each lookup.
class LiftedController
{
public:
    explicit LiftedController(const SymbolicController& sc) : sc_(sc) {}

    /// Signal for the initial state x; resets the memory.
    uint32_t start(std::span<const double> x);
    /// Signal after the current one ended in x.
    uint32_t step(std::span<const double> x);

    uint32_t memory() const { return memory_; }
    uint32_t cell() const { return cell_; }
    uint32_t current_signal() const { return signal_; }
    const SymbolicController& symbolic() const { return sc_; }

private:
    uint32_t project(std::span<const double> x) const;

    const SymbolicController& sc_;
    uint32_t memory_ = 0, cell_ = 0, signal_ = 0;
};

struct IterationReport
{
    int index = 0;
    std::vector<double> eta, mu;
    double tau = 0;
    size_t states = 0, signals = 0, transitions = 0;
    size_t v1 = 0, v2 = 0, edges = 0, copies = 0;
    size_t initial_cells = 0, initial_winning = 0;
    size_t winning_vertices = 0;
    size_t blocked_cells = 0;    // cells where every signal may leave the state box
    int64_t parity_winning = -1; // winning vertices of the parity objective alone; filled on failure
    double abstraction_seconds = 0, solve_seconds = 0;
    bool positional = false, complete = true;
    size_t product_vertices = 0;
    std::string threshold;  // in payoff units
    std::string next;       // parameter halved afterwards, or the stop reason
    std::vector<std::string> warnings;
};

std::string format_iteration(const IterationReport& r);

struct SynthesisResult
{
    bool realized = false;
    std::vector<IterationReport> iterations;
    std::optional<SymbolicController> controller;
    std::string stop_reason;

    std::string report() const;
};

struct SynthesisOptions
{
    std::function<void(const IterationReport&)> progress;
};

/// Build, compile, translate, solve; halve eta, mu, tau round-robin until success or the floors.
SynthesisResult synthesize(const Config& cfg, const SynthesisOptions& opt = {});

} // namespace stsynth

#endif
