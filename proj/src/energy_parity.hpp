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

#ifndef STSYNTH_ENERGY_PARITY_HPP
#define STSYNTH_ENERGY_PARITY_HPP

#include <iosfwd>
#include <utility>

#include "energy.hpp"

namespace stsynth {

/**
 * Finite-memory Player-1 strategy whose memory is the tracked energy level,
 * capped at `cap`. A play starts with memory credit[v]; after edge e the
 * memory becomes min(cap, memory + weight[e]). Capping only loses energy, so
 * the true level never falls below the tracked one.
 */
struct EnergyStrategy
{
    Int cap = 0;
    std::vector<Int> weight;  // per edge
    std::vector<Int> credit;  // per vertex; -1 where no strategy is known
    /// Per Player-1 vertex: (lowest energy, edge) runs sorted by energy.
    std::vector<std::vector<std::pair<Int, uint32_t>>> moves;

    bool covers(uint32_t v) const { return credit[v] >= 0; }
    Int initial(uint32_t v) const { return credit[v]; }
    /// Edge to take at v with tracked energy e, or -1.
    int64_t move(uint32_t v, Int energy) const;
    /// Memory after taking e; negative means the energy budget was violated.
    Int update(Int energy, uint32_t e) const;
    size_t memory_states() const { return size_t(cap) + 1; }

    void save(std::ostream& os) const;
    static EnergyStrategy load(std::istream& is);
};

struct EnergyParityOptions
{
    EnergyMethod method = EnergyMethod::Accelerated;
    bool strategy = true;
    bool positional = true;          // try memoryless candidates before the product
    size_t product_limit = 4000000;  // vertices of the capped-energy product
};

struct EnergyParitySolution
{
    Region win;        // vertices covered by the extracted strategy (all of `recursive` when complete)
    Region recursive;  // winning set of the recursive algorithm
    EnergyStrategy strategy;

    uint64_t energy_calls = 0;
    size_t product_vertices = 0;
    bool positional = false;
    bool complete = true;  // strategy covers the whole winning set
};

/**
 * Energy parity game on the subgame `alive`: Player-1 must keep the energy
 * (initial credit plus accumulated weight) non-negative and make the largest
 * color seen infinitely often even. Dead ends lose for their owner.
 */
EnergyParitySolution solve_energy_parity(const Game& g, const std::vector<Int>& weight, const Region& alive,
                                         const EnergyParityOptions& opt = {});

/// Winning set only.
Region energy_parity_region(const Game& g, const std::vector<Int>& weight, const Region& alive,
                            EnergyMethod method = EnergyMethod::Accelerated);

} // namespace stsynth

#endif
