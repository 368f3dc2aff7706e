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

#ifndef STSYNTH_ENERGY_HPP
#define STSYNTH_ENERGY_HPP

#include "game.hpp"

namespace stsynth {

enum class EnergyMethod
{
    Lifting,      // plain worklist lifting of small energy progress measures
    Accelerated,  // lifting plus periodic group lifts along tight chains
};

/**
 * Least initial credit for the energy player in the subgame `alive`.
 *
 * The energy player (kP1 or kP2) must keep credit + accumulated weight >= 0 forever.
 * A vertex of the energy player without moves is losing; an opponent vertex without
 * moves needs no credit.
 */
struct EnergySolution
{
    std::vector<Int> credit;      // minimal credit on winning vertices
    Region top;                   // losing for the energy player
    PositionalStrategy strategy;  // energy player's move on winning vertices
    Int bound = 0;                // values above this are losing
    uint64_t events = 0;          // lifts or processed events

    bool wins(uint32_t v) const { return !top[v]; }
};

EnergySolution solve_energy(const Game& g, const std::vector<Int>& weight, const Region& alive, int player = kP1,
                            EnergyMethod method = EnergyMethod::Accelerated);

} // namespace stsynth

#endif
