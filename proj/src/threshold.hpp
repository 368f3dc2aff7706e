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

#ifndef STSYNTH_THRESHOLD_HPP
#define STSYNTH_THRESHOLD_HPP

#include "energy_parity.hpp"

namespace stsynth {

struct ThresholdOptions
{
    EnergyParityOptions energy;
    bool prune_parity = true;  // restrict to the parity winning region first
};

struct ThresholdSolution
{
    Region win;        // sound: every vertex here has a strategy
    Region recursive;  // energy parity winning set before strategy extraction
    EnergyStrategy strategy;
    uint64_t energy_calls = 0;
    size_t product_vertices = 0;
    bool positional = false;
    bool complete = true;
};

/// w(e) = b*n*payoff(e) - (a*n + 1) for threshold a/b and n vertices; exact or OverflowError.
std::vector<Int> threshold_weights(const Game& g);

/**
 * Strict threshold problem: Player-1 wins if the top color seen infinitely
 * often is even and the mean payoff exceeds g.threshold. Decided through the
 * energy parity game on threshold_weights, which is sound and possibly incomplete.
 */
ThresholdSolution solve_threshold(const Game& g, const ThresholdOptions& opt = {});

} // namespace stsynth

#endif
