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

#ifndef STSYNTH_ORACLE_HPP
#define STSYNTH_ORACLE_HPP

#include "game.hpp"

namespace stsynth {

/**
 * Exponential reference solvers for small games (test oracles).
 *
 * Each one fixes a positional strategy of the player known to need no memory
 * and analyses the remaining one-player graph through its strongly connected
 * parts. Throws InvariantError if the enumeration would exceed `limit` strategies.
 */

/// Player-1 winning set of the parity game (Player-1 positional strategies enumerated).
Region oracle_parity(const Game& g, uint64_t limit = 1u << 22);

/// Exact mean-payoff values (Player-1 positional strategies enumerated, Karp per part).
std::vector<Rational> oracle_mean_payoff(const Game& g, uint64_t limit = 1u << 22);

/// Strict threshold winning set (mean payoff > g.threshold and even parity);
/// Player-2 is positional in these games, Player-1 may use unbounded memory.
Region brute_force_oracle(const Game& g, uint64_t limit = 1u << 22);

/// Energy parity winning set for some finite initial credit.
Region oracle_energy_parity(const Game& g, const std::vector<Int>& weight, uint64_t limit = 1u << 22);

/// Minimum cycle mean of an edge-list graph (Karp); cyclic is false when there is no cycle.
struct CycleMean
{
    bool cyclic = false;
    Rational mean;
};
CycleMean min_cycle_mean(size_t n, const std::vector<uint32_t>& src, const std::vector<uint32_t>& dst,
                         const std::vector<int64_t>& weight);

} // namespace stsynth

#endif
