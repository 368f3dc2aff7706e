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

#ifndef STSYNTH_PARITY_HPP
#define STSYNTH_PARITY_HPP

#include "game.hpp"

namespace stsynth {

/// Exact solution of the max-parity game (Player-1 wins iff the largest color seen infinitely often is even).
struct ParitySolution
{
    std::vector<uint8_t> winner;  // kP1 / kP2; 255 outside the solved subgame
    PositionalStrategy strategy;  // winning move for vertices owned by their winner

    Region region(int player) const;
};

ParitySolution solve_parity(const Game& g);
/// Solves the subgame induced by alive; alive must be closed under the game (no escapes needed for correctness of dead-end handling).
ParitySolution solve_parity(const Game& g, const Region& alive);

} // namespace stsynth

#endif
