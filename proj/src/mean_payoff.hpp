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

#ifndef STSYNTH_MEAN_PAYOFF_HPP
#define STSYNTH_MEAN_PAYOFF_HPP

#include "energy.hpp"

namespace stsynth {

/**
 * Values of the mean-payoff game on g.payoff (Player-1 maximizes the limit
 * average, Player-2 minimizes it). Colors are ignored. Every vertex needs a move.
 */
struct MeanPayoffSolution
{
    std::vector<Rational> value;
    PositionalStrategy strategy;  // optimal positional move of the owner
    uint64_t energy_calls = 0;
};

MeanPayoffSolution solve_mean_payoff(const Game& g, EnergyMethod method = EnergyMethod::Accelerated);

/// Vertices from which Player-1 secures mean payoff >= p/q (q > 0).
Region mean_payoff_at_least(const Game& g, int64_t p, int64_t q, EnergyMethod method = EnergyMethod::Accelerated);

} // namespace stsynth

#endif
