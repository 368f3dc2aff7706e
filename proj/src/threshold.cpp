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

#include "threshold.hpp"

#include "parity.hpp"

namespace stsynth {

std::vector<Int> threshold_weights(const Game& g)
{
    const Int n = Int(g.num_vertices());
    const Int a = g.threshold.num, b = g.threshold.den;
    const Int scale = checked_mul(b, n);
    const Int shift = checked_add(checked_mul(a, n), 1);
    std::vector<Int> w(g.num_edges());
    for (size_t e = 0; e < w.size(); ++e) w[e] = checked_add(checked_mul(scale, g.payoff[e]), -shift);
    return w;
}

ThresholdSolution solve_threshold(const Game& g, const ThresholdOptions& opt)
{
    const std::vector<Int> w = threshold_weights(g);
    Region alive = full_region(g);
    if (opt.prune_parity) alive = solve_parity(g).region(kP1);

    EnergyParitySolution ep = solve_energy_parity(g, w, alive, opt.energy);
    ThresholdSolution sol;
    sol.win = std::move(ep.win);
    sol.recursive = std::move(ep.recursive);
    sol.strategy = std::move(ep.strategy);
    sol.energy_calls = ep.energy_calls;
    sol.product_vertices = ep.product_vertices;
    sol.positional = ep.positional;
    sol.complete = ep.complete;
    return sol;
}

} // namespace stsynth
