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

#include "parity.hpp"

#include <algorithm>

namespace stsynth {

namespace {

struct Zielonka
{
    const Game& g;
    PositionalStrategy& strategy;

    // Fills win[0], win[1] (subsets of alive); alive has no dead ends.
    void solve(const Region& alive, Region win[2])
    {
        const size_t n = g.num_vertices();
        win[0].assign(n, 0);
        win[1].assign(n, 0);
        int d = -1;
        for (uint32_t v = 0; v < n; ++v)
            if (alive[v]) d = std::max(d, g.color[v]);
        if (d < 0) return;
        const int p = d % 2;

        Region target(n, 0);
        for (uint32_t v = 0; v < n; ++v) target[v] = alive[v] && g.color[v] == d;
        Region A = attractor(g, alive, target, p, &strategy);
        Region sub(n, 0);
        for (uint32_t v = 0; v < n; ++v) sub[v] = alive[v] && !A[v];
        Region sw[2];
        solve(sub, sw);

        if (region_size(sw[1 - p]) == 0) {
            win[p] = alive;
            for (uint32_t v = 0; v < n; ++v) {
                if (!target[v] || g.owner[v] != p) continue;
                for (uint32_t e : g.out(v)) {
                    if (alive[g.edge_dst[e]]) {
                        strategy[v] = e;
                        break;
                    }
                }
            }
            return;
        }
        Region B = attractor(g, alive, sw[1 - p], 1 - p, &strategy);
        Region rest(n, 0);
        for (uint32_t v = 0; v < n; ++v) rest[v] = alive[v] && !B[v];
        Region rw[2];
        solve(rest, rw);
        win[p] = std::move(rw[p]);
        win[1 - p] = std::move(rw[1 - p]);
        for (uint32_t v = 0; v < n; ++v)
            if (B[v]) win[1 - p][v] = 1;
    }
};

} // namespace

Region ParitySolution::region(int player) const
{
    Region r(winner.size(), 0);
    for (size_t v = 0; v < winner.size(); ++v) r[v] = winner[v] == player;
    return r;
}

ParitySolution solve_parity(const Game& g) { return solve_parity(g, full_region(g)); }

ParitySolution solve_parity(const Game& g, const Region& alive)
{
    const size_t n = g.num_vertices();
    ParitySolution sol;
    sol.winner.assign(n, 255);
    sol.strategy.assign(n, -1);
    DeadEndSplit split = split_dead_ends(g, alive, &sol.strategy);
    Region win[2];
    Zielonka z{g, sol.strategy};
    z.solve(split.rest, win);
    for (uint32_t v = 0; v < n; ++v) {
        if (!alive[v]) continue;
        if (split.win[kP1][v] || win[kP1][v]) sol.winner[v] = kP1;
        else sol.winner[v] = kP2;
    }
    for (uint32_t v = 0; v < n; ++v)
        if (sol.winner[v] != g.owner[v]) sol.strategy[v] = -1;
    return sol;
}

} // namespace stsynth
