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

#include "energy.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "error.hpp"

namespace stsynth {

namespace {

constexpr Int kTop = std::numeric_limits<Int>::max();
constexpr Int kInf = std::numeric_limits<Int>::max();
constexpr Int kNegInf = std::numeric_limits<Int>::min();
const Int kLimit = Int(1) << 120;

Int credit_bound(const Game& g, const std::vector<Int>& w, const Region& alive)
{
    Int bound = 0;
    for (uint32_t v = 0; v < g.num_vertices(); ++v) {
        if (!alive[v]) continue;
        Int worst = 0;
        for (uint32_t e : g.out(v)) {
            if (!alive[g.edge_dst[e]]) continue;
            if (w[e] > kLimit || w[e] < -kLimit) throw OverflowError("energy weight too large", 128);
            worst = std::max(worst, -w[e]);
        }
        bound = checked_add(bound, worst);
    }
    if (bound > kLimit) throw OverflowError("energy credit bound too large", 128);
    return bound;
}

// F(h)(v) for the lifting operator; kTop if above the bound.
Int lift_value(const Game& g, const std::vector<Int>& w, const Region& alive, const std::vector<Int>& h,
               uint32_t v, bool mine, Int bound)
{
    bool any = false;
    Int best = mine ? kTop : 0;
    for (uint32_t e : g.out(v)) {
        const uint32_t t = g.edge_dst[e];
        if (!alive[t]) continue;
        any = true;
        const Int val = h[t] == kTop ? kTop : std::max<Int>(0, h[t] - w[e]);
        best = mine ? std::min(best, val) : std::max(best, val);
    }
    if (!any) return mine ? kTop : 0;
    return best > bound ? kTop : best;
}

void lifting(const Game& g, const std::vector<Int>& w, const Region& alive, int player, EnergySolution& sol)
{
    const size_t n = g.num_vertices();
    std::vector<Int>& h = sol.credit;
    std::deque<uint32_t> queue;
    std::vector<char> queued(n, 0);
    for (uint32_t v = 0; v < n; ++v)
        if (alive[v]) {
            queue.push_back(v);
            queued[v] = 1;
        }
    while (!queue.empty()) {
        const uint32_t v = queue.front();
        queue.pop_front();
        queued[v] = 0;
        if (h[v] == kTop) continue;
        const Int nv = lift_value(g, w, alive, h, v, g.owner[v] == player, sol.bound);
        if (nv <= h[v]) continue;
        h[v] = nv;
        ++sol.events;
        for (uint32_t e : g.in(v)) {
            const uint32_t p = g.edge_src[e];
            if (alive[p] && !queued[p] && h[p] != kTop) {
                queued[p] = 1;
                queue.push_back(p);
            }
        }
    }
}

// Group lift. S = strictly inconsistent vertices; U = vertices tied to S by
// chains of tight edges (any one for the opponent, all of them for the energy
// player). Each weakly connected part of U rises by the largest common amount
// that keeps S strict and the rest of U no worse than tight; a part with no
// limit goes to top. Returns false if nothing was inconsistent.
bool group_lift(const Game& g, const std::vector<Int>& w, const Region& alive, int player, EnergySolution& sol)
{
    const size_t n = g.num_vertices();
    std::vector<Int>& h = sol.credit;
    auto gap = [&](uint32_t e, uint32_t v) -> Int {
        const uint32_t t = g.edge_dst[e];
        return h[t] == kTop ? kInf : h[t] - w[e] - h[v];
    };
    auto usable = [&](uint32_t v) { return alive[v] && h[v] != kTop; };

    Region in_u(n, 0), strict(n, 0);
    std::vector<uint32_t> zero_left(n, 0), order;
    std::vector<char> negative(n, 0);
    for (uint32_t v = 0; v < n; ++v) {
        if (!usable(v)) continue;
        const bool mine = g.owner[v] == player;
        bool any = false, all_pos = true, some_pos = false;
        for (uint32_t e : g.out(v)) {
            if (!alive[g.edge_dst[e]]) continue;
            any = true;
            const Int gp = gap(e, v);
            if (gp > 0) some_pos = true;
            else all_pos = false;
            if (gp == 0) ++zero_left[v];
            if (gp < 0) negative[v] = 1;
        }
        if (!any) continue;
        if (mine ? all_pos : some_pos) {
            strict[v] = in_u[v] = 1;
            order.push_back(v);
        }
    }
    if (order.empty()) return false;

    for (size_t i = 0; i < order.size(); ++i) {
        const uint32_t t = order[i];
        for (uint32_t e : g.in(t)) {
            const uint32_t v = g.edge_src[e];
            if (!usable(v) || in_u[v]) continue;
            const Int gp = gap(e, v);
            if (gp != 0) continue;
            bool join;
            if (g.owner[v] == player) join = --zero_left[v] == 0 && !negative[v];
            else join = true;
            if (join) {
                in_u[v] = 1;
                order.push_back(v);
            }
        }
    }

    // weakly connected parts of U
    std::vector<uint32_t> parent(n);
    for (uint32_t v = 0; v < n; ++v) parent[v] = v;
    auto find = [&](uint32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (uint32_t v : order)
        for (uint32_t e : g.out(v)) {
            const uint32_t t = g.edge_dst[e];
            if (alive[t] && in_u[t]) parent[find(v)] = find(t);
        }

    std::vector<Int> delta(n, kInf);
    for (uint32_t v : order) {
        const bool mine = g.owner[v] == player;
        Int thr = mine ? kInf : kNegInf;
        for (uint32_t e : g.out(v)) {
            const uint32_t t = g.edge_dst[e];
            if (!alive[t]) continue;
            const Int gp = gap(e, v);
            Int lim;
            if (in_u[t]) {
                if (mine) continue;
                lim = (gp > 0 || (gp == 0 && !strict[v])) ? kInf : kNegInf;
            } else {
                lim = gp;
            }
            thr = mine ? std::min(thr, lim) : std::max(thr, lim);
        }
        if (thr <= 0) throw InvariantError("group lift without progress");
        const uint32_t r = find(v);
        delta[r] = std::min(delta[r], thr);
    }
    for (uint32_t v : order) {
        const Int d = delta[find(v)];
        if (d == kInf || h[v] + d > sol.bound) h[v] = kTop;
        else h[v] += d;
        ++sol.events;
    }
    return true;
}

void accelerated(const Game& g, const std::vector<Int>& w, const Region& alive, int player, EnergySolution& sol)
{
    const size_t n = g.num_vertices();
    std::vector<Int>& h = sol.credit;
    const uint64_t budget = uint64_t(n) + g.num_edges() + 16;
    std::deque<uint32_t> queue;
    std::vector<char> queued(n, 0);
    auto push_all = [&] {
        for (uint32_t v = 0; v < n; ++v)
            if (alive[v] && h[v] != kTop && !queued[v]) {
                queued[v] = 1;
                queue.push_back(v);
            }
    };
    push_all();
    uint64_t since = 0;
    while (!queue.empty()) {
        const uint32_t v = queue.front();
        queue.pop_front();
        queued[v] = 0;
        if (h[v] == kTop) continue;
        const Int nv = lift_value(g, w, alive, h, v, g.owner[v] == player, sol.bound);
        if (nv <= h[v]) continue;
        h[v] = nv;
        ++sol.events;
        for (uint32_t e : g.in(v)) {
            const uint32_t p = g.edge_src[e];
            if (alive[p] && !queued[p] && h[p] != kTop) {
                queued[p] = 1;
                queue.push_back(p);
            }
        }
        if (++since >= budget) {
            since = 0;
            if (group_lift(g, w, alive, player, sol)) push_all();
        }
    }
}

} // namespace

EnergySolution solve_energy(const Game& g, const std::vector<Int>& weight, const Region& alive, int player,
                            EnergyMethod method)
{
    const size_t n = g.num_vertices();
    if (weight.size() != g.num_edges()) throw InvariantError("weight vector size mismatch");
    EnergySolution sol;
    sol.credit.assign(n, 0);
    sol.top.assign(n, 0);
    sol.strategy.assign(n, -1);
    sol.bound = credit_bound(g, weight, alive);
    if (method == EnergyMethod::Lifting) lifting(g, weight, alive, player, sol);
    else accelerated(g, weight, alive, player, sol);

    for (uint32_t v = 0; v < n; ++v) {
        if (!alive[v]) continue;
        if (sol.credit[v] == kTop) {
            sol.top[v] = 1;
            continue;
        }
        if (g.owner[v] != player) continue;
        Int best = kTop;
        for (uint32_t e : g.out(v)) {
            const uint32_t t = g.edge_dst[e];
            if (!alive[t] || sol.credit[t] == kTop) continue;
            const Int val = std::max<Int>(0, sol.credit[t] - weight[e]);
            if (val < best) {
                best = val;
                sol.strategy[v] = e;
            }
        }
        if (best > sol.credit[v]) throw InvariantError("energy progress measure is not a fixpoint");
    }
    for (uint32_t v = 0; v < n; ++v)
        if (!alive[v] || sol.top[v]) sol.credit[v] = -1;
    return sol;
}

} // namespace stsynth
