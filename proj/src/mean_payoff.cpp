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

#include "mean_payoff.hpp"

#include <algorithm>
#include <map>

#include "error.hpp"

namespace stsynth {

namespace {

// Weights q*w - p (sign flipped for the minimizer).
std::vector<Int> shifted(const Game& g, Int p, Int q, bool minimizer)
{
    std::vector<Int> w(g.num_edges());
    for (size_t e = 0; e < w.size(); ++e) {
        const Int x = checked_add(checked_mul(q, g.payoff[e]), -p);
        w[e] = minimizer ? -x : x;
    }
    return w;
}

struct Search
{
    const Game& g;
    EnergyMethod method;
    Int scale;  // n^2: distinct values with denominator <= n differ by more than 1/scale
    std::vector<Int> step;  // value in [step/scale, (step+1)/scale)
    uint64_t calls = 0;

    void run(const std::vector<uint32_t>& vs, Int lo, Int hi)
    {
        if (vs.empty()) return;
        if (lo == hi) {
            for (uint32_t v : vs) step[v] = lo;
            return;
        }
        const Int mid = lo + (hi - lo + 1) / 2;
        ++calls;
        const EnergySolution s = solve_energy(g, shifted(g, mid, scale, false), full_region(g), kP1, method);
        std::vector<uint32_t> up, down;
        for (uint32_t v : vs) (s.wins(v) ? up : down).push_back(v);
        run(down, lo, mid - 1);
        run(up, mid, hi);
    }
};

Int ceil_div(Int a, Int b) { return a >= 0 ? (a + b - 1) / b : -((-a) / b); }

// The unique fraction p/q with q <= n in [k/scale, (k+1)/scale).
Rational snap(Int k, Int scale, size_t n)
{
    for (Int q = 1; q <= Int(n); ++q) {
        const Int p = ceil_div(checked_mul(k, q), scale);
        if (checked_mul(p, scale) < checked_mul(k + 1, q)) return Rational(int64_t(p), int64_t(q));
    }
    throw InvariantError("mean-payoff value is not a fraction with small denominator");
}

} // namespace

Region mean_payoff_at_least(const Game& g, int64_t p, int64_t q, EnergyMethod method)
{
    if (q <= 0) throw InvariantError("mean-payoff threshold needs a positive denominator");
    const EnergySolution s = solve_energy(g, shifted(g, p, q, false), full_region(g), kP1, method);
    Region r(g.num_vertices(), 0);
    for (uint32_t v = 0; v < g.num_vertices(); ++v) r[v] = s.wins(v);
    return r;
}

MeanPayoffSolution solve_mean_payoff(const Game& g, EnergyMethod method)
{
    const size_t n = g.num_vertices();
    MeanPayoffSolution sol;
    sol.strategy.assign(n, -1);
    if (n == 0) return sol;
    for (uint32_t v = 0; v < n; ++v)
        if (g.out(v).empty()) throw InvariantError("mean-payoff game has a dead end");

    int64_t wmin = g.payoff.empty() ? 0 : *std::min_element(g.payoff.begin(), g.payoff.end());
    int64_t wmax = g.payoff.empty() ? 0 : *std::max_element(g.payoff.begin(), g.payoff.end());
    Search search{g, method, checked_mul(Int(n), Int(n)), std::vector<Int>(n, 0), 0};
    std::vector<uint32_t> all(n);
    for (uint32_t v = 0; v < n; ++v) all[v] = v;
    search.run(all, checked_mul(wmin, search.scale), checked_mul(wmax, search.scale));
    sol.energy_calls = search.calls;

    sol.value.resize(n);
    std::map<Int, Rational> cache;
    for (uint32_t v = 0; v < n; ++v) {
        auto it = cache.find(search.step[v]);
        if (it == cache.end()) it = cache.emplace(search.step[v], snap(search.step[v], search.scale, n)).first;
        sol.value[v] = it->second;
    }

    // Per value class: the maximizer's energy strategy at that value keeps
    // values from dropping, the minimizer's dual strategy keeps them from rising.
    std::map<Rational, std::vector<uint32_t>, std::less<>> classes;
    for (uint32_t v = 0; v < n; ++v) classes[sol.value[v]].push_back(v);
    for (const auto& [val, members] : classes) {
        const EnergySolution up = solve_energy(g, shifted(g, val.num, val.den, false), full_region(g), kP1, method);
        const EnergySolution down = solve_energy(g, shifted(g, val.num, val.den, true), full_region(g), kP2, method);
        sol.energy_calls += 2;
        for (uint32_t v : members) {
            const EnergySolution& s = g.owner[v] == kP1 ? up : down;
            if (!s.wins(v)) throw InvariantError("mean-payoff value class is not winning at its own value");
            sol.strategy[v] = s.strategy[v];
        }
    }
    return sol;
}

} // namespace stsynth
