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

#include "oracle.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>

#include "error.hpp"

namespace stsynth {

namespace {

struct Edges
{
    std::vector<uint32_t> src, dst;
    std::vector<Int> w;
};

// Calls f(choice) for every positional strategy of player p; choice[v] is an edge id or -1.
void enumerate(const Game& g, int p, uint64_t limit, const std::function<void(const std::vector<int64_t>&)>& f)
{
    std::vector<uint32_t> owned;
    long double total = 1;
    for (uint32_t v = 0; v < g.num_vertices(); ++v)
        if (g.owner[v] == p && !g.out(v).empty()) {
            owned.push_back(v);
            total *= (long double)g.out(v).size();
        }
    if (total > (long double)limit) throw InvariantError("oracle: too many strategies to enumerate");
    std::vector<size_t> digit(owned.size(), 0);
    std::vector<int64_t> choice(g.num_vertices(), -1);
    for (;;) {
        for (size_t i = 0; i < owned.size(); ++i) choice[owned[i]] = g.out(owned[i])[digit[i]];
        f(choice);
        size_t i = 0;
        while (i < owned.size() && ++digit[i] == g.out(owned[i]).size()) digit[i++] = 0;
        if (i == owned.size()) return;
    }
}

Edges fixed_edges(const Game& g, int p, const std::vector<int64_t>& choice, const std::vector<Int>& w)
{
    Edges out;
    for (uint32_t e = 0; e < g.num_edges(); ++e) {
        const uint32_t s = g.edge_src[e];
        if (g.owner[s] == p && choice[s] != int64_t(e)) continue;
        out.src.push_back(s);
        out.dst.push_back(g.edge_dst[e]);
        out.w.push_back(w[e]);
    }
    return out;
}

// Strongly connected components of the subgraph on `keep`; comp = -1 outside.
struct Components
{
    std::vector<int> comp;
    std::vector<std::vector<uint32_t>> members;
    std::vector<char> cyclic;
};

Components components(size_t n, const Edges& E, const std::vector<char>& keep)
{
    std::vector<std::vector<uint32_t>> adj(n);
    for (size_t i = 0; i < E.src.size(); ++i)
        if (keep[E.src[i]] && keep[E.dst[i]]) adj[E.src[i]].push_back(E.dst[i]);
    Components c;
    c.comp.assign(n, -1);
    std::vector<int> index(n, -1), low(n, 0);
    std::vector<char> on(n, 0);
    std::vector<uint32_t> stack;
    int counter = 0;
    std::function<void(uint32_t)> visit = [&](uint32_t v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on[v] = 1;
        for (uint32_t t : adj[v]) {
            if (index[t] < 0) {
                visit(t);
                low[v] = std::min(low[v], low[t]);
            } else if (on[t]) {
                low[v] = std::min(low[v], index[t]);
            }
        }
        if (low[v] != index[v]) return;
        const int id = int(c.members.size());
        c.members.emplace_back();
        for (;;) {
            const uint32_t x = stack.back();
            stack.pop_back();
            on[x] = 0;
            c.comp[x] = id;
            c.members.back().push_back(x);
            if (x == v) break;
        }
    };
    for (uint32_t v = 0; v < n; ++v)
        if (keep[v] && index[v] < 0) visit(v);
    c.cyclic.assign(c.members.size(), 0);
    for (size_t k = 0; k < c.members.size(); ++k) {
        if (c.members[k].size() > 1) c.cyclic[k] = 1;
        else
            for (uint32_t t : adj[c.members[k][0]])
                if (t == c.members[k][0]) c.cyclic[k] = 1;
    }
    return c;
}

// Edges of E inside component k, relabelled.
Edges inside(const Edges& E, const Components& c, int k, std::vector<uint32_t>& local)
{
    local.assign(c.comp.size(), 0);
    for (size_t i = 0; i < c.members[size_t(k)].size(); ++i) local[c.members[size_t(k)][i]] = uint32_t(i);
    Edges out;
    for (size_t i = 0; i < E.src.size(); ++i)
        if (c.comp[E.src[i]] == k && c.comp[E.dst[i]] == k) {
            out.src.push_back(local[E.src[i]]);
            out.dst.push_back(local[E.dst[i]]);
            out.w.push_back(E.w[i]);
        }
    return out;
}

CycleMean karp(size_t n, const Edges& E)
{
    const Int inf = std::numeric_limits<Int>::max();
    std::vector<std::vector<Int>> D(n + 1, std::vector<Int>(n, inf));
    std::fill(D[0].begin(), D[0].end(), 0);
    for (size_t j = 1; j <= n; ++j)
        for (size_t i = 0; i < E.src.size(); ++i) {
            const Int prev = D[j - 1][E.src[i]];
            if (prev != inf) D[j][E.dst[i]] = std::min(D[j][E.dst[i]], prev + E.w[i]);
        }
    CycleMean best;
    for (size_t x = 0; x < n; ++x) {
        if (D[n][x] == inf) continue;
        bool have = false;
        Rational worst;
        for (size_t j = 0; j < n; ++j) {
            if (D[j][x] == inf) continue;
            const Rational r(int64_t(D[n][x] - D[j][x]), int64_t(n - j));
            if (!have || worst < r) worst = r;
            have = true;
        }
        if (have && (!best.cyclic || worst < best.mean)) {
            best.mean = worst;
            best.cyclic = true;
        }
    }
    return best;
}

Rational max_cycle_mean(size_t n, Edges E)
{
    for (Int& x : E.w) x = -x;
    const CycleMean m = karp(n, E);
    return Rational(-m.mean.num, m.mean.den);
}

std::vector<char> reach(size_t n, const Edges& E, uint32_t from)
{
    std::vector<std::vector<uint32_t>> adj(n);
    for (size_t i = 0; i < E.src.size(); ++i) adj[E.src[i]].push_back(E.dst[i]);
    std::vector<char> seen(n, 0);
    std::deque<uint32_t> q{from};
    seen[from] = 1;
    while (!q.empty()) {
        const uint32_t v = q.front();
        q.pop_front();
        for (uint32_t t : adj[v])
            if (!seen[t]) {
                seen[t] = 1;
                q.push_back(t);
            }
    }
    return seen;
}

std::vector<char> below(const Game& g, int c)
{
    std::vector<char> keep(g.num_vertices(), 0);
    for (uint32_t v = 0; v < g.num_vertices(); ++v) keep[v] = g.color[v] <= c;
    return keep;
}

bool has_color(const Game& g, const std::vector<uint32_t>& members, int c)
{
    for (uint32_t v : members)
        if (g.color[v] == c) return true;
    return false;
}

// Longest closed walk through x in a graph without positive cycles.
bool nonnegative_closed_walk(size_t n, const Edges& E, uint32_t x)
{
    const Int ninf = std::numeric_limits<Int>::min();
    std::vector<Int> dist(n, ninf);
    dist[x] = 0;
    for (size_t round = 0; round + 1 < n; ++round)
        for (size_t i = 0; i < E.src.size(); ++i)
            if (dist[E.src[i]] != ninf && E.dst[i] != x) dist[E.dst[i]] = std::max(dist[E.dst[i]], dist[E.src[i]] + E.w[i]);
    for (size_t i = 0; i < E.src.size(); ++i)
        if (E.dst[i] == x && dist[E.src[i]] != ninf && dist[E.src[i]] + E.w[i] >= 0) return true;
    return false;
}

std::vector<Int> payoffs(const Game& g) { return std::vector<Int>(g.payoff.begin(), g.payoff.end()); }

// Player-2 fixed: vertices from which Player-1 reaches a good part (or a Player-2 dead end).
template <class Good>
Region one_player_reach(const Game& g, const Edges& E, Good good_part)
{
    const size_t n = g.num_vertices();
    std::vector<char> target(n, 0);
    for (uint32_t v = 0; v < n; ++v)
        if (g.owner[v] == kP2 && g.out(v).empty()) target[v] = 1;
    for (int c = 0; c <= g.max_color(); c += 2) {
        const Components comps = components(n, E, below(g, c));
        for (size_t k = 0; k < comps.members.size(); ++k) {
            if (!comps.cyclic[k] || !has_color(g, comps.members[k], c)) continue;
            std::vector<uint32_t> local;
            const Edges sub = inside(E, comps, int(k), local);
            if (!good_part(comps.members[k], sub, local, c)) continue;
            for (uint32_t v : comps.members[k]) target[v] = 1;
        }
    }
    Region win(n, 0);
    for (uint32_t v = 0; v < n; ++v) {
        const auto seen = reach(n, E, v);
        for (uint32_t t = 0; t < n; ++t)
            if (seen[t] && target[t]) win[v] = 1;
    }
    return win;
}

} // namespace

CycleMean min_cycle_mean(size_t n, const std::vector<uint32_t>& src, const std::vector<uint32_t>& dst,
                         const std::vector<int64_t>& weight)
{
    Edges E{src, dst, std::vector<Int>(weight.begin(), weight.end())};
    return karp(n, E);
}

Region oracle_parity(const Game& g, uint64_t limit)
{
    const size_t n = g.num_vertices();
    Region win(n, 0);
    const std::vector<Int> w = payoffs(g);
    enumerate(g, kP1, limit, [&](const std::vector<int64_t>& choice) {
        const Edges E = fixed_edges(g, kP1, choice, w);
        std::vector<char> bad(n, 0);
        for (uint32_t v = 0; v < n; ++v)
            if (g.owner[v] == kP1 && g.out(v).empty()) bad[v] = 1;
        for (int c = 1; c <= g.max_color(); c += 2) {
            const Components comps = components(n, E, below(g, c));
            for (size_t k = 0; k < comps.members.size(); ++k)
                if (comps.cyclic[k] && has_color(g, comps.members[k], c))
                    for (uint32_t v : comps.members[k]) bad[v] = 1;
        }
        for (uint32_t v = 0; v < n; ++v) {
            if (win[v]) continue;
            const auto seen = reach(n, E, v);
            bool ok = true;
            for (uint32_t t = 0; t < n && ok; ++t)
                if (seen[t] && bad[t]) ok = false;
            if (ok) win[v] = 1;
        }
    });
    return win;
}

std::vector<Rational> oracle_mean_payoff(const Game& g, uint64_t limit)
{
    const size_t n = g.num_vertices();
    for (uint32_t v = 0; v < n; ++v)
        if (g.out(v).empty()) throw InvariantError("oracle: mean-payoff game has a dead end");
    std::vector<Rational> best(n);
    std::vector<char> have(n, 0);
    const std::vector<Int> w = payoffs(g);
    enumerate(g, kP1, limit, [&](const std::vector<int64_t>& choice) {
        const Edges E = fixed_edges(g, kP1, choice, w);
        const Components comps = components(n, E, std::vector<char>(n, 1));
        std::vector<Rational> mean(comps.members.size());
        for (size_t k = 0; k < comps.members.size(); ++k) {
            if (!comps.cyclic[k]) continue;
            std::vector<uint32_t> local;
            const Edges sub = inside(E, comps, int(k), local);
            mean[k] = karp(comps.members[k].size(), sub).mean;
        }
        for (uint32_t v = 0; v < n; ++v) {
            const auto seen = reach(n, E, v);
            bool any = false;
            Rational val;
            for (uint32_t t = 0; t < n; ++t) {
                const int k = comps.comp[t];
                if (!seen[t] || !comps.cyclic[size_t(k)]) continue;
                if (!any || mean[size_t(k)] < val) val = mean[size_t(k)];
                any = true;
            }
            if (!any) throw InvariantError("oracle: no reachable cycle");
            if (!have[v] || best[v] < val) best[v] = val;
            have[v] = 1;
        }
    });
    return best;
}

Region brute_force_oracle(const Game& g, uint64_t limit)
{
    const size_t n = g.num_vertices();
    Region win(n, 1);
    const std::vector<Int> w = payoffs(g);
    enumerate(g, kP2, limit, [&](const std::vector<int64_t>& choice) {
        const Edges E = fixed_edges(g, kP2, choice, w);
        const Region r = one_player_reach(g, E, [&](const std::vector<uint32_t>& members, const Edges& sub,
                                                    const std::vector<uint32_t>&, int) {
            return max_cycle_mean(members.size(), sub) > g.threshold;
        });
        for (uint32_t v = 0; v < n; ++v) win[v] = win[v] && r[v];
    });
    return win;
}

Region oracle_energy_parity(const Game& g, const std::vector<Int>& weight, uint64_t limit)
{
    const size_t n = g.num_vertices();
    Region win(n, 1);
    enumerate(g, kP2, limit, [&](const std::vector<int64_t>& choice) {
        const Edges E = fixed_edges(g, kP2, choice, weight);
        const Region r = one_player_reach(g, E, [&](const std::vector<uint32_t>& members, const Edges& sub,
                                                    const std::vector<uint32_t>& local, int c) {
            const Rational m = max_cycle_mean(members.size(), sub);
            if (m > Rational(0)) return true;
            if (m < Rational(0)) return false;
            for (uint32_t v : members)
                if (g.color[v] == c && nonnegative_closed_walk(members.size(), sub, local[v])) return true;
            return false;
        });
        for (uint32_t v = 0; v < n; ++v) win[v] = win[v] && r[v];
    });
    return win;
}

} // namespace stsynth
