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

#include "energy_parity.hpp"

#include <algorithm>
#include <ostream>

#include "error.hpp"
#include "parity.hpp"
#include "textio.hpp"

namespace stsynth {

namespace {

Region minus(const Region& a, const Region& b)
{
    Region r(a.size(), 0);
    for (size_t v = 0; v < a.size(); ++v) r[v] = a[v] && !b[v];
    return r;
}

bool empty(const Region& r) { return std::find(r.begin(), r.end(), char(1)) == r.end(); }

Int abs_int(Int x) { return x < 0 ? -x : x; }

// Color ranks: K_c outweighs every lower color on a simple cycle.
std::vector<Int> color_ranks(const Game& g, const Region& alive)
{
    int d = 0;
    for (uint32_t v = 0; v < g.num_vertices(); ++v)
        if (alive[v]) d = std::max(d, g.color[v]);
    std::vector<Int> count(size_t(d) + 1, 0), K(size_t(d) + 1, 0);
    for (uint32_t v = 0; v < g.num_vertices(); ++v)
        if (alive[v]) ++count[size_t(g.color[v])];
    Int acc = 0;
    for (int c = 0; c <= d; ++c) {
        K[size_t(c)] = checked_add(acc, 1);
        acc = checked_add(acc, checked_mul(count[size_t(c)], K[size_t(c)]));
    }
    return K;
}

Int signed_rank(const Game& g, const std::vector<Int>& K, uint32_t v)
{
    const Int k = K[size_t(g.color[v])];
    return g.color[v] % 2 == 0 ? k : -k;
}

struct Recursive
{
    const Game& g;
    const std::vector<Int>& w;
    EnergyMethod method;
    uint64_t calls = 0;

    // Good-for-energy: weight dominates, ties broken by the parity of the top color.
    EnergySolution good_for_energy(const Region& G)
    {
        const std::vector<Int> K = color_ranks(g, G);
        Int M = 1;
        for (uint32_t v = 0; v < g.num_vertices(); ++v)
            if (G[v]) M = checked_add(M, K[size_t(g.color[v])]);
        std::vector<Int> w2(g.num_edges(), 0);
        for (uint32_t e = 0; e < g.num_edges(); ++e) {
            const uint32_t s = g.edge_src[e];
            if (G[s]) w2[e] = checked_add(checked_mul(w[e], M), signed_rank(g, K, s));
        }
        ++calls;
        return solve_energy(g, w2, G, kP1, method);
    }

    // alive has no dead ends.
    Region solve(Region G)
    {
        const size_t n = g.num_vertices();
        int d = -1;
        for (uint32_t v = 0; v < n; ++v)
            if (G[v]) d = std::max(d, g.color[v]);
        if (d < 0) return Region(n, 0);

        if (d % 2 == 0) {
            for (;;) {
                const EnergySolution ge = good_for_energy(G);
                for (uint32_t v = 0; v < n; ++v) G[v] = G[v] && ge.wins(v);
                if (empty(G)) return G;
                Region top(n, 0);
                for (uint32_t v = 0; v < n; ++v) top[v] = G[v] && g.color[v] == d;
                const Region sub = minus(G, attractor(g, G, top, kP1));
                const Region lost = minus(sub, solve(sub));
                if (empty(lost)) return G;
                G = minus(G, attractor(g, G, lost, kP2));
                if (empty(G)) return G;
            }
        }
        Region W(n, 0);
        for (;;) {
            Region top(n, 0);
            for (uint32_t v = 0; v < n; ++v) top[v] = G[v] && g.color[v] == d;
            const Region sub = minus(G, attractor(g, G, top, kP2));
            const Region won = solve(sub);
            if (empty(won)) return W;
            const Region B = attractor(g, G, won, kP1);
            for (uint32_t v = 0; v < n; ++v)
                if (B[v]) W[v] = 1;
            G = minus(G, B);
            if (empty(G)) return W;
        }
    }
};

// Game with Player-1 restricted to one edge per vertex (or none) inside W.
Game restrict_to(const Game& g, const Region& W, const PositionalStrategy& sigma, std::vector<uint32_t>& edge_map)
{
    Game r;
    for (uint32_t v = 0; v < g.num_vertices(); ++v) r.add_vertex(g.owner[v], g.color[v]);
    edge_map.clear();
    for (uint32_t e = 0; e < g.num_edges(); ++e) {
        const uint32_t s = g.edge_src[e], t = g.edge_dst[e];
        if (!W[s] || !W[t]) continue;
        if (g.owner[s] == kP1 && sigma[s] != int64_t(e)) continue;
        r.add_edge(s, t, 0);
        edge_map.push_back(e);
    }
    r.finalize();
    return r;
}

// Checks a positional candidate: every cycle P2 can reach must be non-negative with an even top color.
bool try_positional(const Game& g, const std::vector<Int>& w, const Region& W, const PositionalStrategy& sigma,
                    EnergyMethod method, EnergyStrategy& out)
{
    std::vector<uint32_t> map;
    const Game r = restrict_to(g, W, sigma, map);
    std::vector<Int> rw(map.size());
    for (size_t i = 0; i < map.size(); ++i) rw[i] = w[map[i]];
    const EnergySolution es = solve_energy(r, rw, W, kP1, method);
    const ParitySolution ps = solve_parity(r, W);
    for (uint32_t v = 0; v < g.num_vertices(); ++v)
        if (W[v] && (!es.wins(v) || ps.winner[v] != kP1)) return false;

    out.credit.assign(g.num_vertices(), -1);
    out.moves.assign(g.num_vertices(), {});
    out.cap = 0;
    for (uint32_t v = 0; v < g.num_vertices(); ++v) {
        if (!W[v]) continue;
        out.credit[v] = es.credit[v];
        out.cap = std::max(out.cap, es.credit[v]);
        if (g.owner[v] == kP1 && sigma[v] >= 0) out.moves[v].push_back({es.credit[v], uint32_t(sigma[v])});
    }
    return true;
}

struct ProductResult
{
    bool built = false;
    size_t vertices = 0;
};

// Capped-energy product solved as a parity game; fills the strategy for covered vertices.
ProductResult try_product(const Game& g, const std::vector<Int>& w, const Region& W, Int cap, size_t limit,
                          EnergyStrategy& out)
{
    ProductResult res;
    const size_t n = g.num_vertices();
    std::vector<uint32_t> list;
    std::vector<int64_t> pos(n, -1);
    size_t wedges = 0;
    for (uint32_t v = 0; v < n; ++v) {
        if (!W[v]) continue;
        pos[v] = int64_t(list.size());
        list.push_back(v);
        for (uint32_t e : g.out(v))
            if (W[g.edge_dst[e]]) ++wedges;
    }
    const size_t levels = size_t(cap) + 1;
    const long double size = (long double)(list.size() + wedges) * (long double)levels;
    if (size > (long double)limit) return res;
    res.built = true;
    res.vertices = list.size() * levels + 1;

    Game P;
    for (uint32_t v : list)
        for (size_t e = 0; e < levels; ++e) P.add_vertex(g.owner[v], g.color[v]);
    const uint32_t sink = P.add_vertex(kP2, 1);
    P.add_edge(sink, sink, 0);
    std::vector<uint32_t> origin{0};
    for (uint32_t v : list) {
        for (size_t lvl = 0; lvl < levels; ++lvl) {
            const uint32_t src = uint32_t(size_t(pos[v]) * levels + lvl);
            for (uint32_t e : g.out(v)) {
                const uint32_t t = g.edge_dst[e];
                if (!W[t]) continue;
                const Int next = Int(lvl) + w[e];
                const uint32_t dst = next < 0 ? sink : uint32_t(size_t(pos[t]) * levels + size_t(std::min(cap, next)));
                P.add_edge(src, dst, 0);
                origin.push_back(e);
            }
        }
    }
    P.finalize();
    const ParitySolution ps = solve_parity(P);

    out.cap = cap;
    out.credit.assign(n, -1);
    out.moves.assign(n, {});
    for (uint32_t v : list) {
        const size_t base = size_t(pos[v]) * levels;
        int64_t first = -1;
        for (size_t lvl = 0; lvl < levels; ++lvl) {
            const bool won = ps.winner[base + lvl] == kP1;
            if (won && first < 0) first = int64_t(lvl);
            if (!won && first >= 0) throw InvariantError("capped energy product is not monotone");
        }
        if (first < 0) continue;
        out.credit[v] = first;
        if (g.owner[v] != kP1) continue;
        for (size_t lvl = size_t(first); lvl < levels; ++lvl) {
            const int64_t pe = ps.strategy[base + lvl];
            if (pe < 0) throw InvariantError("winning product vertex without a move");
            const uint32_t e = origin[size_t(pe)];
            if (out.moves[v].empty() || out.moves[v].back().second != e) out.moves[v].push_back({Int(lvl), e});
        }
    }
    return res;
}

} // namespace

int64_t EnergyStrategy::move(uint32_t v, Int energy) const
{
    const auto& runs = moves[v];
    if (runs.empty() || energy < runs.front().first) return -1;
    auto it = std::upper_bound(runs.begin(), runs.end(), energy,
                               [](Int e, const std::pair<Int, uint32_t>& r) { return e < r.first; });
    return int64_t(std::prev(it)->second);
}

Int EnergyStrategy::update(Int energy, uint32_t e) const { return std::min(cap, energy + weight[e]); }

void EnergyStrategy::save(std::ostream& os) const
{
    os << "stsynth-strategy 1\n";
    os << "memory " << int_str(cap + 1) << "\n";
    os << "vertices " << credit.size() << "\n";
    os << "edges " << weight.size() << "\n";
    for (size_t v = 0; v < credit.size(); ++v) {
        os << v << '\t' << int_str(credit[v]) << '\t';
        if (moves[v].empty()) os << '-';
        for (size_t i = 0; i < moves[v].size(); ++i) os << (i ? "," : "") << int_str(moves[v][i].first) << ':' << moves[v][i].second;
        os << "\n";
    }
    os << "update capped-sum\n";
    for (size_t e = 0; e < weight.size(); ++e) os << e << '\t' << int_str(weight[e]) << "\n";
}

EnergyStrategy EnergyStrategy::load(std::istream& is)
{
    auto field = [&](const char* key) {
        auto tok = split_ws(expect_line(is, key));
        if (tok.size() != 2 || tok[0] != key) throw ConfigError(std::string("strategy: expected '") + key + "'");
        return tok[1];
    };
    if (trim(expect_line(is, "strategy")) != "stsynth-strategy 1") throw ConfigError("not a strategy file");
    EnergyStrategy s;
    s.cap = parse_int128(field("memory")) - 1;
    if (s.cap < 0) throw ConfigError("strategy: memory must be positive");
    const size_t n = size_t(parse_int(field("vertices")));
    const size_t m = size_t(parse_int(field("edges")));
    s.credit.resize(n);
    s.moves.resize(n);
    for (size_t v = 0; v < n; ++v) {
        auto cols = split(expect_line(is, "strategy vertex"), '\t');
        if (cols.size() != 3 || size_t(parse_int(cols[0])) != v) throw ConfigError("strategy: bad vertex line");
        s.credit[v] = parse_int128(cols[1]);
        if (cols[2] == "-") continue;
        for (const auto& run : split(cols[2], ',')) {
            auto kv = split(run, ':');
            if (kv.size() != 2) throw ConfigError("strategy: bad move run");
            const int64_t e = parse_int(kv[1]);
            if (e < 0 || size_t(e) >= m) throw ConfigError("strategy: edge out of range");
            s.moves[v].push_back({parse_int128(kv[0]), uint32_t(e)});
        }
    }
    if (trim(expect_line(is, "strategy update")) != "update capped-sum") throw ConfigError("strategy: expected update table");
    s.weight.resize(m);
    for (size_t e = 0; e < m; ++e) {
        auto cols = split(expect_line(is, "strategy weight"), '\t');
        if (cols.size() != 2 || size_t(parse_int(cols[0])) != e) throw ConfigError("strategy: bad weight line");
        s.weight[e] = parse_int128(cols[1]);
    }
    return s;
}

Region energy_parity_region(const Game& g, const std::vector<Int>& weight, const Region& alive, EnergyMethod method)
{
    if (weight.size() != g.num_edges()) throw InvariantError("weight vector size mismatch");
    const DeadEndSplit split = split_dead_ends(g, alive, nullptr);
    Recursive rec{g, weight, method};
    Region W = rec.solve(split.rest);
    for (uint32_t v = 0; v < g.num_vertices(); ++v)
        if (split.win[kP1][v]) W[v] = 1;
    return W;
}

EnergyParitySolution solve_energy_parity(const Game& g, const std::vector<Int>& weight, const Region& alive,
                                         const EnergyParityOptions& opt)
{
    if (weight.size() != g.num_edges()) throw InvariantError("weight vector size mismatch");
    const size_t n = g.num_vertices();
    EnergyParitySolution sol;
    const DeadEndSplit split = split_dead_ends(g, alive, nullptr);
    Recursive rec{g, weight, opt.method};
    sol.recursive = rec.solve(split.rest);
    for (uint32_t v = 0; v < n; ++v)
        if (split.win[kP1][v]) sol.recursive[v] = 1;
    sol.energy_calls = rec.calls;
    sol.strategy.weight = weight;
    sol.strategy.credit.assign(n, -1);
    sol.strategy.moves.assign(n, {});
    if (!opt.strategy || empty(sol.recursive)) {
        sol.win = sol.recursive;
        sol.complete = !opt.strategy ? false : true;
        return sol;
    }
    const Region& W = sol.recursive;

    // Positional candidates: good-for-energy, then parity-first tie breaking.
    if (opt.positional) {
        const EnergySolution ge = rec.good_for_energy(W);
        if (try_positional(g, weight, W, ge.strategy, opt.method, sol.strategy)) sol.positional = true;
    }
    if (opt.positional && !sol.positional) {
        const std::vector<Int> K = color_ranks(g, W);
        Int M = 1;
        for (uint32_t e = 0; e < g.num_edges(); ++e)
            if (W[g.edge_src[e]]) M = checked_add(M, abs_int(weight[e]));
        std::vector<Int> w2(g.num_edges(), 0);
        for (uint32_t e = 0; e < g.num_edges(); ++e)
            if (W[g.edge_src[e]]) w2[e] = checked_add(checked_mul(signed_rank(g, K, g.edge_src[e]), M), weight[e]);
        ++sol.energy_calls;
        const EnergySolution pe = solve_energy(g, w2, W, kP1, opt.method);
        if (try_positional(g, weight, W, pe.strategy, opt.method, sol.strategy)) sol.positional = true;
    }

    if (!sol.positional) {
        Int maxabs = 1;
        size_t count = 0;
        int d = 0;
        for (uint32_t v = 0; v < n; ++v) {
            if (!W[v]) continue;
            ++count;
            d = std::max(d, g.color[v]);
            for (uint32_t e : g.out(v))
                if (W[g.edge_dst[e]]) maxabs = std::max(maxabs, abs_int(weight[e]));
        }
        const Int ceiling = checked_mul(checked_mul(Int(count), Int(d + 1)), maxabs);
        Int cap = std::min(maxabs, ceiling);
        EnergyStrategy best;
        bool have = false;
        for (;;) {
            EnergyStrategy trial;
            trial.weight = weight;
            const ProductResult pr = try_product(g, weight, W, cap, opt.product_limit, trial);
            if (!pr.built) break;
            sol.product_vertices = pr.vertices;
            best = std::move(trial);
            have = true;
            bool all = true;
            for (uint32_t v = 0; v < n && all; ++v)
                if (W[v] && best.credit[v] < 0) all = false;
            if (all || cap >= ceiling) break;
            cap = std::min(checked_mul(cap, 2), ceiling);
        }
        if (have) sol.strategy = std::move(best);
    }

    sol.win.assign(n, 0);
    for (uint32_t v = 0; v < n; ++v) sol.win[v] = W[v] && sol.strategy.credit[v] >= 0;
    sol.complete = sol.win == sol.recursive;
    return sol;
}

} // namespace stsynth
