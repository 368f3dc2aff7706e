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

#include "game.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <istream>
#include <ostream>

#include "error.hpp"
#include "textio.hpp"

namespace stsynth {

namespace {

int bits_for(long double magnitude) { return int(std::ceil(std::log2(std::max<long double>(magnitude, 2.0L)))) + 2; }

} // namespace

Int checked_add(Int a, Int b)
{
    Int r;
    if (__builtin_add_overflow(a, b, &r))
        throw OverflowError("integer overflow in game weights", bits_for(std::fabs((long double)a) + std::fabs((long double)b)));
    return r;
}

Int checked_mul(Int a, Int b)
{
    Int r;
    if (__builtin_mul_overflow(a, b, &r))
        throw OverflowError("integer overflow in game weights", bits_for(std::fabs((long double)a) * std::fabs((long double)b)));
    return r;
}

std::string int_str(Int v)
{
    if (v == 0) return "0";
    const bool neg = v < 0;
    unsigned __int128 u = neg ? -(unsigned __int128)v : (unsigned __int128)v;
    std::string s;
    while (u) {
        s.push_back(char('0' + int(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
}

Int parse_int128(const std::string& raw)
{
    const std::string text = trim(raw);
    size_t i = 0;
    bool neg = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) neg = text[i++] == '-';
    if (i == text.size()) throw ConfigError("malformed integer '" + text + "'");
    Int v = 0;
    for (; i < text.size(); ++i) {
        if (text[i] < '0' || text[i] > '9') throw ConfigError("malformed integer '" + text + "'");
        v = checked_add(checked_mul(v, 10), text[i] - '0');
    }
    return neg ? -v : v;
}

uint32_t Game::add_vertex(int who, int col)
{
    if (who != kP1 && who != kP2) throw InvariantError("bad vertex owner");
    if (col < 0) throw InvariantError("negative color");
    owner.push_back(uint8_t(who));
    color.push_back(col);
    return uint32_t(owner.size() - 1);
}

uint32_t Game::add_edge(uint32_t src, uint32_t dst, int64_t pay)
{
    if (src >= num_vertices() || dst >= num_vertices()) throw InvariantError("edge endpoint out of range");
    edge_src.push_back(src);
    edge_dst.push_back(dst);
    payoff.push_back(pay);
    return uint32_t(edge_src.size() - 1);
}

void Game::finalize()
{
    const size_t n = num_vertices(), m = num_edges();
    out_begin_.assign(n + 1, 0);
    in_begin_.assign(n + 1, 0);
    for (size_t e = 0; e < m; ++e) {
        ++out_begin_[edge_src[e] + 1];
        ++in_begin_[edge_dst[e] + 1];
    }
    for (size_t v = 0; v < n; ++v) {
        out_begin_[v + 1] += out_begin_[v];
        in_begin_[v + 1] += in_begin_[v];
    }
    out_edges_.assign(m, 0);
    in_edges_.assign(m, 0);
    std::vector<uint32_t> po(out_begin_.begin(), out_begin_.end() - 1), pi(in_begin_.begin(), in_begin_.end() - 1);
    for (size_t e = 0; e < m; ++e) {
        out_edges_[po[edge_src[e]]++] = uint32_t(e);
        in_edges_[pi[edge_dst[e]]++] = uint32_t(e);
    }
}

int Game::max_color() const
{
    int c = 0;
    for (int x : color) c = std::max(c, x);
    return c;
}

void Game::save(std::ostream& os) const
{
    os << "stsynth-game 1\n";
    os << "vertices " << num_vertices() << "\n";
    os << "edges " << num_edges() << "\n";
    os << "threshold " << threshold.str() << "\n";
    os << "scale " << format_double(scale) << "\n";
    for (size_t v = 0; v < num_vertices(); ++v) os << v << '\t' << (owner[v] == kP1 ? 1 : 2) << '\t' << color[v] << "\n";
    for (size_t e = 0; e < num_edges(); ++e) os << edge_src[e] << '\t' << edge_dst[e] << '\t' << payoff[e] << "\n";
}

Game Game::load(std::istream& is)
{
    auto field = [&](const char* key) {
        auto tok = split_ws(expect_line(is, key));
        if (tok.size() != 2 || tok[0] != key) throw ConfigError(std::string("game: expected '") + key + "'");
        return tok[1];
    };
    if (trim(expect_line(is, "game")) != "stsynth-game 1") throw ConfigError("not a game file");
    Game g;
    const size_t n = size_t(parse_int(field("vertices")));
    const size_t m = size_t(parse_int(field("edges")));
    g.threshold = parse_rational(field("threshold"));
    g.scale = parse_double(field("scale"));
    for (size_t v = 0; v < n; ++v) {
        auto cols = split(expect_line(is, "vertex"), '\t');
        if (cols.size() != 3 || size_t(parse_int(cols[0])) != v) throw ConfigError("game: bad vertex line");
        const int64_t who = parse_int(cols[1]);
        if (who != 1 && who != 2) throw ConfigError("game: owner must be 1 or 2");
        const int64_t col = parse_int(cols[2]);
        if (col < 0 || col > 1000000) throw ConfigError("game: color out of range");
        g.add_vertex(who == 1 ? kP1 : kP2, int(col));
    }
    for (size_t e = 0; e < m; ++e) {
        auto cols = split(expect_line(is, "edge"), '\t');
        if (cols.size() != 3) throw ConfigError("game: bad edge line");
        const int64_t s = parse_int(cols[0]), d = parse_int(cols[1]);
        if (s < 0 || d < 0 || size_t(s) >= n || size_t(d) >= n) throw ConfigError("game: edge endpoint out of range");
        g.add_edge(uint32_t(s), uint32_t(d), parse_int(cols[2]));
    }
    g.finalize();
    return g;
}

Region full_region(const Game& g) { return Region(g.num_vertices(), 1); }

size_t region_size(const Region& r) { return size_t(std::count(r.begin(), r.end(), char(1))); }

size_t alive_degree(const Game& g, const Region& alive, uint32_t v)
{
    size_t k = 0;
    for (uint32_t e : g.out(v))
        if (alive[g.edge_dst[e]]) ++k;
    return k;
}

Region attractor(const Game& g, const Region& alive, const Region& target, int player, PositionalStrategy* strategy)
{
    const size_t n = g.num_vertices();
    Region attr(n, 0);
    std::vector<uint32_t> count(n, 0);
    std::deque<uint32_t> queue;
    for (uint32_t v = 0; v < n; ++v) {
        if (!alive[v]) continue;
        if (target[v]) {
            attr[v] = 1;
            queue.push_back(v);
        } else if (g.owner[v] != player) {
            count[v] = uint32_t(alive_degree(g, alive, v));
        }
    }
    while (!queue.empty()) {
        const uint32_t t = queue.front();
        queue.pop_front();
        for (uint32_t e : g.in(t)) {
            const uint32_t v = g.edge_src[e];
            if (!alive[v] || attr[v]) continue;
            if (g.owner[v] == player) {
                attr[v] = 1;
                if (strategy) (*strategy)[v] = e;
                queue.push_back(v);
            } else if (--count[v] == 0) {
                attr[v] = 1;
                queue.push_back(v);
            }
        }
    }
    return attr;
}

DeadEndSplit split_dead_ends(const Game& g, const Region& alive, PositionalStrategy* strategy)
{
    const size_t n = g.num_vertices();
    DeadEndSplit out;
    Region dead(n, 0);
    for (uint32_t v = 0; v < n; ++v)
        if (alive[v] && g.owner[v] == kP1 && alive_degree(g, alive, v) == 0) dead[v] = 1;
    out.win[kP2] = attractor(g, alive, dead, kP2, strategy);
    Region rest(n, 0);
    for (uint32_t v = 0; v < n; ++v) rest[v] = alive[v] && !out.win[kP2][v];
    std::fill(dead.begin(), dead.end(), 0);
    for (uint32_t v = 0; v < n; ++v)
        if (rest[v] && g.owner[v] == kP2 && alive_degree(g, rest, v) == 0) dead[v] = 1;
    out.win[kP1] = attractor(g, rest, dead, kP1, strategy);
    for (uint32_t v = 0; v < n; ++v) rest[v] = rest[v] && !out.win[kP1][v];
    out.rest = std::move(rest);
    return out;
}

} // namespace stsynth
