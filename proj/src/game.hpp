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

#ifndef STSYNTH_GAME_HPP
#define STSYNTH_GAME_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rational.hpp"

namespace stsynth {

/// Exact integer type of the solvers.
using Int = __int128;

Int checked_add(Int a, Int b);
Int checked_mul(Int a, Int b);
std::string int_str(Int v);
Int parse_int128(const std::string& text);

/// Player 0 is Player-1 of the game (even colors, payoff maximiser); player 1 is Player-2.
constexpr int kP1 = 0;
constexpr int kP2 = 1;

using Region = std::vector<char>;

/**
 * Two-player game graph with colors and integer edge payoffs.
 *
 * Edges are added freely and indexed in insertion order; finalize() builds
 * the adjacency lists used by every solver.
 */
struct Game
{
    std::vector<uint8_t> owner;
    std::vector<int> color;
    std::vector<uint32_t> edge_src, edge_dst;
    std::vector<int64_t> payoff;
    Rational threshold{0, 1};
    double scale = 1.0;

    size_t num_vertices() const { return owner.size(); }
    size_t num_edges() const { return edge_src.size(); }

    uint32_t add_vertex(int who, int col);
    uint32_t add_edge(uint32_t src, uint32_t dst, int64_t pay);
    void finalize();

    std::span<const uint32_t> out(uint32_t v) const { return {out_edges_.data() + out_begin_[v], out_edges_.data() + out_begin_[v + 1]}; }
    std::span<const uint32_t> in(uint32_t v) const { return {in_edges_.data() + in_begin_[v], in_edges_.data() + in_begin_[v + 1]}; }

    int max_color() const;

    void save(std::ostream& os) const;
    static Game load(std::istream& is);

private:
    std::vector<uint32_t> out_begin_, out_edges_, in_begin_, in_edges_;
};

/// Positional strategy: chosen edge per vertex, -1 where undefined.
using PositionalStrategy = std::vector<int64_t>;

Region full_region(const Game& g);
size_t region_size(const Region& r);

/**
 * Attractor of `player` to `target` inside the subgame `alive`.
 *
 * If `strategy` is given, attracted vertices of `player` outside the target get
 * the edge that decreases their rank.
 */
Region attractor(const Game& g, const Region& alive, const Region& target, int player,
                 PositionalStrategy* strategy = nullptr);

/// Outgoing edges of v that stay inside alive.
size_t alive_degree(const Game& g, const Region& alive, uint32_t v);

/**
 * Removes dead ends from the subgame: a vertex of player p with no move loses for p.
 * Returns the vertices decided for each player (as attractors) and the remaining trap
 * without dead ends.
 */
struct DeadEndSplit
{
    Region win[2];
    Region rest;
};

DeadEndSplit split_dead_ends(const Game& g, const Region& alive, PositionalStrategy* strategy);

} // namespace stsynth

#endif
