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

#include <random>
#include <sstream>

#include "doctest.h"
#include "error.hpp"
#include "mean_payoff.hpp"
#include "oracle.hpp"
#include "oracles.hpp"
#include "parity.hpp"
#include "threshold.hpp"

using namespace stsynth;
using namespace testing_oracle;

namespace {

Game loop(int color, int64_t pay)
{
    Game g;
    g.add_vertex(kP1, color);
    g.add_edge(0, 0, pay);
    g.finalize();
    return g;
}

std::vector<char> as_chars(const Region& r) { return {r.begin(), r.end()}; }

// Player-1 choice indices of a positional strategy, 0 where undefined.
std::vector<int> choices(const Game& g, const PositionalStrategy& s)
{
    std::vector<int> c(g.num_vertices(), -1);
    for (uint32_t v = 0; v < g.num_vertices(); ++v) {
        const auto out = g.out(v);
        if (out.empty()) continue;
        c[v] = 0;
        for (size_t i = 0; i < out.size(); ++i)
            if (s[v] >= 0 && out[i] == uint32_t(s[v])) c[v] = int(i);
    }
    return c;
}

} // namespace

TEST_SUITE("game")
{
    TEST_CASE("parity examples [reference]")
    {
        CHECK(solve_parity(loop(2, 1)).winner[0] == kP1);
        CHECK(solve_parity(loop(1, 1)).winner[0] == kP2);
        CHECK(solve_parity(loop(0, 1)).winner[0] == kP1);
        // Player 1 dead end loses, Player 2 dead end wins for Player 1
        Game g;
        g.add_vertex(kP1, 0);
        g.add_vertex(kP2, 1);
        g.finalize();
        const ParitySolution s = solve_parity(g);
        CHECK(s.winner[0] == kP2);
        CHECK(s.winner[1] == kP1);
    }

    TEST_CASE("parity agrees with profile enumeration [DERIVED]")
    {
        std::mt19937_64 rng(11);
        RandomGameShape shape;
        shape.max_color = 4;
        for (int it = 0; it < 200; ++it) {
            shape.dead_ends = it % 4 == 0;
            const Game g = random_game(rng, shape);
            const ParitySolution s = solve_parity(g);
            const std::vector<char> want = parity_winners(g);
            CHECK(as_chars(s.region(kP1)) == want);
            CHECK(oracle_parity(g) == s.region(kP1));
            // the returned Player-1 strategy wins against every Player-2 profile
            const std::vector<int> c1 = choices(g, s.strategy);
            each_profile(g, kP2, [&](const std::vector<int>& c2) {
                for (uint32_t v = 0; v < g.num_vertices(); ++v)
                    if (want[v]) CHECK(parity_play_won(g, follow(g, v, c1, c2)));
            });
        }
    }

    TEST_CASE("mean payoff examples [reference]")
    {
        CHECK(solve_mean_payoff(loop(0, 3)).value[0] == Rational(3));
        Game g;
        g.add_vertex(kP1, 0);
        g.add_vertex(kP2, 0);
        g.add_edge(0, 1, 1);
        g.add_edge(1, 0, 3);
        g.finalize();
        const MeanPayoffSolution s = solve_mean_payoff(g);
        CHECK(s.value[0] == Rational(2));
        CHECK(s.value[1] == Rational(2));
        CHECK(min_cycle_mean(2, g.edge_src, g.edge_dst, g.payoff).mean == Rational(2));
    }

    TEST_CASE("mean payoff agrees with profile enumeration [DERIVED]")
    {
        std::mt19937_64 rng(12);
        RandomGameShape shape;
        shape.max_payoff = 6;
        for (int it = 0; it < 200; ++it) {
            const Game g = random_game(rng, shape);
            const MeanPayoffSolution s = solve_mean_payoff(g, it % 2 ? EnergyMethod::Lifting : EnergyMethod::Accelerated);
            CHECK(s.value == mean_payoff_values(g));
            CHECK(s.value == oracle_mean_payoff(g));
        }
    }

    TEST_CASE("energy examples")
    {
        const Game zero = loop(2, 0);
        std::vector<Int> w{0};
        EnergyParitySolution s = solve_energy_parity(zero, w, full_region(zero));
        CHECK(s.win[0]);
        CHECK(s.strategy.initial(0) == 0);
        w = {-1};
        for (int c = 0; c < 3; ++c) {
            const Game g = loop(c, 0);
            CHECK(!solve_energy_parity(g, w, full_region(g)).recursive[0]);
        }
        // a chain 0 -(-3)-> 1 -(+1)-> 1 needs credit 3 at 0
        Game g;
        g.add_vertex(kP1, 0);
        g.add_vertex(kP1, 0);
        g.add_edge(0, 1, 0);
        g.add_edge(1, 1, 0);
        g.finalize();
        for (auto m : {EnergyMethod::Lifting, EnergyMethod::Accelerated}) {
            const EnergySolution e = solve_energy(g, {-3, 1}, full_region(g), kP1, m);
            CHECK(e.credit[0] == 3);
            CHECK(e.credit[1] == 0);
        }
    }

    TEST_CASE("energy parity agrees with the oracles [DERIVED]")
    {
        std::mt19937_64 rng(13);
        RandomGameShape shape;
        shape.max_vertices = 8;
        size_t incomplete = 0;
        for (int it = 0; it < 200; ++it) {
            shape.dead_ends = it % 5 == 0;
            const Game g = random_game(rng, shape);
            std::vector<Int> w(g.num_edges());
            for (auto& x : w) x = Int(int(rng() % 7) - 3);
            const EnergyParitySolution s = solve_energy_parity(g, w, full_region(g));
            const std::vector<char> want = energy_parity_winners(g, w);
            CHECK(as_chars(s.recursive) == want);
            CHECK(oracle_energy_parity(g, w) == s.recursive);
            for (uint32_t v = 0; v < g.num_vertices(); ++v) {
                CHECK((!s.win[v] || s.recursive[v]));
                CHECK(s.win[v] == s.strategy.covers(v));
            }
            if (!s.complete) ++incomplete;
            else CHECK(s.win == s.recursive);
        }
        CHECK(incomplete == 0);
    }

    TEST_CASE("threshold examples [reference]")
    {
        Game g = loop(2, 1);
        g.threshold = Rational(1, 2);
        CHECK(solve_threshold(g).win[0]);
        CHECK(brute_force_oracle(g)[0]);
        g.threshold = Rational(1);
        CHECK(!solve_threshold(g).win[0]);
        CHECK(!brute_force_oracle(g)[0]);
        Game two;
        two.add_vertex(kP1, 2);
        two.add_edge(0, 0, 1);
        const uint32_t big = two.add_edge(0, 0, 2);
        two.finalize();
        two.threshold = Rational(3, 2);
        const ThresholdSolution s = solve_threshold(two);
        REQUIRE(s.win[0]);
        CHECK(brute_force_oracle(two)[0]);
        CHECK(s.strategy.move(0, s.strategy.initial(0)) == int64_t(big));
        // weights b*n*payoff - (a*n + 1) with n = 1
        CHECK(threshold_weights(two) == std::vector<Int>{2 - 4, 4 - 4});
    }

    TEST_CASE("threshold is sound against the oracles [DERIVED]")
    {
        std::mt19937_64 rng(14);
        RandomGameShape shape;
        shape.max_vertices = 8;
        size_t declared = 0, truth = 0;
        for (int it = 0; it < 300; ++it) {
            shape.dead_ends = it % 6 == 0;
            Game g = random_game(rng, shape);
            g.threshold = Rational(int64_t(rng() % 9), int64_t(1 + rng() % 3));
            const ThresholdSolution s = solve_threshold(g);
            const Region brute = brute_force_oracle(g);
            CHECK(as_chars(brute) == threshold_winners(g));
            for (uint32_t v = 0; v < g.num_vertices(); ++v) {
                if (s.win[v]) CHECK(brute[v]);
                declared += s.win[v] != 0;
                truth += brute[v] != 0;
            }
        }
        MESSAGE("threshold completeness " << declared << "/" << truth);
        CHECK(declared <= truth);
    }

    TEST_CASE("brute force agrees on special cases [DERIVED]")
    {
        std::mt19937_64 rng(15);
        RandomGameShape shape;
        shape.max_vertices = 8;
        for (int it = 0; it < 100; ++it) {
            // uniform payoffs and a threshold below them: only parity matters
            Game g = random_game(rng, shape);
            for (auto& p : g.payoff) p = 2;
            g.threshold = Rational(1);
            CHECK(brute_force_oracle(g) == solve_parity(g).region(kP1));
            // one even color: only the mean payoff matters
            Game h = random_game(rng, shape);
            for (auto& c : h.color) c = 0;
            h.threshold = Rational(int64_t(rng() % 7), 2);
            const MeanPayoffSolution mp = solve_mean_payoff(h);
            const Region brute = brute_force_oracle(h);
            for (uint32_t v = 0; v < h.num_vertices(); ++v) CHECK(bool(brute[v]) == (mp.value[v] > h.threshold));
        }
    }

    TEST_CASE("threshold strategies hold up in long plays")
    {
        std::mt19937_64 rng(16);
        RandomGameShape shape;
        shape.max_vertices = 8;
        size_t plays = 0;
        for (int it = 0; it < 40; ++it) {
            Game g = random_game(rng, shape);
            g.threshold = Rational(int64_t(rng() % 5), 2);
            const ThresholdSolution s = solve_threshold(g);
            for (uint32_t v = 0; v < g.num_vertices(); ++v) {
                if (!s.win[v]) continue;
                for (int k = 0; k < 5; ++k) {
                    const StrategyPlay p = play_strategy(g, s.strategy, v, rng, 10000, 1000);
                    REQUIRE_MESSAGE(p.ok, p.failure);
                    ++plays;
                    if (p.opponent_stuck) continue;
                    CHECK(p.suffix_top % 2 == 0);
                    CHECK(Rational(p.payoff_sum, int64_t(p.steps)) > g.threshold);
                }
            }
        }
        CHECK(plays > 100);
    }

    TEST_CASE("game and strategy dumps round-trip")
    {
        std::mt19937_64 rng(17);
        for (int it = 0; it < 20; ++it) {
            Game g = random_game(rng, RandomGameShape{});
            g.threshold = Rational(3, 2);
            g.scale = 0.25;
            std::ostringstream a, b;
            g.save(a);
            std::istringstream in(a.str());
            Game h = Game::load(in);
            h.save(b);
            CHECK(a.str() == b.str());
            const ThresholdSolution s = solve_threshold(g);
            std::ostringstream x, y;
            s.strategy.save(x);
            std::istringstream sin(x.str());
            EnergyStrategy::load(sin).save(y);
            CHECK(x.str() == y.str());
            // same input, same strategy
            std::ostringstream z;
            solve_threshold(h).strategy.save(z);
            CHECK(z.str() == x.str());
        }
        std::istringstream junk("stsynth-game 1\nvertices x\n");
        CHECK_THROWS(Game::load(junk));
    }

    TEST_CASE("weight scaling overflow is reported")
    {
        Game g = loop(0, int64_t(1) << 62);
        g.threshold = Rational(1, (int64_t(1) << 62) + 1);
        for (int i = 0; i < 7; ++i) {
            g.add_vertex(kP1, 0);
            g.add_edge(uint32_t(i + 1), uint32_t(i + 1), 1);
        }
        g.finalize();
        CHECK_THROWS_AS(threshold_weights(g), OverflowError);
    }
}
