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

// Labelled toy models with exact labels, direct evaluation of 2-LTL on lasso
// words, and a one-player product game built by hand.

#ifndef STSYNTH_TEST_LASSO_HPP
#define STSYNTH_TEST_LASSO_HPP

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "game.hpp"
#include "logic.hpp"
#include "parity.hpp"

namespace testing_lasso {

using namespace stsynth;

struct Edge
{
    uint32_t from, to;
    LabelMask truth;  // atoms true along the whole transition
};

struct ToyModel
{
    size_t states = 0;
    uint32_t init = 0;
    std::vector<Edge> edges;
    std::vector<std::string> atoms;
};

inline TransitionLabels exact(LabelMask truth, size_t atoms)
{
    const LabelMask all = atoms >= 64 ? ~LabelMask(0) : (LabelMask(1) << atoms) - 1;
    const LabelPair p{truth, all & ~truth};
    return {{p}, p};
}

inline bool holds_on(const PathFormula& f, const std::vector<LabelMask>& prefix, const std::vector<LabelMask>& cycle)
{
    using K = PathFormula::Kind;
    auto any = [&](const std::vector<LabelMask>& w) {
        for (LabelMask m : w)
            if (f.phi.holds(m)) return true;
        return false;
    };
    auto all = [&](const std::vector<LabelMask>& w) {
        for (LabelMask m : w)
            if (!f.phi.holds(m)) return false;
        return true;
    };
    switch (f.kind) {
    case K::F: return any(prefix) || any(cycle);
    case K::G: return all(prefix) && all(cycle);
    case K::GF: return any(cycle);
    case K::FG: return all(cycle);
    case K::And: return holds_on(f.args[0], prefix, cycle) && holds_on(f.args[1], prefix, cycle);
    case K::Or: return holds_on(f.args[0], prefix, cycle) || holds_on(f.args[1], prefix, cycle);
    }
    return false;
}

// Max color the annotation sees infinitely often on the lasso word.
inline int annotation_verdict(const ParityAnnotation& ann, size_t atoms, const std::vector<LabelMask>& prefix,
                              const std::vector<LabelMask>& cycle)
{
    uint32_t z = ann.init_copy;
    for (LabelMask m : prefix) z = ann.jump(z, exact(m, atoms));
    // iterate the cycle until the copy at its start repeats
    std::vector<uint32_t> starts;
    std::vector<int> tops;
    for (;;) {
        for (size_t i = 0; i < starts.size(); ++i)
            if (starts[i] == z) {
                int top = -1;
                for (size_t j = i; j < tops.size(); ++j) top = std::max(top, tops[j]);
                return top;
            }
        starts.push_back(z);
        int top = -1;
        for (LabelMask m : cycle) {
            z = ann.jump(z, exact(m, atoms));
            top = std::max(top, ann.colors[z]);
        }
        tops.push_back(top);
    }
}

// Every lasso from init with prefix <= max_prefix and cycle <= max_cycle transitions.
inline void each_lasso(const ToyModel& m, size_t max_prefix, size_t max_cycle,
                       const std::function<void(const std::vector<LabelMask>&, const std::vector<LabelMask>&)>& fn)
{
    std::vector<uint32_t> states{m.init};
    std::vector<LabelMask> word;
    std::function<void()> walk = [&]() {
        const size_t L = word.size();
        // close a cycle at every earlier position i with L - i <= max_cycle
        for (size_t i = (L > max_cycle ? L - max_cycle : 0); i < L; ++i)
            if (i <= max_prefix && states[i] == states[L])
                fn(std::vector<LabelMask>(word.begin(), word.begin() + long(i)), std::vector<LabelMask>(word.begin() + long(i), word.end()));
        if (L >= max_prefix + max_cycle) return;
        for (const Edge& e : m.edges) {
            if (e.from != states.back()) continue;
            states.push_back(e.to);
            word.push_back(e.truth);
            walk();
            states.pop_back();
            word.pop_back();
        }
    };
    walk();
}

// One-player product of the toy model with the annotation; returns whether init wins.
inline bool product_wins(const ToyModel& m, const ParityAnnotation& ann)
{
    Game g;
    const size_t Z = ann.num_copies();
    for (size_t z = 0; z < Z; ++z)
        for (size_t q = 0; q < m.states; ++q) g.add_vertex(kP1, ann.colors[z]);
    for (size_t z = 0; z < Z; ++z)
        for (const Edge& e : m.edges) {
            const uint32_t z2 = ann.jump(uint32_t(z), exact(e.truth, m.atoms.size()));
            g.add_edge(uint32_t(z * m.states + e.from), uint32_t(z2 * m.states + e.to), 1);
        }
    g.finalize();
    return solve_parity(g).region(kP1)[ann.init_copy * m.states + m.init];
}

inline ToyModel random_model(std::mt19937_64& rng, size_t states, size_t atoms)
{
    ToyModel m;
    m.states = states;
    for (size_t i = 0; i < atoms; ++i) m.atoms.push_back(std::string(1, char('a' + i)));
    for (uint32_t q = 0; q < states; ++q) {
        const size_t k = 1 + rng() % 2;
        for (size_t i = 0; i < k; ++i) m.edges.push_back({q, uint32_t(rng() % states), LabelMask(rng() % (1u << atoms))});
    }
    return m;
}

inline std::string random_state_formula(std::mt19937_64& rng, const std::vector<std::string>& atoms)
{
    auto lit = [&]() { return (rng() % 3 == 0 ? "!" : "") + atoms[rng() % atoms.size()]; };
    switch (rng() % 4) {
    case 0: return lit();
    case 1: return "(" + lit() + " && " + lit() + ")";
    case 2: return "(" + lit() + " || " + lit() + ")";
    default: return lit();
    }
}

inline std::string random_spec(std::mt19937_64& rng, const std::vector<std::string>& atoms)
{
    static const char* ops[] = {"F", "G", "GF", "FG"};
    auto base = [&]() { return std::string(ops[rng() % 4]) + " " + random_state_formula(rng, atoms); };
    const char* comb[] = {" && ", " || "};
    switch (rng() % 3) {
    case 0: return base();
    case 1: return "(" + base() + ")" + comb[rng() % 2] + "(" + base() + ")";
    default: return "((" + base() + ")" + comb[rng() % 2] + "(" + base() + "))" + comb[rng() % 2] + "(" + base() + ")";
    }
}

} // namespace testing_lasso

#endif
