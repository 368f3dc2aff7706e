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

#ifndef STSYNTH_TRANSLATE_HPP
#define STSYNTH_TRANSLATE_HPP

#include "abstraction.hpp"
#include "game.hpp"
#include "logic.hpp"

namespace stsynth {

/// Back-maps from game vertices and edges to the model and the annotation.
struct GameMap
{
    std::vector<uint32_t> copy;    // per vertex
    std::vector<uint32_t> state;   // per vertex, model state index
    std::vector<int64_t> signal;   // per vertex, -1 on Player-1 vertices
    std::vector<int64_t> label;    // per edge: signal index (Player-1 edges) or model transition (Player-2 edges)
    std::vector<uint32_t> initial; // vertices (init copy, q) for q in the model's initial cells
    size_t num_copies = 0;
    size_t num_states = 0;

    /// Player-1 vertex of (copy, q), or -1 if pruned.
    int64_t vertex(uint32_t z, uint32_t q) const { return v1_[size_t(z) * num_states + q]; }

    std::vector<int64_t> v1_;
};

struct Translation
{
    Game game;
    GameMap map;
    size_t v1_count = 0, v2_count = 0;
};

/// nu / tau as an exact fraction; tau must be a decimal or a fraction with a small denominator.
Rational payoff_threshold(const Rational& nu, double tau);

/**
 * Product of the model with the annotation. Player-1 vertices (z, q) pick a
 * signal, Player-2 vertices (z, q, s) pick a successor and jump copies on the
 * transition's labels. Both edges carry the signal's segment count. Only
 * vertices reachable from the initial cells are kept.
 */
Translation translate(const SymbolicModel& model, const ParityAnnotation& ann, const Rational& nu);

} // namespace stsynth

#endif
