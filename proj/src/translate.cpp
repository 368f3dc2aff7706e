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

#include "translate.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "error.hpp"

namespace stsynth {

Rational payoff_threshold(const Rational& nu, double tau)
{
    if (!(tau > 0)) throw ConfigError("tau must be positive");
    // Continued fraction of tau with denominators up to 10^9.
    int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double x = tau;
    for (int i = 0; i < 64; ++i) {
        const double a = std::floor(x);
        if (a > 1e12) break;
        const int64_t ai = int64_t(a);
        const int64_t h2 = ai * h1 + h0, k2 = ai * k1 + k0;
        if (k2 > 1000000000) break;
        h0 = h1; h1 = h2; k0 = k1; k1 = k2;
        if (std::fabs(double(h1) / double(k1) - tau) <= 1e-12 * tau) break;
        const double frac = x - a;
        if (frac < 1e-15) break;
        x = 1.0 / frac;
    }
    if (k1 == 0 || std::fabs(double(h1) / double(k1) - tau) > 1e-12 * tau)
        throw ConfigError("tau is not a rational number with a small denominator");
    return nu / Rational(h1, k1);
}

Translation translate(const SymbolicModel& model, const ParityAnnotation& ann, const Rational& nu)
{
    const size_t Q = model.num_states(), S = model.num_signals(), Z = ann.num_copies();
    if (Q == 0 || S == 0) throw ConfigError("translate: empty model");
    const double tau = model.signals.signals[0].tau;

    Translation tr;
    Game& g = tr.game;
    GameMap& m = tr.map;
    m.num_copies = Z;
    m.num_states = Q;
    m.v1_.assign(Z * Q, -1);
    std::vector<int64_t> v2(Z * Q * S, -1);
    std::vector<int64_t> masks(model.num_transitions(), -1);
    g.threshold = payoff_threshold(nu, tau);
    g.scale = tau;

    std::deque<uint32_t> queue;
    auto v1_of = [&](uint32_t z, uint32_t q) {
        int64_t& id = m.v1_[size_t(z) * Q + q];
        if (id < 0) {
            id = g.add_vertex(kP1, ann.colors[z]);
            m.copy.push_back(z);
            m.state.push_back(q);
            m.signal.push_back(-1);
            queue.push_back(uint32_t(id));
        }
        return uint32_t(id);
    };
    auto v2_of = [&](uint32_t z, uint32_t q, uint32_t s) {
        int64_t& id = v2[(size_t(z) * Q + q) * S + s];
        if (id < 0) {
            id = g.add_vertex(kP2, ann.colors[z]);
            m.copy.push_back(z);
            m.state.push_back(q);
            m.signal.push_back(s);
            queue.push_back(uint32_t(id));
        }
        return uint32_t(id);
    };

    for (uint32_t q : model.initials) {
        const uint32_t v = v1_of(ann.init_copy, q);
        if (std::find(m.initial.begin(), m.initial.end(), v) == m.initial.end()) m.initial.push_back(v);
    }
    while (!queue.empty()) {
        const uint32_t v = queue.front();
        queue.pop_front();
        const uint32_t z = m.copy[v], q = m.state[v];
        if (m.signal[v] < 0) {
            for (uint32_t s = 0; s < S; ++s) {
                const auto [lo, hi] = model.range(q, s);
                if (lo == hi) continue;
                const uint32_t t = v2_of(z, q, s);
                g.add_edge(v, t, int64_t(model.signals.signals[s].segments()));
                m.label.push_back(s);
            }
        } else {
            const uint32_t s = uint32_t(m.signal[v]);
            const auto [lo, hi] = model.range(q, s);
            const int64_t pay = int64_t(model.signals.signals[s].segments());
            for (uint64_t k = lo; k < hi; ++k) {
                if (masks[k] < 0) masks[k] = ann.mask(model.labels(q, k));
                const uint32_t z2 = ann.jump(z, uint32_t(masks[k]));
                const uint32_t t = v1_of(z2, model.targets[k]);
                g.add_edge(v, t, pay);
                m.label.push_back(int64_t(k));
            }
        }
    }
    g.finalize();
    for (size_t v = 0; v < g.num_vertices(); ++v) (m.signal[v] < 0 ? tr.v1_count : tr.v2_count)++;
    return tr;
}

} // namespace stsynth
