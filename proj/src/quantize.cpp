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

#include "quantize.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "error.hpp"
#include "textio.hpp"

namespace stsynth {

namespace {
constexpr double kEps = 1e-9;

bool is_multiple(double value, double unit)
{
    const double r = value / unit;
    return std::fabs(r - std::round(r)) < 1e-6;
}
} // namespace

void Quantization::validate(const SystemSpec& spec) const
{
    if (eta.size() != spec.n()) throw ConfigError("eta needs one entry per state axis");
    if (mu.size() != spec.m()) throw ConfigError("mu needs one entry per input axis");
    for (double e : eta) if (!(e > 0)) throw ConfigError("eta entries must be positive");
    for (double e : mu) if (!(e > 0)) throw ConfigError("mu entries must be positive");
    if (!(tau > 0)) throw ConfigError("tau must be positive");
    if (!(ell_min <= ell_max)) throw ConfigError("ell_min must not exceed ell_max");
    if (ell_min < tau - kEps) throw ConfigError("ell_min must be at least tau");
    if (!is_multiple(ell_min, tau) || !is_multiple(ell_max, tau))
        throw ConfigError("ell_min and ell_max must be integer multiples of tau");
}

size_t Quantization::min_segments() const { return size_t(std::llround(ell_min / tau)); }
size_t Quantization::max_segments() const { return size_t(std::llround(ell_max / tau)); }

double Quantization::eta_max(const SystemSpec& spec) const
{
    double m = 0.0;
    for (size_t i = 0; i < eta.size(); ++i)
        if (!spec.state_box[i].wrap) m = std::max(m, eta[i]);
    if (m == 0.0)  // every axis wrapped
        for (double e : eta) m = std::max(m, e);
    return m;
}

StateGrid::StateGrid(const SystemSpec& spec, const std::vector<double>& eta)
    : box_(spec.state_box), eta_(eta)
{
    const size_t n = box_.size();
    if (eta.size() != n) throw ConfigError("eta needs one entry per state axis");
    lo_.resize(n);
    hi_.resize(n);
    wrap_.resize(n);
    size_ = 1;
    for (size_t i = 0; i < n; ++i) {
        const Axis& ax = box_[i];
        const double pitch = 2.0 * eta[i];
        wrap_[i] = ax.wrap;
        if (ax.wrap) {
            if (!is_multiple(ax.period(), pitch))
                throw ConfigError("wrapped axis period must be a multiple of 2*eta");
            lo_[i] = int64_t(std::ceil(ax.lo / pitch - kEps));
            hi_[i] = lo_[i] + int64_t(std::llround(ax.period() / pitch)) - 1;
        } else {
            lo_[i] = int64_t(std::ceil((ax.lo - eta[i]) / pitch - kEps));
            hi_[i] = int64_t(std::floor((ax.hi + eta[i]) / pitch + kEps));
        }
        if (hi_[i] < lo_[i]) throw ConfigError("empty state grid");
        size_ *= size_t(hi_[i] - lo_[i] + 1);
    }
}

GridIndex StateGrid::index(size_t flat) const
{
    GridIndex idx(dims());
    for (size_t i = dims(); i-- > 0;) {
        const size_t count = size_t(hi_[i] - lo_[i] + 1);
        idx[i] = lo_[i] + int64_t(flat % count);
        flat /= count;
    }
    return idx;
}

State StateGrid::coords(const GridIndex& idx) const
{
    State x(dims());
    for (size_t i = 0; i < dims(); ++i) x[i] = 2.0 * eta_[i] * double(idx[i]);
    return x;
}

State StateGrid::coords(size_t flat) const { return coords(index(flat)); }

GridIndex StateGrid::canonical(GridIndex idx) const
{
    for (size_t i = 0; i < dims(); ++i) {
        if (!wrap_[i]) continue;
        const int64_t count = hi_[i] - lo_[i] + 1;
        int64_t r = (idx[i] - lo_[i]) % count;
        if (r < 0) r += count;
        idx[i] = lo_[i] + r;
    }
    return idx;
}

size_t StateGrid::flat(const GridIndex& raw) const
{
    const GridIndex idx = canonical(raw);
    size_t f = 0;
    for (size_t i = 0; i < dims(); ++i) {
        if (idx[i] < lo_[i] || idx[i] > hi_[i]) return npos;
        f = f * size_t(hi_[i] - lo_[i] + 1) + size_t(idx[i] - lo_[i]);
    }
    return f;
}

GridIndex StateGrid::project(std::span<const double> x) const
{
    GridIndex idx(dims());
    for (size_t i = 0; i < dims(); ++i) {
        const Axis& ax = box_[i];
        if (!ax.wrap && (x[i] < ax.lo - kEps || x[i] > ax.hi + kEps))
            throw std::out_of_range("state outside the state box");
        // round half toward the smaller index
        idx[i] = int64_t(std::ceil(x[i] / (2.0 * eta_[i]) - 0.5));
    }
    return canonical(idx);
}

void StateGrid::dump(std::ostream& os) const
{
    for (size_t f = 0; f < size_; ++f) {
        const GridIndex idx = index(f);
        const State c = coords(idx);
        for (size_t i = 0; i < idx.size(); ++i) os << (i ? " " : "") << idx[i];
        os << '\t';
        for (size_t i = 0; i < c.size(); ++i) os << (i ? " " : "") << format_double(c[i]);
        os << '\n';
    }
}

std::vector<Input> input_grid(const std::vector<Axis>& input_box, const std::vector<double>& mu, PitchMode mode)
{
    if (mu.size() != input_box.size()) throw ConfigError("mu needs one entry per input axis");
    std::vector<std::vector<double>> axis_values(input_box.size());
    for (size_t i = 0; i < input_box.size(); ++i) {
        if (!(mu[i] > 0)) throw ConfigError("mu entries must be positive");
        const double pitch = mode == PitchMode::Paper ? 2.0 * mu[i] : mu[i];
        const int64_t lo = int64_t(std::ceil(input_box[i].lo / pitch - kEps));
        const int64_t hi = int64_t(std::floor(input_box[i].hi / pitch + kEps));
        for (int64_t l = lo; l <= hi; ++l) axis_values[i].push_back(pitch * double(l));
        if (axis_values[i].empty()) throw ConfigError("quantized input set is empty");
    }
    std::vector<Input> out{Input{}};
    for (const auto& vals : axis_values) {
        std::vector<Input> next;
        for (const Input& prefix : out)
            for (double v : vals) {
                Input in = prefix;
                in.push_back(v);
                next.push_back(std::move(in));
            }
        out = std::move(next);
    }
    return out;
}

SignalTable signal_set(const std::vector<Input>& inputs, double tau, size_t min_segments, size_t max_segments)
{
    SignalTable table;
    table.inputs = inputs;
    if (inputs.empty() || min_segments == 0 || min_segments > max_segments) return table;
    for (size_t j = min_segments; j <= max_segments; ++j) {
        std::vector<uint32_t> seq(j, 0);
        while (true) {
            ControlSignal sig;
            sig.tau = tau;
            for (uint32_t k : seq) sig.inputs.push_back(inputs[k]);
            table.sequences.push_back(seq);
            table.signals.push_back(std::move(sig));
            // odometer increment, last position fastest
            size_t pos = j;
            while (pos > 0) {
                --pos;
                if (++seq[pos] < inputs.size()) break;
                seq[pos] = 0;
                if (pos == 0) { pos = size_t(-1); break; }
            }
            if (pos == size_t(-1)) break;
        }
    }
    return table;
}

} // namespace stsynth
