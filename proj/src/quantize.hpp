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

#ifndef STSYNTH_QUANTIZE_HPP
#define STSYNTH_QUANTIZE_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "dynamics.hpp"

namespace stsynth {

enum class PitchMode { Paper, Half };

struct Quantization
{
    std::vector<double> eta;  // per state axis radius
    std::vector<double> mu;   // per input axis pitch parameter
    double tau = 0.0;
    double ell_min = 0.0;
    double ell_max = 0.0;
    PitchMode pitch_mode = PitchMode::Half;

    /// Throws ConfigError unless positive, ordered, and ell bounds are multiples of tau.
    void validate(const SystemSpec& spec) const;
    size_t min_segments() const;
    size_t max_segments() const;
    /// Largest eta over non-wrapped axes (the scalar fed to the growth bounds).
    double eta_max(const SystemSpec& spec) const;
};

using GridIndex = std::vector<int64_t>;

/// Uniform grid of cell centres 2*eta*l whose eta-box meets the state box.
/// Wrapped axes hold exactly one period.
class StateGrid
{
public:
    StateGrid() = default;
    StateGrid(const SystemSpec& spec, const std::vector<double>& eta);

    size_t size() const { return size_; }
    size_t dims() const { return lo_.size(); }

    GridIndex index(size_t flat) const;
    State coords(size_t flat) const;
    State coords(const GridIndex& idx) const;
    /// Flat position of an index vector, or npos if outside the grid.
    size_t flat(const GridIndex& idx) const;
    /// Wrapped axes are reduced to their canonical period first.
    GridIndex canonical(GridIndex idx) const;

    const std::vector<double>& eta() const { return eta_; }
    int64_t axis_lo(size_t axis) const { return lo_[axis]; }
    int64_t axis_hi(size_t axis) const { return hi_[axis]; }
    bool axis_wrap(size_t axis) const { return wrap_[axis]; }

    /// Nearest grid point (ties toward the smaller index). Throws std::out_of_range outside the box.
    GridIndex project(std::span<const double> x) const;
    size_t project_flat(std::span<const double> x) const { return flat(project(x)); }

    /// Lines "i1 i2 ...\tc1 c2 ..." in flat order.
    void dump(std::ostream& os) const;

    static constexpr size_t npos = size_t(-1);

private:
    std::vector<Axis> box_;
    std::vector<double> eta_;
    std::vector<int64_t> lo_, hi_;
    std::vector<bool> wrap_;
    size_t size_ = 0;
};

/// U_mu: grid points of the input box, sorted by index vector.
std::vector<Input> input_grid(const std::vector<Axis>& input_box, const std::vector<double>& mu, PitchMode mode);

/// The finite signal set: every sequence of inputs with segment count in [jmin, jmax].
struct SignalTable
{
    std::vector<Input> inputs;
    std::vector<std::vector<uint32_t>> sequences;  // indices into inputs
    std::vector<ControlSignal> signals;

    size_t size() const { return signals.size(); }
};

SignalTable signal_set(const std::vector<Input>& inputs, double tau, size_t min_segments, size_t max_segments);

} // namespace stsynth

#endif
