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

#ifndef STSYNTH_ABSTRACTION_HPP
#define STSYNTH_ABSTRACTION_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dynamics.hpp"
#include "quantize.hpp"

namespace stsynth {

/// Atomic proposition over states: halfspace a.x > b, or a closed box.
struct Predicate
{
    enum class Kind { Halfspace, Box };

    std::string name;
    Kind kind = Kind::Halfspace;
    std::vector<double> coeffs;  // halfspace normal a
    double offset = 0.0;         // halfspace offset b
    std::vector<Axis> box;       // box bounds per state axis (infinite bounds allowed)

    bool holds(const SystemSpec& spec, std::span<const double> x) const;
    /// Holds at every point of the box ball of per-axis radius r around x.
    bool holds_on_ball(const SystemSpec& spec, std::span<const double> x, std::span<const double> r) const;
    /// Fails at every point of that ball.
    bool fails_on_ball(const SystemSpec& spec, std::span<const double> x, std::span<const double> r) const;
};

/// Predicates sorted by name; bit i of a label mask refers to predicates[i].
class PredicateSet
{
public:
    PredicateSet() = default;
    PredicateSet(std::vector<Predicate> preds, const SystemSpec& spec);

    size_t size() const { return preds_.size(); }
    const Predicate& operator[](size_t i) const { return preds_[i]; }
    const std::vector<Predicate>& all() const { return preds_; }
    /// Bit position of a name, or -1.
    int find(const std::string& name) const;
    std::vector<std::string> names() const;

private:
    std::vector<Predicate> preds_;
};

using LabelMask = uint64_t;

/// (P+, P-): propositions known to hold / known to fail.
struct LabelPair
{
    LabelMask pos = 0;
    LabelMask neg = 0;
    friend bool operator==(const LabelPair&, const LabelPair&) = default;
    friend auto operator<=>(const LabelPair&, const LabelPair&) = default;
};

LabelMask b_plus(const SystemSpec& spec, std::span<const double> x, std::span<const double> r, const PredicateSet& preds);
LabelMask b_minus(const SystemSpec& spec, std::span<const double> x, std::span<const double> r, const PredicateSet& preds);

/// Both sets at once.
LabelPair ball_labels(const SystemSpec& spec, std::span<const double> x, std::span<const double> r, const PredicateSet& preds);

/// Labels of one symbolic transition: one existential pair per endpoint and the universal pair.
struct TransitionLabels
{
    std::vector<LabelPair> rho_exists;
    LabelPair rho_forall;
};

bool stays_inside(const ControlSystem& sys, const State& q, const ControlSignal& u, double eta_max);

/// Grid successors of (q, u) per the forward and backward distance conditions. Empty if
/// stays_inside fails.
std::vector<uint32_t> successors(const ControlSystem& sys, const StateGrid& grid, size_t q,
                                 const ControlSignal& u, double eta_max);

TransitionLabels label_transition(const ControlSystem& sys, const StateGrid& grid, size_t q,
                                  const ControlSignal& u, size_t q_next, const PredicateSet& preds,
                                  double eta_max);

/**
 * Finite symbolic model over grid cells.
 *
 * Transitions of (q, signal s) are stored in CSR form at slot q * signals + s.
 * The universal labels are interned in forall_pool.
 */
struct SymbolicModel
{
    std::vector<Axis> state_box;
    StateGrid grid;
    std::vector<uint32_t> initials;
    SignalTable signals;
    std::vector<std::string> predicate_names;
    std::vector<LabelPair> state_pairs;  // B+/B- of each cell at radius eta
    std::vector<uint64_t> offsets;
    std::vector<uint32_t> targets;
    std::vector<uint32_t> forall_ids;
    std::vector<LabelPair> forall_pool;
    std::string config_hash;
    std::vector<std::string> warnings;

    size_t num_states() const { return grid.size(); }
    size_t num_signals() const { return signals.size(); }
    size_t num_transitions() const { return targets.size(); }
    size_t slot(size_t q, size_t s) const { return q * num_signals() + s; }

    /// Indices into targets/forall_ids for (q, s).
    std::pair<uint64_t, uint64_t> range(size_t q, size_t s) const
    {
        const size_t k = slot(q, s);
        return {offsets[k], offsets[k + 1]};
    }

    TransitionLabels labels(size_t q, uint64_t transition) const;

    void save(std::ostream& os) const;
    static SymbolicModel load(std::istream& is);
};

struct BuildOptions
{
    unsigned jobs = 1;
};

SymbolicModel build_symbolic_model(const ControlSystem& sys, const Quantization& quant,
                                   const PredicateSet& preds, const BuildOptions& options = {});

std::string format_label_pair(const LabelPair& pair, const std::vector<std::string>& names);
LabelPair parse_label_pair(const std::string& text, const std::vector<std::string>& names);

} // namespace stsynth

#endif
