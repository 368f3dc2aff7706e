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

#ifndef STSYNTH_LOGIC_HPP
#define STSYNTH_LOGIC_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "abstraction.hpp"

namespace stsynth {

enum class Tri { False, True, Unknown };

/// State formula over atomic propositions: true | atom | not | or.
struct StateFormula
{
    enum class Kind { True, Atom, Not, Or };

    Kind kind = Kind::True;
    std::string atom;
    int atom_index = -1;  // set by bind()
    std::vector<StateFormula> args;

    static StateFormula truth() { return {}; }
    static StateFormula make_atom(std::string name);
    static StateFormula make_not(StateFormula a);
    static StateFormula make_or(StateFormula a, StateFormula b);
    static StateFormula make_and(StateFormula a, StateFormula b);

    /// Resolves atom names against the sorted predicate names; throws ConfigError on unknown atoms.
    void bind(const std::vector<std::string>& names);
    bool holds(LabelMask truth) const;  // two-valued, all atoms known
    std::string str() const;
};

/// Path formula: F, G, GF, FG of a state formula, or boolean combinations of those.
struct PathFormula
{
    enum class Kind { F, G, GF, FG, Or, And };

    Kind kind = Kind::GF;
    StateFormula phi;
    std::vector<PathFormula> args;

    bool is_base() const { return kind != Kind::Or && kind != Kind::And; }
    std::string str() const;
};

PathFormula parse_spec(const std::string& text);

Tri eval_three_valued(const StateFormula& phi, const LabelPair& pair);

enum class SatMode { Exists, Forall };

/// Exists: some pair evaluates true. Forall: the single universal pair evaluates true.
bool sat(const TransitionLabels& labels, const StateFormula& phi, SatMode mode);

/**
 * Deterministic parity annotation of a path formula.
 *
 * A transition is summarised by one bit per base subformula (sat over the
 * existential pairs for F/GF, over the universal pair for G/FG); jump is a
 * table indexed by copy and that bitmask.
 */
struct ParityAnnotation
{
    std::string formula;
    std::vector<PathFormula> bases;
    std::vector<std::string> copy_names;
    std::vector<int> colors;
    uint32_t init_copy = 0;
    std::vector<uint32_t> jump_table;  // copy * 2^bases + mask

    size_t num_copies() const { return colors.size(); }
    size_t num_masks() const { return size_t(1) << bases.size(); }
    int max_color() const;

    uint32_t mask(const TransitionLabels& labels) const;
    uint32_t jump(uint32_t copy, uint32_t mask) const { return jump_table[copy * num_masks() + mask]; }
    uint32_t jump(uint32_t copy, const TransitionLabels& labels) const { return jump(copy, mask(labels)); }

    void bind(const std::vector<std::string>& names);
    void save(std::ostream& os) const;
    /// Recompiles the stored formula and checks the tables against the file.
    static ParityAnnotation load(std::istream& is);
};

/// Base formulas use the direct constructions; combinations go through a latest-appearance record.
ParityAnnotation compile_parity(const PathFormula& phi);

} // namespace stsynth

#endif
