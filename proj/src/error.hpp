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

#ifndef STSYNTH_ERROR_HPP
#define STSYNTH_ERROR_HPP

#include <stdexcept>
#include <string>

namespace stsynth {

/// Invalid or inconsistent user input (config file, CLI flags, dump files).
class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A checked invariant failed at runtime; indicates a bug or an unsound bound.
class InvariantError : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

/// Exact integer arithmetic would exceed the supported width.
class OverflowError : public std::overflow_error
{
public:
    OverflowError(const std::string& what, int required_bits)
        : std::overflow_error(what + " (requires " + std::to_string(required_bits) + "-bit integers)"),
          required_bits_(required_bits) {}
    int required_bits() const { return required_bits_; }
private:
    int required_bits_;
};

/// The controller was queried at a state outside its winning region.
class UncontrollableState : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace stsynth

#endif
