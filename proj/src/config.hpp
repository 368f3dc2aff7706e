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

#ifndef STSYNTH_CONFIG_HPP
#define STSYNTH_CONFIG_HPP

#include <memory>
#include <string>
#include <vector>

#include "abstraction.hpp"
#include "dynamics.hpp"
#include "quantize.hpp"
#include "rational.hpp"

namespace stsynth {

/// Parameters halved round-robin by the refinement loop, and their floors.
struct RefinementSchedule
{
    std::vector<std::string> order{"eta", "mu", "tau"};
    std::vector<double> eta_min;  // empty: eta / 2
    std::vector<double> mu_min;   // empty: mu / 2
    double tau_min = 0.0;         // zero: tau (no halving)
    int max_iterations = 8;
    double time_limit = 1800.0;   // seconds over all iterations
};

struct SimulationOptions
{
    int64_t steps = 500;
    uint64_t seed = 0;
    int64_t runs = 20;
    int64_t grace = 50;     // steps
    double burn_in = 0.1;   // fraction of the horizon
    double h = 0.0;         // sampling / integration step; zero: tau / 50
};

struct Config
{
    std::string model = "robot";  // robot | drift
    double speed = 2.5;
    std::vector<double> drift;    // drift model velocity
    double step = 0.0;            // integration step of generic plants; zero: tau / 50
    SystemSpec system;

    Quantization quant;
    std::vector<Predicate> predicates;
    std::string formula;
    Rational nu{0, 1};
    RefinementSchedule refinement;
    SimulationOptions simulation;
    unsigned jobs = 1;

    /// Every setting, defaults included, in a fixed layout.
    std::string canonical() const;
    std::string hash() const;

    std::unique_ptr<ControlSystem> make_system() const;
    std::unique_ptr<ControlSystem> make_system(const Quantization& q) const;
    PredicateSet predicate_set() const;
    void validate() const;
};

/// Arithmetic over numbers and pi: + - * / and parentheses.
double eval_expression(const std::string& text);

Config parse_config(const std::string& text);
Config load_config(const std::string& path);

/// The robot example with the experiment parameters.
Config robot_example_config();

} // namespace stsynth

#endif
