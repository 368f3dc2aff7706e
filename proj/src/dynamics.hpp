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

#ifndef STSYNTH_DYNAMICS_HPP
#define STSYNTH_DYNAMICS_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <span>
#include <vector>

namespace stsynth {

using State = std::vector<double>;
using Input = std::vector<double>;

/// Closed interval on one state or input axis. Wrapped axes are circular with
/// period hi - lo.
struct Axis
{
    double lo = 0.0;
    double hi = 0.0;
    bool wrap = false;

    double period() const { return hi - lo; }
};

/// Piecewise-constant control signal: inputs[k] is held on [k*tau, (k+1)*tau).
struct ControlSignal
{
    std::vector<Input> inputs;
    double tau = 0.0;

    size_t segments() const { return inputs.size(); }
    double length() const { return double(inputs.size()) * tau; }
};

struct SystemSpec
{
    std::vector<Axis> state_box;
    std::vector<Axis> input_box;
    std::vector<State> init_states;
    double lambda_bar = 0.0;  // disturbance half-width
    bool paper_beta = false;  // drop the disturbance correction from the forward/backward bounds

    size_t n() const { return state_box.size(); }
    size_t m() const { return input_box.size(); }

    bool contains(std::span<const double> x) const;
    /// Per-axis distance; circular on wrapped axes.
    double axis_distance(std::span<const double> a, std::span<const double> b, size_t axis) const;
    /// Infinity norm of a - b using axis_distance.
    double distance(std::span<const double> a, std::span<const double> b) const;
    /// Reduce wrapped coordinates into [lo, hi).
    void normalize(State& x) const;
};

/**
 * Continuous plant with growth bounds.
 *
 * flow() integrates one constant-input segment under a constant disturbance
 * value; negative dt integrates the time-reversed dynamics. The four bound
 * functions take the full signal, a scalar start distance d and an elapsed
 * time t in [0, len(u)].
 */
class ControlSystem
{
public:
    explicit ControlSystem(SystemSpec spec) : spec_(std::move(spec)) {}
    virtual ~ControlSystem() = default;

    const SystemSpec& spec() const { return spec_; }
    SystemSpec& mutable_spec() { return spec_; }

    virtual State flow(const State& x, const Input& input, double lambda, double dt) const = 0;

    virtual double beta_forward(const ControlSignal& u, double d, double t) const = 0;
    virtual double beta_backward(const ControlSignal& u, double d, double t) const = 0;
    virtual double alpha_forward(const ControlSignal& u, double d, double t) const = 0;
    virtual double alpha_backward(const ControlSignal& u, double d, double t) const = 0;

    /// One segment with the disturbance bound checked.
    State simulate_segment(const State& x, const Input& input, double lambda, double dt) const;

protected:
    void check_time(const ControlSignal& u, double t) const;

private:
    SystemSpec spec_;
};

/// ⌊|ω| t / π⌋ (π - 2) / |ω|, zero for ω = 0.
double f_omega(double omega, double t);

/**
 * Unicycle with uncertain speed: x' = v(1+λ)cos θ, y' = v(1+λ)sin θ, θ' = ω.
 * State (x, y, θ) with θ wrapped; one input ω.
 */
class RobotSystem : public ControlSystem
{
public:
    RobotSystem(SystemSpec spec, double speed);

    double speed() const { return speed_; }

    State flow(const State& x, const Input& input, double lambda, double dt) const override;

    double beta_forward(const ControlSignal& u, double d, double t) const override;
    double beta_backward(const ControlSignal& u, double d, double t) const override;
    double alpha_forward(const ControlSignal& u, double d, double t) const override;
    double alpha_backward(const ControlSignal& u, double d, double t) const override;

    /// Elapsed time minus the accumulated f_omega credit of the turning segments.
    double effective_time(const ControlSignal& u, double t) const;

private:
    double speed_;
};

/// Right-hand side f(x, u, λ) of a generic ODE plant.
using VectorField = std::function<void(const State& x, const Input& u, double lambda, State& dx)>;
using BoundFunction = std::function<double(const ControlSignal& u, double d, double t)>;

/// Generic plant integrated with fixed-step RK4; growth bounds are supplied by the user.
class OdeSystem : public ControlSystem
{
public:
    struct Bounds
    {
        BoundFunction beta_forward, beta_backward, alpha_forward, alpha_backward;
    };

    OdeSystem(SystemSpec spec, VectorField field, Bounds bounds, double step);

    State flow(const State& x, const Input& input, double lambda, double dt) const override;

    double beta_forward(const ControlSignal& u, double d, double t) const override;
    double beta_backward(const ControlSignal& u, double d, double t) const override;
    double alpha_forward(const ControlSignal& u, double d, double t) const override;
    double alpha_backward(const ControlSignal& u, double d, double t) const override;

private:
    VectorField field_;
    Bounds bounds_;
    double step_;
};

/// Constant drift plant x' = (1+λ)(c + u), n = m. β(d,t) = d; α grows with the largest speed.
std::unique_ptr<ControlSystem> make_drift_system(SystemSpec spec, std::vector<double> drift, double step);

/// Fixed-step classical RK4 over [0, dt] (dt may be negative).
State rk4(const VectorField& field, const State& x, const Input& u, double lambda, double dt, double step);

/// Chains segments of u from x with a fresh λ ~ U[-λ̄, λ̄] per segment.
State sample_endpoint(const ControlSystem& sys, const State& x, const ControlSignal& u, std::mt19937_64& rng);
State sample_endpoint(const ControlSystem& sys, const State& x, const ControlSignal& u, uint64_t seed);

/// Undisturbed (λ ≡ 0) endpoint after the whole signal.
State nominal_endpoint(const ControlSystem& sys, const State& x, const ControlSignal& u);
/// Undisturbed backward integration of u from its endpoint x.
State nominal_backpoint(const ControlSystem& sys, const State& x, const ControlSignal& u);

} // namespace stsynth

#endif
