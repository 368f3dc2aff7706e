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

#include "dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "error.hpp"

namespace stsynth {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTimeSlack = 1e-9;
} // namespace

bool SystemSpec::contains(std::span<const double> x) const
{
    for (size_t i = 0; i < state_box.size(); ++i) {
        if (state_box[i].wrap) continue;
        if (x[i] < state_box[i].lo || x[i] > state_box[i].hi) return false;
    }
    return true;
}

double SystemSpec::axis_distance(std::span<const double> a, std::span<const double> b, size_t axis) const
{
    double d = std::fabs(a[axis] - b[axis]);
    const Axis& ax = state_box[axis];
    if (ax.wrap) {
        d = std::fmod(d, ax.period());
        d = std::min(d, ax.period() - d);
    }
    return d;
}

double SystemSpec::distance(std::span<const double> a, std::span<const double> b) const
{
    double d = 0.0;
    for (size_t i = 0; i < state_box.size(); ++i) d = std::max(d, axis_distance(a, b, i));
    return d;
}

void SystemSpec::normalize(State& x) const
{
    for (size_t i = 0; i < state_box.size(); ++i) {
        const Axis& ax = state_box[i];
        if (!ax.wrap) continue;
        double r = std::fmod(x[i] - ax.lo, ax.period());
        if (r < 0) r += ax.period();
        if (r >= ax.period()) r = 0.0;
        x[i] = ax.lo + r;
    }
}

State ControlSystem::simulate_segment(const State& x, const Input& input, double lambda, double dt) const
{
    if (std::fabs(lambda) > spec_.lambda_bar + 1e-12)
        throw std::invalid_argument("disturbance value outside [-lambda_bar, lambda_bar]");
    if (dt < 0) throw std::invalid_argument("negative segment duration");
    return flow(x, input, lambda, dt);
}

void ControlSystem::check_time(const ControlSignal& u, double t) const
{
    if (t < -kTimeSlack || t > u.length() + kTimeSlack)
        throw std::invalid_argument("bound evaluated outside [0, len(u)]");
}

double f_omega(double omega, double t)
{
    double w = std::fabs(omega);
    if (w == 0.0) return 0.0;
    return std::floor(w * t / kPi) * (kPi - 2.0) / w;
}

RobotSystem::RobotSystem(SystemSpec spec, double speed) : ControlSystem(std::move(spec)), speed_(speed)
{
    if (!(speed_ > 0)) throw ConfigError("robot speed must be positive");
    if (this->spec().lambda_bar < 0 || this->spec().lambda_bar >= 1)
        throw ConfigError("robot lambda_bar must lie in [0, 1)");
    if (this->spec().n() != 3 || this->spec().m() != 1)
        throw ConfigError("robot model needs 3 state axes and 1 input axis");
}

State RobotSystem::flow(const State& x, const Input& input, double lambda, double dt) const
{
    const double s = speed_ * (1.0 + lambda);
    const double w = input[0];
    State out = x;
    if (std::fabs(w) < 1e-12) {
        out[0] += s * std::cos(x[2]) * dt;
        out[1] += s * std::sin(x[2]) * dt;
    } else {
        const double th = x[2] + w * dt;
        out[0] += s / w * (std::sin(th) - std::sin(x[2]));
        out[1] += s / w * (std::cos(x[2]) - std::cos(th));
        out[2] = th;
    }
    spec().normalize(out);
    return out;
}

double RobotSystem::effective_time(const ControlSignal& u, double t) const
{
    check_time(u, t);
    t = std::clamp(t, 0.0, u.length());
    size_t k = size_t(std::floor(t / u.tau + kTimeSlack));
    if (k >= u.segments()) k = u.segments() - 1;
    const double within = std::max(0.0, t - double(k) * u.tau);
    double credit = 0.0;
    for (size_t i = 0; i < k; ++i) credit += f_omega(u.inputs[i][0], u.tau);
    credit += f_omega(u.inputs[k][0], within);
    return double(k) * u.tau + within - credit;
}

double RobotSystem::beta_forward(const ControlSignal& u, double d, double t) const
{
    const double lb = spec().lambda_bar;
    const double te = effective_time(u, t);
    double r = d < kPi ? d + 2.0 * speed_ * (1.0 + lb) * std::sin(d / 2.0) * te
                       : d + 2.0 * speed_ * (1.0 + lb) * te;
    if (!spec().paper_beta) r += 2.0 * speed_ * lb * t;
    return r;
}

// The time-reversed unicycle is again a unicycle, so the same formulas apply.
double RobotSystem::beta_backward(const ControlSignal& u, double d, double t) const { return beta_forward(u, d, t); }

double RobotSystem::alpha_forward(const ControlSignal& u, double d, double t) const
{
    return d + speed_ * (1.0 + spec().lambda_bar) * effective_time(u, t);
}

double RobotSystem::alpha_backward(const ControlSignal& u, double d, double t) const { return alpha_forward(u, d, t); }

State rk4(const VectorField& field, const State& x, const Input& u, double lambda, double dt, double step)
{
    if (dt == 0.0) return x;
    const size_t steps = std::max<size_t>(1, size_t(std::ceil(std::fabs(dt) / step - 1e-12)));
    const double h = dt / double(steps);
    const size_t n = x.size();
    State y = x, k1(n), k2(n), k3(n), k4(n), tmp(n);
    for (size_t s = 0; s < steps; ++s) {
        field(y, u, lambda, k1);
        for (size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        field(tmp, u, lambda, k2);
        for (size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        field(tmp, u, lambda, k3);
        for (size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
        field(tmp, u, lambda, k4);
        for (size_t i = 0; i < n; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return y;
}

OdeSystem::OdeSystem(SystemSpec spec, VectorField field, Bounds bounds, double step)
    : ControlSystem(std::move(spec)), field_(std::move(field)), bounds_(std::move(bounds)), step_(step)
{
    if (!(step_ > 0)) throw ConfigError("integration step must be positive");
}

State OdeSystem::flow(const State& x, const Input& input, double lambda, double dt) const
{
    State out = rk4(field_, x, input, lambda, dt, step_);
    spec().normalize(out);
    return out;
}

double OdeSystem::beta_forward(const ControlSignal& u, double d, double t) const { check_time(u, t); return bounds_.beta_forward(u, d, t); }
double OdeSystem::beta_backward(const ControlSignal& u, double d, double t) const { check_time(u, t); return bounds_.beta_backward(u, d, t); }
double OdeSystem::alpha_forward(const ControlSignal& u, double d, double t) const { check_time(u, t); return bounds_.alpha_forward(u, d, t); }
double OdeSystem::alpha_backward(const ControlSignal& u, double d, double t) const { check_time(u, t); return bounds_.alpha_backward(u, d, t); }

std::unique_ptr<ControlSystem> make_drift_system(SystemSpec spec, std::vector<double> drift, double step)
{
    if (spec.n() != spec.m() || drift.size() != spec.n())
        throw ConfigError("drift model needs matching state, input and drift dimensions");
    const double lb = spec.lambda_bar;
    const bool literal = spec.paper_beta;
    auto field = [drift](const State&, const Input& u, double lambda, State& dx) {
        for (size_t i = 0; i < dx.size(); ++i) dx[i] = (1.0 + lambda) * (drift[i] + u[i]);
    };
    // Largest axis speed reached over the segments covering [0, t].
    auto peak = [drift](const ControlSignal& u, double t) {
        double s = 0.0;
        for (size_t k = 0; k < u.segments() && double(k) * u.tau <= t; ++k)
            for (size_t i = 0; i < drift.size(); ++i) s = std::max(s, std::fabs(drift[i] + u.inputs[k][i]));
        return s;
    };
    auto beta = [peak, lb, literal](const ControlSignal& u, double d, double t) {
        return literal ? d : d + 2.0 * lb * peak(u, t) * t;
    };
    auto alpha = [peak, lb](const ControlSignal& u, double d, double t) {
        return d + (1.0 + lb) * peak(u, t) * t;
    };
    return std::make_unique<OdeSystem>(std::move(spec), field, OdeSystem::Bounds{beta, beta, alpha, alpha}, step);
}

State sample_endpoint(const ControlSystem& sys, const State& x, const ControlSignal& u, std::mt19937_64& rng)
{
    const double lb = sys.spec().lambda_bar;
    std::uniform_real_distribution<double> dist(-lb, lb);
    State y = x;
    for (const Input& in : u.inputs) {
        const double lambda = lb > 0 ? dist(rng) : 0.0;
        y = sys.flow(y, in, lambda, u.tau);
    }
    return y;
}

State sample_endpoint(const ControlSystem& sys, const State& x, const ControlSignal& u, uint64_t seed)
{
    std::mt19937_64 rng(seed);
    return sample_endpoint(sys, x, u, rng);
}

State nominal_endpoint(const ControlSystem& sys, const State& x, const ControlSignal& u)
{
    if (u.segments() == 0) throw std::invalid_argument("empty control signal");
    State y = x;
    for (const Input& in : u.inputs) y = sys.flow(y, in, 0.0, u.tau);
    return y;
}

State nominal_backpoint(const ControlSystem& sys, const State& x, const ControlSignal& u)
{
    if (u.segments() == 0) throw std::invalid_argument("empty control signal");
    State y = x;
    for (auto it = u.inputs.rbegin(); it != u.inputs.rend(); ++it) y = sys.flow(y, *it, 0.0, -u.tau);
    return y;
}

} // namespace stsynth
