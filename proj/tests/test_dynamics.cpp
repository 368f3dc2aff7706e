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

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "config.hpp"
#include "dynamics.hpp"
#include "error.hpp"
#include "quantize.hpp"

using namespace stsynth;

namespace {

const double kPi = std::acos(-1.0);

SystemSpec robot_spec(double lambda_bar = 0.05, bool paper_beta = false)
{
    SystemSpec s;
    s.state_box = {{-6, 6, false}, {-6, 6, false}, {0, 2 * kPi, true}};
    s.input_box = {{-kPi / 2, kPi / 2, false}};
    s.init_states = {{0, 0, kPi / 4}};
    s.lambda_bar = lambda_bar;
    s.paper_beta = paper_beta;
    return s;
}

ControlSignal signal(std::vector<double> w, double tau = 0.5)
{
    ControlSignal u;
    u.tau = tau;
    for (double x : w) u.inputs.push_back({x});
    return u;
}

// Unicycle arc written out independently: heading integrates to th + w t.
State arc(const State& x, double w, double speed, double t)
{
    if (w == 0) return {x[0] + speed * std::cos(x[2]) * t, x[1] + speed * std::sin(x[2]) * t, x[2]};
    const double r = speed / w;
    double th = std::fmod(x[2] + w * t, 2 * kPi);
    if (th < 0) th += 2 * kPi;
    return {x[0] + r * (std::sin(x[2] + w * t) - std::sin(x[2])), x[1] - r * (std::cos(x[2] + w * t) - std::cos(x[2])), th};
}

} // namespace

TEST_SUITE("dynamics")
{
    TEST_CASE("f_omega examples")
    {
        CHECK(f_omega(0, 5) == 0.0);
        CHECK(f_omega(kPi / 2, 0.5) == 0.0);
        CHECK(f_omega(kPi / 2, 2) == doctest::Approx(2 * (kPi - 2) / kPi).epsilon(1e-12));
        CHECK(f_omega(kPi / 2, 2) == doctest::Approx(0.72676).epsilon(1e-5));
    }

    TEST_CASE("beta and alpha closed forms [DERIVED]")
    {
        RobotSystem off(robot_spec(0.05, true), 2.5), on(robot_spec(0.05, false), 2.5);
        const ControlSignal u = signal({0});
        CHECK(off.beta_forward(u, 0, 0.5) == 0.0);
        CHECK(off.beta_forward(u, 1, 0.5) == doctest::Approx(1 + 5.25 * std::sin(0.5) * 0.5).epsilon(1e-12));
        CHECK(off.beta_forward(u, 1, 0.5) == doctest::Approx(2.25850).epsilon(1e-5));
        CHECK(on.beta_forward(u, 0, 0.5) == doctest::Approx(0.125).epsilon(1e-12));
        CHECK(off.alpha_forward(u, 0, 0) == 0.0);
        CHECK(off.alpha_forward(u, 1, 0.5) == doctest::Approx(2.3125).epsilon(1e-12));
        CHECK(off.alpha_forward(u, 2, 0.5) == doctest::Approx(3.3125).epsilon(1e-12));
        // backward bounds mirror the forward ones for the unicycle
        for (double d : {0.0, 1.0, 2.0}) {
            CHECK(on.beta_backward(u, d, 0.5) == on.beta_forward(u, d, 0.5));
            CHECK(on.alpha_backward(u, d, 0.5) == on.alpha_forward(u, d, 0.5));
        }
        CHECK_THROWS(on.beta_forward(u, 1, 0.6));
    }

    TEST_CASE("bounds are monotone in the distance")
    {
        RobotSystem sys(robot_spec(), 2.5);
        for (const auto& u : {signal({0}), signal({kPi / 2, -kPi / 2}), signal({kPi / 2, kPi / 2})}) {
            for (double t = 0; t <= u.length() + 1e-12; t += u.tau / 4) {
                double pb = -1, pa = -1;
                for (double d = 0; d <= 8; d += 0.05) {
                    const double b = sys.beta_forward(u, d, t), a = sys.alpha_forward(u, d, t);
                    CHECK(b >= pb - 1e-12);
                    CHECK(a >= pa - 1e-12);
                    pb = b;
                    pa = a;
                }
            }
        }
    }

    TEST_CASE("simulate_segment closed forms [DERIVED]")
    {
        RobotSystem sys(robot_spec(), 2.5);
        State a = sys.simulate_segment({0, 0, 0}, {0}, 0, 0.5);
        CHECK(a[0] == doctest::Approx(1.25));
        CHECK(a[1] == doctest::Approx(0).epsilon(1e-12));
        State b = sys.simulate_segment({0, 0, 0}, {kPi / 2}, 0, 1);
        CHECK(b[0] == doctest::Approx(5 / kPi).epsilon(1e-12));
        CHECK(b[1] == doctest::Approx(5 / kPi).epsilon(1e-12));
        CHECK(b[2] == doctest::Approx(kPi / 2).epsilon(1e-12));
        State c = sys.simulate_segment({0, 0, 0}, {0}, 0.05, 1);
        CHECK(c[0] == doctest::Approx(2.625));
        CHECK_THROWS_AS(sys.simulate_segment({0, 0, 0}, {0}, 0.06, 1), std::invalid_argument);
    }

    TEST_CASE("arc closed form agrees with fourth-order integration")
    {
        RobotSystem sys(robot_spec(), 2.5);
        VectorField f = [](const State& x, const Input& u, double lambda, State& dx) {
            dx[0] = 2.5 * (1 + lambda) * std::cos(x[2]);
            dx[1] = 2.5 * (1 + lambda) * std::sin(x[2]);
            dx[2] = u[0];
        };
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> pos(-3, 3), ang(0, 2 * kPi), lam(-0.05, 0.05);
        for (int i = 0; i < 200; ++i) {
            const State x{pos(rng), pos(rng), ang(rng)};
            const double w = std::vector<double>{-kPi / 2, 0, kPi / 2, 0.3}[size_t(i % 4)];
            const double l = lam(rng);
            const State exact = sys.flow(x, {w}, l, 0.5);
            State num = rk4(f, x, {w}, l, 0.5, 0.5 / 400);
            sys.spec().normalize(num);
            for (size_t k = 0; k < 3; ++k) CHECK(sys.spec().axis_distance(exact, num, k) < 1e-8);
            // and the independent formula in this file
            const State ref = arc(x, w, 2.5 * (1 + l), 0.5);
            for (size_t k = 0; k < 3; ++k) CHECK(sys.spec().axis_distance(exact, ref, k) < 1e-9);
        }
    }

    TEST_CASE("circular distance on the heading axis")
    {
        const SystemSpec s = robot_spec();
        CHECK(s.axis_distance(State{0, 0, 0.1}, State{0, 0, 2 * kPi - 0.1}, 2) == doctest::Approx(0.2));
        CHECK(s.distance(State{0, 0, 0.1}, State{0, 0, 2 * kPi - 0.1}) == doctest::Approx(0.2));
    }

    TEST_CASE("sample_endpoint determinism and spread")
    {
        RobotSystem calm(robot_spec(0.0), 2.5), windy(robot_spec(0.05), 2.5);
        const ControlSignal u = signal({0});
        const State e = sample_endpoint(calm, {0, 0, 0}, u, uint64_t(5));
        CHECK(e[0] == doctest::Approx(1.25));
        const ControlSignal u2 = signal({kPi / 2, 0});
        CHECK(sample_endpoint(windy, {0, 0, 1}, u2, uint64_t(9)) == sample_endpoint(windy, {0, 0, 1}, u2, uint64_t(9)));
        const State nominal = nominal_endpoint(windy, {0, 0, 1}, u2);
        double worst = 0;
        for (uint64_t s = 0; s < 10000; ++s) worst = std::max(worst, windy.spec().distance(sample_endpoint(windy, {0, 0, 1}, u2, s), nominal));
        CHECK(worst <= 2 * 2.5 * 0.05 * u2.length() + 1e-9);
        CHECK(worst > 0);
    }

    TEST_CASE("growth bounds hold on random pairs (corrected bound)")
    {
        RobotSystem sys(robot_spec(0.05), 2.5);
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> pos(-4, 4), ang(0, 2 * kPi), off(-1, 1);
        const std::vector<double> ws{-kPi / 2, 0, kPi / 2};
        size_t bad = 0;
        for (int i = 0; i < 2000; ++i) {
            const State x1{pos(rng), pos(rng), ang(rng)};
            State x2{x1[0] + off(rng), x1[1] + off(rng), x1[2] + off(rng) * kPi / 8};
            sys.spec().normalize(x2);
            ControlSignal u = signal({ws[rng() % 3], ws[rng() % 3]});
            const double d = sys.spec().distance(x1, x2);
            std::mt19937_64 r1(rng()), r2(rng());
            std::uniform_real_distribution<double> lam(-0.05, 0.05);
            State y1 = x1, y2 = x2;
            for (size_t k = 0; k < u.segments(); ++k) {
                y1 = sys.flow(y1, u.inputs[k], lam(r1), u.tau);
                y2 = sys.flow(y2, u.inputs[k], lam(r2), u.tau);
                const double t = double(k + 1) * u.tau;
                if (sys.spec().distance(y1, y2) > sys.beta_forward(u, d, t) + 1e-6) ++bad;
                if (sys.spec().distance(x1, y2) > sys.alpha_forward(u, d, t) + 1e-6) ++bad;
            }
        }
        CHECK(bad == 0);
    }

    TEST_CASE("drift model uses fourth-order integration")
    {
        SystemSpec s;
        s.state_box = {{-3, 3, false}};
        s.input_box = {{-1, 1, false}};
        s.lambda_bar = 0.1;
        auto sys = make_drift_system(s, {0.5}, 0.01);
        const State y = sys->flow({0}, {1}, 0.1, 2);
        CHECK(y[0] == doctest::Approx(1.5 * 1.1 * 2).epsilon(1e-12));
        ControlSignal u = signal({1}, 0.5);
        u.inputs = {{1}};
        CHECK(sys->beta_forward(u, 0.2, 0.5) == doctest::Approx(0.2 + 2 * 0.1 * 1.5 * 0.5));
    }
}

TEST_SUITE("quantize")
{
    TEST_CASE("input grid in both pitch modes [DERIVED]")
    {
        const std::vector<Axis> U{{-kPi / 2, kPi / 2, false}};
        const auto literal = input_grid(U, {kPi / 2}, PitchMode::Paper);
        REQUIRE(literal.size() == 1);
        CHECK(literal[0][0] == 0.0);
        const auto half = input_grid(U, {kPi / 2}, PitchMode::Half);
        REQUIRE(half.size() == 3);
        CHECK(half[0][0] == doctest::Approx(-kPi / 2));
        CHECK(half[1][0] == 0.0);
        CHECK(half[2][0] == doctest::Approx(kPi / 2));
        const auto p2 = input_grid({{-1, 1, false}}, {0.5}, PitchMode::Paper);
        REQUIRE(p2.size() == 3);
        CHECK(p2[0][0] == -1.0);
        CHECK(p2[2][0] == 1.0);
    }

    TEST_CASE("state grid counts [DERIVED]")
    {
        SystemSpec line;
        line.state_box = {{-6, 6, false}};
        StateGrid g1(line, {1});
        REQUIRE(g1.size() == 7);
        for (size_t i = 0; i < 7; ++i) CHECK(g1.coords(i)[0] == doctest::Approx(-6.0 + 2.0 * double(i)));
        SystemSpec ring;
        ring.state_box = {{0, 2 * kPi, true}};
        StateGrid g2(ring, {kPi / 8});
        REQUIRE(g2.size() == 8);
        std::set<double> seen;
        for (size_t i = 0; i < 8; ++i) seen.insert(std::round(g2.coords(i)[0] / (kPi / 4) * 1e9) / 1e9);
        CHECK(seen == std::set<double>{0, 1, 2, 3, 4, 5, 6, 7});
        StateGrid g3(robot_spec(), {1, 1, kPi / 8});
        CHECK(g3.size() == 392);
    }

    TEST_CASE("signal set counts [DERIVED]")
    {
        const std::vector<Input> three{{-1}, {0}, {1}};
        const SignalTable a = signal_set(three, 0.5, 1, 2);
        CHECK(a.size() == 12);
        for (size_t i = 0; i < a.size(); ++i) {
            CHECK(a.signals[i].length() >= 0.5);
            CHECK(a.signals[i].length() <= 1.0);
            if (i > 0) CHECK(a.signals[i - 1].segments() <= a.signals[i].segments());
        }
        CHECK(signal_set({{0}}, 0.5, 1, 1).size() == 1);
        const SignalTable c = signal_set(three, 0.5, 2, 2);
        CHECK(c.size() == 9);
        for (const auto& s : c.signals) CHECK(s.length() == 1.0);
        // exhaustive: sum of |U|^j
        CHECK(signal_set(three, 0.25, 1, 3).size() == 3 + 9 + 27);
    }

    TEST_CASE("projection examples [DERIVED]")
    {
        StateGrid g(robot_spec(), {1, 1, kPi / 8});
        auto at = [&](State x) { return g.coords(g.project_flat(x)); };
        State a = at({0.3, -0.9, kPi / 3});
        CHECK(a[0] == 0.0);
        CHECK(a[1] == 0.0);
        CHECK(a[2] == doctest::Approx(kPi / 4));
        State b = at({2, 2, 0});
        CHECK(b == State{2, 2, 0});
        State c = at({1, 1, 0});
        CHECK(c[0] == 0.0);
        CHECK(c[1] == 0.0);
    }

    TEST_CASE("projection properties on random states")
    {
        const SystemSpec spec = robot_spec();
        const std::vector<double> eta{1, 1, kPi / 8};
        StateGrid g(spec, eta);
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> pos(-6, 6), ang(0, 2 * kPi);
        for (int i = 0; i < 10000; ++i) {
            const State x{pos(rng), pos(rng), ang(rng)};
            const size_t f = g.project_flat(x);
            REQUIRE(f != StateGrid::npos);
            const State q = g.coords(f);
            for (size_t k = 0; k < 3; ++k) CHECK(spec.axis_distance(x, q, k) <= eta[k] + 1e-12);
        }
        std::set<std::vector<long long>> keys;
        for (size_t f = 0; f < g.size(); ++f) {
            CHECK(g.project_flat(g.coords(f)) == f);
            const State q = g.coords(f);
            keys.insert({std::llround(q[0] * 1e6), std::llround(q[1] * 1e6), std::llround(q[2] * 1e6)});
        }
        CHECK(keys.size() == g.size());
    }

    TEST_CASE("quantization validation")
    {
        Quantization q;
        q.eta = {1, 1, kPi / 8};
        q.mu = {kPi / 2};
        q.tau = 0.5;
        q.ell_min = 0.5;
        q.ell_max = 1.0;
        CHECK_NOTHROW(q.validate(robot_spec()));
        CHECK(q.min_segments() == 1);
        CHECK(q.max_segments() == 2);
        q.ell_max = 0.75;
        CHECK_THROWS_AS(q.validate(robot_spec()), ConfigError);
        q.ell_max = 1.0;
        q.eta = {1, -1, 1};
        CHECK_THROWS_AS(q.validate(robot_spec()), ConfigError);
    }

    TEST_CASE("grid dumps are deterministic")
    {
        StateGrid a(robot_spec(), {1, 1, kPi / 8}), b(robot_spec(), {1, 1, kPi / 8});
        std::ostringstream x, y;
        a.dump(x);
        b.dump(y);
        CHECK(x.str() == y.str());
        CHECK(!x.str().empty());
    }
}
