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
#include <sstream>

#include "doctest.h"
#include "abstraction.hpp"
#include "config.hpp"
#include "error.hpp"

using namespace stsynth;

namespace {

const double kPi = std::acos(-1.0);

Predicate halfspace(std::string name, std::vector<double> a, double b)
{
    Predicate p;
    p.name = std::move(name);
    p.kind = Predicate::Kind::Halfspace;
    p.coeffs = std::move(a);
    p.offset = b;
    return p;
}

struct Robot
{
    Config cfg = robot_example_config();
    std::unique_ptr<ControlSystem> sys = cfg.make_system();
    PredicateSet preds = cfg.predicate_set();
};

const SymbolicModel& robot_model()
{
    static Robot r;
    static SymbolicModel m = build_symbolic_model(*r.sys, r.cfg.quant, r.preds);
    return m;
}

bool atom(const LabelPair& p, size_t i, bool positive) { return ((positive ? p.pos : p.neg) >> i) & 1; }

} // namespace

TEST_SUITE("abstraction")
{
    TEST_CASE("ball labels [DERIVED]")
    {
        Robot r;
        const SystemSpec& spec = r.cfg.system;
        const std::vector<double> eta{1, 1, kPi / 8};
        const int px = r.preds.find("px");
        REQUIRE(px >= 0);
        // min of x1 over the ball around x1 = 2 is 1 > 0
        CHECK(atom(ball_labels(spec, State{2, 2, kPi / 4}, eta, r.preds), size_t(px), true));
        const LabelPair straddle = ball_labels(spec, State{0.5, 0, 0}, eta, r.preds);
        CHECK(!atom(straddle, size_t(px), true));
        CHECK(!atom(straddle, size_t(px), false));
        const std::vector<double> zero{0, 0, 0};
        CHECK(atom(ball_labels(spec, State{0.1, 0.1, 0}, zero, r.preds), size_t(px), true));
        CHECK(atom(ball_labels(spec, State{0, -3, 0}, zero, r.preds), size_t(px), false));
    }

    TEST_CASE("box predicates on a wrapped axis")
    {
        SystemSpec spec;
        spec.state_box = {{-1, 1, false}, {0, 2 * kPi, true}};
        Predicate p;
        p.name = "north";
        p.kind = Predicate::Kind::Box;
        p.box = {{-INFINITY, INFINITY, false}, {kPi / 4, 3 * kPi / 4, false}};
        PredicateSet ps({p}, spec);
        CHECK(ps[0].holds(spec, State{0, kPi / 2}));
        CHECK(!ps[0].holds(spec, State{0, 0}));
        CHECK(ps[0].holds_on_ball(spec, State{0, kPi / 2}, std::vector<double>{0.1, 0.2}));
        CHECK(!ps[0].holds_on_ball(spec, State{0, kPi / 2}, std::vector<double>{0.1, 0.8}));
        CHECK(ps[0].fails_on_ball(spec, State{0, 3 * kPi / 2}, std::vector<double>{0.1, 0.3}));
        SystemSpec s2 = spec;
        CHECK_THROWS_AS(PredicateSet({halfspace("bad", {0, 1}, 0)}, s2), ConfigError);
    }

    TEST_CASE("nominal endpoint [DERIVED]")
    {
        Robot r;
        ControlSignal u;
        u.tau = 0.5;
        u.inputs = {{0}};
        const State e = nominal_endpoint(*r.sys, {0, 0, 0}, u);
        CHECK(e[0] == doctest::Approx(1.25));
        CHECK(e[1] == doctest::Approx(0).epsilon(1e-12));
        u.inputs = {{kPi / 2}, {0}};
        const State f = nominal_endpoint(*r.sys, {0, 0, 0}, u);
        // quarter-turn arc of radius 5/pi for 0.5 s, then straight along heading pi/4
        const double r0 = 2.5 / (kPi / 2);
        CHECK(f[0] == doctest::Approx(r0 * std::sin(kPi / 4) + 1.25 * std::cos(kPi / 4)));
        CHECK(f[1] == doctest::Approx(r0 * (1 - std::cos(kPi / 4)) + 1.25 * std::sin(kPi / 4)));
        CHECK(f[2] == doctest::Approx(kPi / 4));
        const State back = nominal_backpoint(*r.sys, f, u);
        for (size_t i = 0; i < 3; ++i) CHECK(r.cfg.system.axis_distance(back, State{0, 0, 0}, i) < 1e-9);
    }

    TEST_CASE("stays_inside [DERIVED]")
    {
        Robot r;
        ControlSignal u;
        u.tau = 0.5;
        u.inputs = {{0}};
        CHECK(!stays_inside(*r.sys, {5.9, 0, 0}, u, 1.0));
        for (double w : {-kPi / 2, 0.0, kPi / 2}) {
            u.inputs = {{w}};
            CHECK(stays_inside(*r.sys, {0, 0, 0}, u, 1.0));
        }
        SystemSpec tiny = r.cfg.system;
        tiny.state_box[0] = {-1, 1, false};
        tiny.state_box[1] = {-1, 1, false};
        RobotSystem small(tiny, 2.5);
        CHECK(!stays_inside(small, {0, 0, 0}, u, 1.0));
    }

    TEST_CASE("successors match a brute-force scan of the grid")
    {
        Robot r;
        r.cfg.system.lambda_bar = 0;
        RobotSystem sys(r.cfg.system, 2.5);
        const std::vector<double> eta{1, 1, kPi / 8};
        StateGrid grid(r.cfg.system, eta);
        ControlSignal u;
        u.tau = 0.5;
        u.inputs = {{0}};
        const size_t q = grid.project_flat(State{0, 0, 0});
        const auto succ = successors(sys, grid, q, u, 1.0);
        // independent radius: d + 2 v sin(d/2) t with d = 1, no disturbance
        const double radius = 1 + 2 * 2.5 * std::sin(0.5) * 0.5;
        std::vector<uint32_t> expect;
        for (size_t c = 0; c < grid.size(); ++c) {
            const State x = grid.coords(c);
            const double dth = std::min(std::fabs(x[2]), 2 * kPi - std::fabs(x[2]));
            // the straight segment has heading 0, so endpoint and backpoint are +-1.25 on x
            const bool fwd = std::fabs(x[0] - 1.25) <= radius + eta[0] + 1e-9 && std::fabs(x[1]) <= radius + eta[1] + 1e-9 &&
                             dth <= radius + eta[2] + 1e-9;
            const State xb = nominal_backpoint(sys, x, u);
            const bool bwd = std::fabs(xb[0]) <= radius + eta[0] + 1e-9 && std::fabs(xb[1]) <= radius + eta[1] + 1e-9 &&
                             r.cfg.system.axis_distance(xb, State{0, 0, 0}, 2) <= radius + eta[2] + 1e-9;
            if (fwd && bwd) expect.push_back(uint32_t(c));
        }
        CHECK(succ == expect);
        bool has0 = false, has2 = false;
        for (uint32_t c : succ) {
            has0 = has0 || grid.coords(c)[0] == 0.0;
            has2 = has2 || grid.coords(c)[0] == 2.0;
        }
        CHECK(has0);
        CHECK(has2);
    }

    TEST_CASE("deterministic limit: successors shrink onto the endpoint")
    {
        SystemSpec s;
        s.state_box = {{-3, 3, false}};
        s.input_box = {{1, 1, false}};
        auto sys = make_drift_system(s, {0}, 0.01);
        StateGrid grid(s, {0.01});
        ControlSignal u;
        u.tau = 0.5;
        u.inputs = {{1}};
        const size_t q = grid.project_flat(State{0});
        const auto succ = successors(*sys, grid, q, u, 0.01);
        // the endpoint cell plus the two neighbours at exactly 2 eta (closed bound)
        REQUIRE(succ.size() == 3);
        CHECK(grid.coords(succ[1])[0] == doctest::Approx(0.5));
        for (uint32_t c : succ) CHECK(std::fabs(grid.coords(c)[0] - 0.5) <= 0.02 + 1e-9);
    }

    TEST_CASE("shift system only moves forward")
    {
        Config cfg = parse_config(R"([system]
model = drift
drift = 0
state_lo = -1
state_hi = 10
wrap = 0
input_lo = 1
input_hi = 1
init = 0
[quantization]
eta = 0.25
mu = 1
tau = 1
ell_min = 1
ell_max = 1
[predicates]
[spec]
formula = GF true
[threshold]
nu = 0.5
)");
        const auto sys = cfg.make_system();
        const SymbolicModel m = build_symbolic_model(*sys, cfg.quant, cfg.predicate_set());
        REQUIRE(m.num_signals() == 1);
        size_t edges = 0;
        for (size_t q = 0; q < m.num_states(); ++q) {
            auto [a, b] = m.range(q, 0);
            for (auto t = a; t < b; ++t) {
                CHECK(m.grid.coords(m.targets[t])[0] > m.grid.coords(q)[0]);
                ++edges;
            }
        }
        CHECK(edges > 0);
    }

    TEST_CASE("transition labels [DERIVED]")
    {
        Robot r;
        StateGrid grid(r.cfg.system, {1, 1, kPi / 8});
        ControlSignal u;
        u.tau = 0.5;
        u.inputs = {{0}};
        const size_t a = grid.project_flat(State{2, 2, 0}), b = grid.project_flat(State{-2, 2, 0});
        const int px = r.preds.find("px"), py = r.preds.find("py");
        const TransitionLabels same = label_transition(*r.sys, grid, a, u, a, r.preds, 1.0);
        REQUIRE(same.rho_exists.size() == 2);
        CHECK(same.rho_exists[0].pos == ((LabelMask(1) << px) | (LabelMask(1) << py)));
        CHECK(same.rho_exists[0].neg == 0);
        const TransitionLabels cross = label_transition(*r.sys, grid, a, u, b, r.preds, 1.0);
        CHECK(!atom(cross.rho_forall, size_t(px), true));
        CHECK(!atom(cross.rho_forall, size_t(px), false));
        const TransitionLabels none = label_transition(*r.sys, grid, a, u, b, PredicateSet({}, r.cfg.system), 1.0);
        for (const auto& p : none.rho_exists) CHECK(p == LabelPair{});
        CHECK(none.rho_forall == LabelPair{});
    }

    TEST_CASE("robot model sizes and disjoint pairs")
    {
        const SymbolicModel& m = robot_model();
        CHECK(m.num_states() == 392);
        CHECK(m.num_signals() == 12);
        REQUIRE(m.initials.size() == 1);
        CHECK(m.grid.coords(m.initials[0]) == State{0, 0, kPi / 4});
        for (const auto& p : m.state_pairs) CHECK((p.pos & p.neg) == 0);
        for (const auto& p : m.forall_pool) CHECK((p.pos & p.neg) == 0);
    }

    TEST_CASE("Monte-Carlo successor coverage")
    {
        Robot r;
        const SymbolicModel& m = robot_model();
        const SystemSpec& spec = r.cfg.system;
        const auto& eta = m.grid.eta();
        std::vector<std::pair<size_t, size_t>> live;
        for (size_t q = 0; q < m.num_states(); ++q)
            for (size_t s = 0; s < m.num_signals(); ++s)
                if (m.range(q, s).second > m.range(q, s).first) live.push_back({q, s});
        REQUIRE(!live.empty());
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> unit(-1, 1);
        size_t bad = 0;
        for (int i = 0; i < 10000; ++i) {
            const auto [q, s] = live[rng() % live.size()];
            const State c = m.grid.coords(q);
            State x(3);
            for (size_t k = 0; k < 3; ++k) x[k] = c[k] + unit(rng) * eta[k];
            spec.normalize(x);
            const State y = sample_endpoint(*r.sys, x, m.signals.signals[s], rng);
            bool covered = false;
            auto [a, b] = m.range(q, s);
            for (auto t = a; t < b && !covered; ++t) {
                const State z = m.grid.coords(m.targets[t]);
                bool in = true;
                for (size_t k = 0; k < 3; ++k) in = in && spec.axis_distance(y, z, k) <= eta[k] + 1e-9;
                covered = in;
            }
            bad += covered ? 0 : 1;
        }
        CHECK(bad == 0);
    }

    TEST_CASE("sampled trajectories respect the transition labels")
    {
        Robot r;
        const SymbolicModel& m = robot_model();
        const SystemSpec& spec = r.cfg.system;
        const auto& eta = m.grid.eta();
        std::mt19937_64 rng(23);
        std::uniform_real_distribution<double> unit(-1, 1), lam(-0.05, 0.05);
        auto truth = [&](const State& x) {
            LabelMask t = 0;
            for (size_t i = 0; i < r.preds.size(); ++i)
                if (r.preds[i].holds(spec, x)) t |= LabelMask(1) << i;
            return t;
        };
        auto agrees = [](const LabelPair& p, LabelMask t) { return (p.pos & ~t) == 0 && (p.neg & t) == 0; };
        size_t checked = 0, bad = 0;
        while (checked < 1000) {
            const size_t q = rng() % m.num_states(), s = rng() % m.num_signals();
            auto [a, b] = m.range(q, s);
            if (a == b) continue;
            const ControlSignal& u = m.signals.signals[s];
            const State c = m.grid.coords(q);
            State x(3);
            for (size_t k = 0; k < 3; ++k) x[k] = c[k] + unit(rng) * eta[k];
            spec.normalize(x);
            // trajectory sampled every tau/10
            std::vector<State> path{x};
            State y = x;
            for (const Input& in : u.inputs) {
                const double l = lam(rng);
                for (int j = 1; j <= 10; ++j) path.push_back(r.sys->flow(y, in, l, u.tau * j / 10));
                y = path.back();
            }
            // pick a listed successor covering the endpoint
            for (auto t = a; t < b; ++t) {
                const State z = m.grid.coords(m.targets[t]);
                bool in = true;
                for (size_t k = 0; k < 3; ++k) in = in && spec.axis_distance(y, z, k) <= eta[k] + 1e-9;
                if (!in) continue;
                const TransitionLabels lab = m.labels(q, t);
                if (!agrees(lab.rho_exists[0], truth(x))) ++bad;
                if (!agrees(lab.rho_exists[1], truth(y))) ++bad;
                for (const State& p : path)
                    if (!agrees(lab.rho_forall, truth(p))) ++bad;
                ++checked;
                break;
            }
        }
        CHECK(bad == 0);
    }

    TEST_CASE("model dumps are deterministic and round-trip")
    {
        Robot r;
        const SymbolicModel& m = robot_model();
        BuildOptions two;
        two.jobs = 2;
        const SymbolicModel m2 = build_symbolic_model(*r.sys, r.cfg.quant, r.preds, two);
        std::ostringstream a, b, c;
        m.save(a);
        m2.save(b);
        CHECK(a.str() == b.str());
        std::istringstream in(a.str());
        const SymbolicModel back = SymbolicModel::load(in);
        back.save(c);
        CHECK(a.str() == c.str());
        CHECK(back.targets == m.targets);
        CHECK(back.offsets == m.offsets);
    }

    TEST_CASE("misconfigured signal lengths are rejected")
    {
        Robot r;
        Quantization q = r.cfg.quant;
        q.ell_min = 1.0;
        q.ell_max = 0.5;
        CHECK_THROWS_AS(build_symbolic_model(*r.sys, q, r.preds), ConfigError);
    }
}
