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

#include "harness.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "error.hpp"
#include "mean_payoff.hpp"
#include "oracle.hpp"
#include "parity.hpp"
#include "textio.hpp"
#include "threshold.hpp"

namespace stsynth {

namespace {

std::string join(const std::vector<double>& v, char sep = ' ')
{
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) out += (i ? std::string(1, sep) : "") + format_double(v[i]);
    return out;
}

std::vector<double> parse_list(const std::string& text)
{
    std::vector<double> out;
    for (const auto& t : split_ws(text)) out.push_back(parse_double(t));
    return out;
}

LabelMask truth(const PredicateSet& preds, const SystemSpec& spec, const State& x)
{
    LabelMask m = 0;
    for (size_t i = 0; i < preds.size(); ++i)
        if (preds[i].holds(spec, x)) m |= LabelMask(1) << i;
    return m;
}

void bind_all(PathFormula& f, const std::vector<std::string>& names)
{
    if (f.is_base()) f.phi.bind(names);
    for (auto& a : f.args) bind_all(a, names);
}

struct Bounded
{
    const ClosedLoopRun& run;
    const std::vector<LabelMask>& masks;
    int64_t grace, burn, horizon;
    int64_t max_gap = 0;

    bool eval(const PathFormula& f, std::string& why)
    {
        using K = PathFormula::Kind;
        if (f.kind == K::And || f.kind == K::Or) {
            std::string a, b;
            const bool x = eval(f.args[0], a), y = eval(f.args[1], b);
            const bool r = f.kind == K::And ? x && y : x || y;
            if (!r) why = f.kind == K::And ? (!x ? a : b) : a + "; " + b;
            return r;
        }
        std::vector<char> hit(size_t(horizon), 0), miss(size_t(horizon), 0);
        bool any = false, all = true;
        for (size_t i = 0; i < run.samples.size(); ++i) {
            const bool h = f.phi.holds(masks[i]);
            const size_t k = run.samples[i].step;
            if (k >= size_t(horizon)) continue;
            (h ? hit : miss)[k] = 1;
            any = any || h;
            if (!h && all) {
                all = false;
                if (f.kind == K::G) why = f.str() + ": violated at t=" + format_double(run.samples[i].t);
            }
        }
        switch (f.kind) {
        case K::F:
            if (!any) why = f.str() + ": never satisfied";
            return any;
        case K::G:
            return all;
        case K::GF: {
            int64_t last = -1;
            for (int64_t k = burn; k < horizon; ++k) {
                if (hit[size_t(k)]) {
                    max_gap = std::max(max_gap, k - (last < 0 ? burn : last));
                    last = k;
                }
            }
            max_gap = std::max(max_gap, horizon - (last < 0 ? burn : last));
            for (int64_t k = burn; k + grace <= horizon; ++k) {
                bool seen = false;
                for (int64_t j = k; j < k + grace && !seen; ++j) seen = hit[size_t(j)];
                if (!seen) {
                    why = f.str() + ": no satisfying sample in steps [" + std::to_string(k) + ", " + std::to_string(k + grace) + ")";
                    return false;
                }
            }
            return true;
        }
        case K::FG: {
            int64_t last_miss = -1;
            for (int64_t k = 0; k < horizon; ++k)
                if (miss[size_t(k)]) last_miss = k;
            if (last_miss >= horizon - grace) {
                why = f.str() + ": still violated at step " + std::to_string(last_miss);
                return false;
            }
            return true;
        }
        default:
            return false;
        }
    }
};

} // namespace

ClosedLoopRun closed_loop_run(const ControlSystem& sys, const SymbolicController& sc, const State& x0, int64_t steps,
                              uint64_t seed, double h)
{
    const SystemSpec& spec = sys.spec();
    ClosedLoopRun run;
    run.config_hash = sc.config_hash;
    run.seed = seed;
    std::mt19937_64 rng(seed);
    const double lb = spec.lambda_bar;
    std::uniform_real_distribution<double> dist(-lb, lb);
    LiftedController lc(sc);
    State x = x0;
    run.states.push_back(x);
    uint32_t sig = 0;
    try {
        sig = lc.start(x);
    } catch (const UncontrollableState& e) {
        run.failure = e.what();
        return run;
    }
    double t = 0;
    for (int64_t k = 0; k < steps; ++k) {
        const ControlSignal& u = sc.signals.signals[sig];
        run.signals.push_back(sig);
        run.memories.push_back(lc.memory());
        run.lengths.push_back(u.length());
        const double tau = u.tau;
        const int sub = std::max(1, int(std::ceil(tau / h - 1e-9)));
        for (const Input& in : u.inputs) {
            const double lambda = lb > 0 ? dist(rng) : 0.0;
            for (int j = 0; j < sub; ++j) {
                TrajectorySample s;
                s.t = t + tau * j / sub;
                s.x = j == 0 ? x : sys.simulate_segment(x, in, lambda, tau * j / sub);
                s.step = uint32_t(k);
                s.signal = sig;
                s.input = in;
                run.samples.push_back(std::move(s));
            }
            x = sys.simulate_segment(x, in, lambda, tau);
            t += tau;
        }
        run.states.push_back(x);

        // Some listed successor must cover the reached state within eta.
        bool covered = false;
        for (const auto& [cell, mem] : sc.successors(lc.memory(), lc.cell())) {
            (void)mem;
            const State c = sc.grid.coords(cell);
            bool inside = true;
            for (size_t i = 0; i < c.size() && inside; ++i) inside = spec.axis_distance(x, c, i) <= sc.eta[i] + 1e-9;
            covered = covered || inside;
        }
        if (!covered) ++run.bound_violations;
        try {
            sig = lc.step(x);
        } catch (const UncontrollableState& e) {
            run.failure = "step " + std::to_string(k + 1) + ": " + e.what();
            break;
        }
    }
    TrajectorySample last;
    last.t = t;
    last.x = x;
    last.step = uint32_t(run.signals.size());
    last.signal = sig;
    last.input = sc.signals.signals[sig].inputs[0];
    run.samples.push_back(last);
    return run;
}

void ClosedLoopRun::save(std::ostream& os) const
{
    os << "stsynth-run 1\n";
    os << "config " << (config_hash.empty() ? "-" : config_hash) << "\n";
    os << "seed " << seed << "\n";
    os << "steps " << signals.size() << "\n";
    for (size_t k = 0; k < signals.size(); ++k)
        os << k << '\t' << join(states[k]) << '\t' << signals[k] << '\t' << memories[k] << '\t' << format_double(lengths[k]) << "\n";
    os << "final\t" << join(states.back()) << "\n";
    os << "samples " << samples.size() << "\n";
    for (const auto& s : samples)
        os << format_double(s.t) << '\t' << join(s.x) << '\t' << s.step << '\t' << s.signal << '\t' << join(s.input) << "\n";
    os << "bound_violations " << bound_violations << "\n";
    os << "status " << (failure.empty() ? "ok" : failure) << "\n";
}

ClosedLoopRun ClosedLoopRun::load(std::istream& is)
{
    auto keyed = [&](const char* key) {
        const std::string line = expect_line(is, key);
        const std::string prefix = std::string(key) + " ";
        if (line.rfind(prefix, 0) != 0) throw ConfigError(std::string("run: expected '") + key + "'");
        return line.substr(prefix.size());
    };
    if (trim(expect_line(is, "run")) != "stsynth-run 1") throw ConfigError("not a run record");
    ClosedLoopRun r;
    const std::string cfg = keyed("config");
    if (cfg != "-") r.config_hash = cfg;
    r.seed = uint64_t(parse_int(keyed("seed")));
    const size_t K = size_t(parse_int(keyed("steps")));
    for (size_t k = 0; k < K; ++k) {
        auto cols = split(expect_line(is, "run step"), '\t');
        if (cols.size() != 5 || size_t(parse_int(cols[0])) != k) throw ConfigError("run: bad step line");
        r.states.push_back(parse_list(cols[1]));
        r.signals.push_back(uint32_t(parse_int(cols[2])));
        r.memories.push_back(uint32_t(parse_int(cols[3])));
        r.lengths.push_back(parse_double(cols[4]));
    }
    {
        auto cols = split(expect_line(is, "run final"), '\t');
        if (cols.size() != 2 || cols[0] != "final") throw ConfigError("run: bad final line");
        r.states.push_back(parse_list(cols[1]));
    }
    const size_t M = size_t(parse_int(keyed("samples")));
    for (size_t i = 0; i < M; ++i) {
        auto cols = split(expect_line(is, "run sample"), '\t');
        if (cols.size() != 5) throw ConfigError("run: bad sample line");
        TrajectorySample s;
        s.t = parse_double(cols[0]);
        s.x = parse_list(cols[1]);
        s.step = uint32_t(parse_int(cols[2]));
        s.signal = uint32_t(parse_int(cols[3]));
        s.input = parse_list(cols[4]);
        r.samples.push_back(std::move(s));
    }
    r.bound_violations = size_t(parse_int(keyed("bound_violations")));
    const std::string st = keyed("status");
    if (st != "ok") r.failure = st;
    return r;
}

void ClosedLoopRun::write_csv(std::ostream& os) const
{
    const size_t n = states.empty() ? 0 : states[0].size();
    os << "t";
    for (size_t i = 1; i <= n; ++i) os << ",x" << i;
    os << ",signal_index,segment_input\n";
    for (const auto& s : samples) os << format_double(s.t) << ',' << join(s.x, ',') << ',' << s.signal << ',' << join(s.input) << "\n";
}

Verdict check_bounded(const ClosedLoopRun& run, const PathFormula& phi, const PredicateSet& preds, const SystemSpec& spec,
                      int64_t grace, double burn_in)
{
    PathFormula f = phi;
    bind_all(f, preds.names());
    std::vector<LabelMask> masks;
    masks.reserve(run.samples.size());
    for (const auto& s : run.samples) masks.push_back(truth(preds, spec, s.x));
    Verdict v;
    v.horizon = int64_t(run.signals.size());
    v.grace = grace;
    v.burn_in = int64_t(std::floor(burn_in * double(v.horizon)));
    Bounded b{run, masks, grace, v.burn_in, v.horizon};
    std::string why;
    v.pass = b.eval(f, why);
    v.max_gap = b.max_gap;
    v.detail = v.pass ? "satisfied" : why;
    return v;
}

RunMetrics metrics(const ClosedLoopRun& run, const PredicateSet& preds, const SystemSpec& spec, double burn_in)
{
    RunMetrics m;
    double sum = 0;
    for (size_t k = 0; k < run.lengths.size(); ++k) {
        sum += run.lengths[k];
        m.running_average.push_back(sum / double(k + 1));
    }
    const size_t K = run.lengths.size();
    m.total_time = sum;
    m.average_length = K ? sum / double(K) : 0.0;
    m.trigger_rate = sum > 0 ? double(K) / sum : 0.0;
    const size_t burn = size_t(std::floor(burn_in * double(K)));
    double tail = 0;
    for (size_t k = burn; k < K; ++k) tail += run.lengths[k];
    m.tail_average_length = K > burn ? tail / double(K - burn) : 0.0;
    for (size_t i = 0; i < preds.size(); ++i) {
        double last = run.samples.empty() ? 0.0 : run.samples.front().t, gap = 0;
        for (const auto& s : run.samples)
            if (preds[i].holds(spec, s.x)) {
                gap = std::max(gap, s.t - last);
                last = s.t;
            }
        if (!run.samples.empty()) gap = std::max(gap, run.samples.back().t - last);
        m.max_gap.push_back({preds[i].name, gap});
    }
    return m;
}

namespace {

Game random_game(std::mt19937_64& rng, size_t n, int colors, int64_t max_payoff, bool dead_ends)
{
    Game g;
    for (size_t v = 0; v < n; ++v) g.add_vertex(int(rng() % 2), int(rng() % uint64_t(colors + 1)));
    for (size_t v = 0; v < n; ++v) {
        const size_t k = dead_ends ? rng() % 3 : 1 + rng() % 3;
        for (size_t i = 0; i < k; ++i) g.add_edge(uint32_t(v), uint32_t(rng() % n), int64_t(rng() % uint64_t(max_payoff + 1)));
    }
    g.finalize();
    return g;
}

} // namespace

bool run_selftest(uint64_t seed, int instances, std::ostream& report)
{
    std::mt19937_64 rng(seed);
    int parity_bad = 0, mp_bad = 0, unsound = 0;
    size_t oracle_wins = 0, found = 0;
    for (int it = 0; it < instances; ++it) {
        const Game pg = random_game(rng, 2 + rng() % 9, 3, 4, true);
        if (solve_parity(pg).region(kP1) != oracle_parity(pg)) ++parity_bad;

        const Game mg = random_game(rng, 2 + rng() % 9, 3, 4, false);
        if (solve_mean_payoff(mg).value != oracle_mean_payoff(mg)) ++mp_bad;

        Game tg = random_game(rng, 2 + rng() % 7, 3, 4, true);
        tg.threshold = Rational(int64_t(rng() % 9), int64_t(1 + rng() % 4));
        const Region mine = solve_threshold(tg).win, ref = brute_force_oracle(tg);
        for (size_t v = 0; v < tg.num_vertices(); ++v) {
            if (mine[v] && !ref[v]) ++unsound;
            oracle_wins += ref[v] ? 1 : 0;
            found += ref[v] && mine[v] ? 1 : 0;
        }
    }
    report << "parity: " << instances - parity_bad << "/" << instances << " agree with the oracle\n";
    report << "mean-payoff: " << instances - mp_bad << "/" << instances << " agree with the oracle\n";
    report << "threshold: " << unsound << " unsound vertices, completeness " << found << "/" << oracle_wins << "\n";
    return parity_bad == 0 && mp_bad == 0 && unsound == 0;
}

} // namespace stsynth
