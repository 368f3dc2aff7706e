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

#include "synthesis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "error.hpp"
#include "logic.hpp"
#include "parity.hpp"
#include "textio.hpp"

namespace stsynth {

namespace {

std::string index_text(const GridIndex& idx)
{
    std::string out;
    for (size_t i = 0; i < idx.size(); ++i) out += (i ? "," : "") + std::to_string(idx[i]);
    return out;
}

uint32_t parse_cell(const StateGrid& grid, const std::string& text)
{
    GridIndex idx;
    for (const auto& t : split(text, ',')) idx.push_back(parse_int(t));
    if (idx.size() != grid.dims()) throw ConfigError("controller: index vector has the wrong dimension");
    const size_t f = grid.flat(idx);
    if (f == StateGrid::npos) throw ConfigError("controller: cell outside the grid");
    return uint32_t(f);
}

std::vector<std::string> keyed(std::istream& is, const char* key)
{
    auto tok = split_ws(expect_line(is, key));
    if (tok.empty() || tok[0] != key) throw ConfigError(std::string("controller: expected '") + key + "'");
    tok.erase(tok.begin());
    return tok;
}

size_t count_of(std::istream& is, const char* key)
{
    auto tok = keyed(is, key);
    if (tok.size() != 1) throw ConfigError(std::string("controller: bad '") + key + "' line");
    return size_t(parse_int(tok[0]));
}

std::string join(const std::vector<double>& v)
{
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + format_double(v[i]);
    return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

uint32_t SymbolicController::initial_memory(uint32_t cell) const
{
    auto it = initial.find(cell);
    if (it == initial.end()) throw UncontrollableState("cell " + index_text(grid.index(cell)) + " is not a controlled initial cell");
    return it->second;
}

uint32_t SymbolicController::signal(uint32_t memory, uint32_t cell) const
{
    auto it = output.find({memory, cell});
    if (it == output.end())
        throw UncontrollableState("no control for memory " + std::to_string(memory) + " at cell " + index_text(grid.index(cell)));
    return it->second;
}

const std::vector<std::pair<uint32_t, uint32_t>>& SymbolicController::successors(uint32_t memory, uint32_t cell) const
{
    auto it = update.find({memory, cell});
    if (it == update.end())
        throw UncontrollableState("no update for memory " + std::to_string(memory) + " at cell " + index_text(grid.index(cell)));
    return it->second;
}

uint32_t SymbolicController::next_memory(uint32_t memory, uint32_t cell, uint32_t sig, uint32_t next) const
{
    if (signal(memory, cell) != sig) throw UncontrollableState("signal does not match the controller output");
    const auto& succ = successors(memory, cell);
    auto it = std::lower_bound(succ.begin(), succ.end(), std::make_pair(next, uint32_t(0)));
    if (it == succ.end() || it->first != next)
        throw UncontrollableState("cell " + index_text(grid.index(next)) + " is not a symbolic successor of " +
                                  index_text(grid.index(cell)));
    return it->second;
}

void SymbolicController::save(std::ostream& os) const
{
    os << "stsynth-controller 1\n";
    os << "config " << (config_hash.empty() ? "-" : config_hash) << "\n";
    os << "formula " << formula << "\n";
    os << "axes " << state_box.size() << "\n";
    for (const Axis& a : state_box) os << "axis " << format_double(a.lo) << ' ' << format_double(a.hi) << ' ' << (a.wrap ? 1 : 0) << "\n";
    os << "eta " << join(eta) << "\n";
    os << "tau " << format_double(signals.size() ? signals.signals[0].tau : 0.0) << "\n";
    os << "inputs " << signals.inputs.size() << "\n";
    for (const Input& in : signals.inputs) os << "input " << join(in) << "\n";
    os << "signals " << signals.size() << "\n";
    for (size_t s = 0; s < signals.size(); ++s) {
        os << s << '\t';
        for (size_t k = 0; k < signals.sequences[s].size(); ++k) os << (k ? " " : "") << signals.sequences[s][k];
        os << "\n";
    }
    os << "memory " << memory_count() << "\n";
    for (size_t k = 0; k < memory_count(); ++k) os << k << '\t' << memory_meaning[k].first << '\t' << int_str(memory_meaning[k].second) << "\n";
    os << "initial " << initial.size() << "\n";
    for (const auto& [cell, mem] : initial) os << index_text(grid.index(cell)) << '\t' << mem << "\n";
    os << "output " << output.size() << "\n";
    for (const auto& [key, sig] : output) os << key.first << '\t' << index_text(grid.index(key.second)) << '\t' << sig << "\n";
    size_t total = 0;
    for (const auto& kv : update) total += kv.second.size();
    os << "update " << total << "\n";
    for (const auto& [key, succ] : update) {
        const uint32_t sig = output.at(key);
        for (const auto& [next, mem] : succ)
            os << key.first << '\t' << index_text(grid.index(key.second)) << '\t' << sig << '\t' << index_text(grid.index(next))
               << '\t' << mem << "\n";
    }
}

SymbolicController SymbolicController::load(std::istream& is)
{
    if (trim(expect_line(is, "controller")) != "stsynth-controller 1") throw ConfigError("not a controller file");
    SymbolicController c;
    {
        auto tok = keyed(is, "config");
        if (tok.size() != 1) throw ConfigError("controller: bad config line");
        if (tok[0] != "-") c.config_hash = tok[0];
    }
    {
        const std::string line = expect_line(is, "formula");
        if (line.rfind("formula ", 0) != 0) throw ConfigError("controller: expected 'formula'");
        c.formula = line.substr(8);
    }
    const size_t n = count_of(is, "axes");
    for (size_t i = 0; i < n; ++i) {
        auto tok = keyed(is, "axis");
        if (tok.size() != 3) throw ConfigError("controller: bad axis line");
        c.state_box.push_back({parse_double(tok[0]), parse_double(tok[1]), parse_int(tok[2]) != 0});
    }
    for (auto& t : keyed(is, "eta")) c.eta.push_back(parse_double(t));
    if (c.eta.size() != n) throw ConfigError("controller: eta has the wrong dimension");
    SystemSpec spec;
    spec.state_box = c.state_box;
    c.grid = StateGrid(spec, c.eta);
    auto tau_tok = keyed(is, "tau");
    if (tau_tok.size() != 1) throw ConfigError("controller: bad tau line");
    const double tau = parse_double(tau_tok[0]);
    const size_t ni = count_of(is, "inputs");
    for (size_t i = 0; i < ni; ++i) {
        Input in;
        for (auto& t : keyed(is, "input")) in.push_back(parse_double(t));
        c.signals.inputs.push_back(in);
    }
    const size_t S = count_of(is, "signals");
    for (size_t s = 0; s < S; ++s) {
        auto cols = split(expect_line(is, "signal"), '\t');
        if (cols.size() != 2 || size_t(parse_int(cols[0])) != s) throw ConfigError("controller: bad signal line");
        std::vector<uint32_t> seq;
        ControlSignal u;
        u.tau = tau;
        for (auto& t : split_ws(cols[1])) {
            const int64_t k = parse_int(t);
            if (k < 0 || size_t(k) >= ni) throw ConfigError("controller: input index out of range");
            seq.push_back(uint32_t(k));
            u.inputs.push_back(c.signals.inputs[size_t(k)]);
        }
        if (seq.empty()) throw ConfigError("controller: empty signal");
        c.signals.sequences.push_back(seq);
        c.signals.signals.push_back(u);
    }
    const size_t K = count_of(is, "memory");
    for (size_t k = 0; k < K; ++k) {
        auto cols = split(expect_line(is, "memory"), '\t');
        if (cols.size() != 3 || size_t(parse_int(cols[0])) != k) throw ConfigError("controller: bad memory line");
        c.memory_meaning.push_back({uint32_t(parse_int(cols[1])), parse_int128(cols[2])});
    }
    auto memory_id = [&](const std::string& t) {
        const int64_t m = parse_int(t);
        if (m < 0 || size_t(m) >= K) throw ConfigError("controller: memory id out of range");
        return uint32_t(m);
    };
    auto signal_id = [&](const std::string& t) {
        const int64_t s = parse_int(t);
        if (s < 0 || size_t(s) >= S) throw ConfigError("controller: signal id out of range");
        return uint32_t(s);
    };
    const size_t I = count_of(is, "initial");
    for (size_t i = 0; i < I; ++i) {
        auto cols = split(expect_line(is, "initial"), '\t');
        if (cols.size() != 2) throw ConfigError("controller: bad initial line");
        c.initial[parse_cell(c.grid, cols[0])] = memory_id(cols[1]);
    }
    const size_t O = count_of(is, "output");
    for (size_t i = 0; i < O; ++i) {
        auto cols = split(expect_line(is, "output"), '\t');
        if (cols.size() != 3) throw ConfigError("controller: bad output line");
        c.output[{memory_id(cols[0]), parse_cell(c.grid, cols[1])}] = signal_id(cols[2]);
    }
    const size_t U = count_of(is, "update");
    for (size_t i = 0; i < U; ++i) {
        auto cols = split(expect_line(is, "update"), '\t');
        if (cols.size() != 5) throw ConfigError("controller: bad update line");
        const std::pair<uint32_t, uint32_t> key{memory_id(cols[0]), parse_cell(c.grid, cols[1])};
        auto out = c.output.find(key);
        if (out == c.output.end() || out->second != signal_id(cols[2])) throw ConfigError("controller: update without matching output");
        c.update[key].push_back({parse_cell(c.grid, cols[3]), memory_id(cols[4])});
    }
    for (auto& kv : c.update) std::sort(kv.second.begin(), kv.second.end());
    return c;
}

SymbolicController extract_controller(const SymbolicModel& model, const ParityAnnotation& ann, const Translation& tr,
                                      const ThresholdSolution& sol)
{
    const Game& g = tr.game;
    const GameMap& gm = tr.map;
    const EnergyStrategy& st = sol.strategy;
    bool memoryless = true;
    for (uint32_t v = 0; v < g.num_vertices(); ++v)
        if (sol.win[v] && st.moves[v].size() > 1) memoryless = false;

    SymbolicController c;
    c.config_hash = model.config_hash;
    c.formula = ann.formula;
    c.state_box = model.state_box;
    c.eta = model.grid.eta();
    c.grid = model.grid;
    c.signals = model.signals;

    std::map<std::pair<uint32_t, Int>, uint32_t> ids;
    std::deque<std::pair<uint32_t, uint32_t>> queue;  // (memory, cell)
    auto intern = [&](uint32_t z, Int e) {
        auto [it, fresh] = ids.emplace(std::make_pair(z, e), uint32_t(c.memory_meaning.size()));
        if (fresh) c.memory_meaning.push_back({z, e});
        return it->second;
    };
    auto visit = [&](uint32_t mem, uint32_t cell) {
        if (c.output.count({mem, cell})) return;
        c.output[{mem, cell}] = UINT32_MAX;
        queue.push_back({mem, cell});
    };
    for (uint32_t v : gm.initial) {
        if (!sol.win[v]) throw UncontrollableState("initial cell " + std::to_string(gm.state[v]) + " is not winning");
        const uint32_t mem = intern(gm.copy[v], memoryless ? 0 : st.initial(v));
        c.initial[gm.state[v]] = mem;
        visit(mem, gm.state[v]);
    }
    while (!queue.empty()) {
        const auto [mem, cell] = queue.front();
        queue.pop_front();
        const auto [z, energy] = c.memory_meaning[mem];
        const int64_t v = gm.vertex(z, cell);
        if (v < 0 || !sol.win[size_t(v)]) throw InvariantError("controller reached a losing game vertex");
        const int64_t e1 = memoryless ? (st.moves[size_t(v)].empty() ? -1 : int64_t(st.moves[size_t(v)][0].second))
                                      : st.move(uint32_t(v), energy);
        if (e1 < 0) throw InvariantError("strategy has no move at a winning vertex");
        const uint32_t v2 = g.edge_dst[size_t(e1)];
        const uint32_t sig = uint32_t(gm.signal[v2]);
        c.output[{mem, cell}] = sig;
        const Int mid = memoryless ? 0 : st.update(energy, uint32_t(e1));
        auto& succ = c.update[{mem, cell}];
        for (uint32_t e2 : g.out(v2)) {
            const uint32_t t = g.edge_dst[e2];
            if (!sol.win[t]) throw InvariantError("opponent escapes the winning region");
            const Int next = memoryless ? 0 : st.update(mid, e2);
            if (!memoryless && next < st.credit[t]) throw InvariantError("tracked energy below the required credit");
            const uint32_t m2 = intern(gm.copy[t], next);
            succ.push_back({gm.state[t], m2});
            visit(m2, gm.state[t]);
        }
        std::sort(succ.begin(), succ.end());
    }
    return c;
}

uint32_t LiftedController::project(std::span<const double> x) const
{
    SystemSpec spec;
    spec.state_box = sc_.state_box;
    if (!spec.contains(x)) throw UncontrollableState("state outside the state box");
    const size_t f = sc_.grid.project_flat(x);
    if (f == StateGrid::npos) throw UncontrollableState("state does not project onto the grid");
    return uint32_t(f);
}

uint32_t LiftedController::start(std::span<const double> x)
{
    cell_ = project(x);
    memory_ = sc_.initial_memory(cell_);
    signal_ = sc_.signal(memory_, cell_);
    return signal_;
}

uint32_t LiftedController::step(std::span<const double> x)
{
    const uint32_t next = project(x);
    memory_ = sc_.next_memory(memory_, cell_, signal_, next);
    cell_ = next;
    signal_ = sc_.signal(memory_, cell_);
    return signal_;
}

namespace {

std::string seconds(double s)
{
    std::ostringstream os;
    os << std::fixed << std::setprecision(3) << s << " s";
    return os.str();
}

} // namespace

std::string format_iteration(const IterationReport& r)
{
    std::ostringstream os;
    os << "iteration " << r.index << ": eta=(" << join(r.eta) << ") mu=(" << join(r.mu) << ") tau=" << format_double(r.tau) << "\n";
    os << "  model: " << r.states << " states, " << r.signals << " signals, " << r.transitions << " transitions, " << r.blocked_cells
       << " cells without admissible signals (" << seconds(r.abstraction_seconds) << ")\n";
    os << "  game: " << r.v1 << " player-1 + " << r.v2 << " player-2 vertices, " << r.edges << " edges, " << r.copies
       << " copies, threshold " << r.threshold << " per segment\n";
    os << "  solve: " << r.winning_vertices << " winning vertices, initial cells winning " << r.initial_winning << "/"
       << r.initial_cells;
    if (r.winning_vertices) os << ", strategy " << (r.positional ? "memoryless" : "energy-tracking") << (r.complete ? "" : " (incomplete)");
    os << " (" << seconds(r.solve_seconds) << ")\n";
    if (r.parity_winning >= 0) os << "  diagnosis: parity objective alone wins " << r.parity_winning << " vertices\n";
    for (const auto& w : r.warnings) os << "  warning: " << w << "\n";
    if (!r.next.empty()) os << "  next: " << r.next << "\n";
    return os.str();
}

std::string SynthesisResult::report() const
{
    std::string out;
    for (const IterationReport& r : iterations) out += format_iteration(r);
    return out + (realized ? "REALIZED" : "UNREALIZABLE") + (stop_reason.empty() ? "" : ": " + stop_reason) + "\n";
}

SynthesisResult synthesize(const Config& cfg, const SynthesisOptions& opt)
{
    cfg.validate();
    const auto t_start = std::chrono::steady_clock::now();
    const PredicateSet preds = cfg.predicate_set();
    ParityAnnotation ann = compile_parity(parse_spec(cfg.formula));
    ann.bind(preds.names());

    SynthesisResult res;
    Quantization q = cfg.quant;
    size_t turn = 0;
    const RefinementSchedule& sched = cfg.refinement;
    for (int it = 1;; ++it) {
        IterationReport rep;
        rep.index = it;
        rep.eta = q.eta;
        rep.mu = q.mu;
        rep.tau = q.tau;

        auto t0 = std::chrono::steady_clock::now();
        const auto sys = cfg.make_system(q);
        BuildOptions bo;
        bo.jobs = cfg.jobs;
        SymbolicModel model = build_symbolic_model(*sys, q, preds, bo);
        model.config_hash = cfg.hash();
        rep.abstraction_seconds = seconds_since(t0);
        rep.states = model.num_states();
        rep.signals = model.num_signals();
        rep.transitions = model.num_transitions();
        rep.warnings = model.warnings;
        for (size_t c = 0; c < model.num_states(); ++c)
            rep.blocked_cells += model.range(c, 0).first == model.range(c, model.num_signals() - 1).second ? 1 : 0;

        t0 = std::chrono::steady_clock::now();
        const Translation tr = translate(model, ann, cfg.nu);
        rep.v1 = tr.v1_count;
        rep.v2 = tr.v2_count;
        rep.edges = tr.game.num_edges();
        rep.copies = ann.num_copies();
        rep.threshold = tr.game.threshold.str();
        const ThresholdSolution sol = solve_threshold(tr.game);
        rep.solve_seconds = seconds_since(t0);
        rep.winning_vertices = region_size(sol.win);
        rep.positional = sol.positional;
        rep.complete = sol.complete;
        rep.product_vertices = sol.product_vertices;
        rep.initial_cells = tr.map.initial.size();
        for (uint32_t v : tr.map.initial) rep.initial_winning += sol.win[v] ? 1 : 0;

        const bool ok = rep.initial_cells > 0 && rep.initial_winning == rep.initial_cells;
        if (ok) {
            res.realized = true;
            res.controller = extract_controller(model, ann, tr, sol);
            res.iterations.push_back(rep);
            if (opt.progress) opt.progress(rep);
            return res;
        }

        rep.parity_winning = int64_t(region_size(solve_parity(tr.game).region(kP1)));

        // Pick the next parameter that can still be halved.
        std::string halved;
        for (size_t k = 0; k < sched.order.size() && halved.empty(); ++k) {
            const std::string& p = sched.order[(turn + k) % sched.order.size()];
            if (p == "eta") {
                bool fits = true;
                for (size_t i = 0; i < q.eta.size(); ++i) fits = fits && q.eta[i] / 2 >= sched.eta_min[i] * (1 - 1e-12);
                if (fits) for (double& e : q.eta) e /= 2;
                if (fits) halved = p;
            } else if (p == "mu") {
                bool fits = true;
                for (size_t i = 0; i < q.mu.size(); ++i) fits = fits && q.mu[i] / 2 >= sched.mu_min[i] * (1 - 1e-12);
                if (fits) for (double& m : q.mu) m /= 2;
                if (fits) halved = p;
            } else if (q.tau / 2 >= sched.tau_min * (1 - 1e-12)) {
                q.tau /= 2;
                halved = p;
            }
            if (!halved.empty()) turn = (turn + k + 1) % sched.order.size();
        }
        if (halved.empty()) res.stop_reason = "all parameters at their floors";
        else if (it >= sched.max_iterations) res.stop_reason = "iteration limit reached";
        else if (seconds_since(t_start) > sched.time_limit) res.stop_reason = "time limit reached";
        rep.next = res.stop_reason.empty() ? "halve " + halved : "stop (" + res.stop_reason + ")";
        res.iterations.push_back(rep);
        if (opt.progress) opt.progress(rep);
        if (!res.stop_reason.empty()) return res;
    }
}

} // namespace stsynth
