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

#include "abstraction.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "error.hpp"
#include "textio.hpp"

namespace stsynth {

namespace {

constexpr double kSlack = 1e-9;

double wrap_offset(double c, const Axis& ax)
{
    const double p = ax.period();
    double d = std::fmod(c - ax.lo, p);
    if (d < 0) d += p;
    return d;
}

// Box axis [lo, hi] against ball interval [c - r, c + r]; period taken from the state axis.
bool interval_contains(const Axis& box, const Axis& state_axis, double c, double r)
{
    if (!state_axis.wrap) return c - r >= box.lo && c + r <= box.hi;
    const double p = state_axis.period();
    if (box.hi - box.lo >= p) return true;
    if (2 * r >= p) return false;
    const double cc = box.lo + wrap_offset(c, Axis{box.lo, box.lo + p, true});
    return cc - r >= box.lo && cc + r <= box.hi;
}

bool interval_disjoint(const Axis& box, const Axis& state_axis, double c, double r)
{
    if (!state_axis.wrap) return c + r < box.lo || c - r > box.hi;
    const double p = state_axis.period();
    if (box.hi - box.lo >= p || 2 * r >= p) return false;
    const double cc = box.lo + wrap_offset(c, Axis{box.lo, box.lo + p, true});
    if (cc <= box.hi) return false;
    const double dist = std::min(cc - box.hi, box.lo + p - cc);
    return dist > r;
}

std::string join_names(LabelMask mask, const std::vector<std::string>& names)
{
    std::string out;
    for (size_t i = 0; i < names.size(); ++i) {
        if (!(mask >> i & 1)) continue;
        if (!out.empty()) out += ',';
        out += names[i];
    }
    return out.empty() ? "-" : out;
}

LabelMask parse_names(const std::string& text, const std::vector<std::string>& names)
{
    if (text == "-") return 0;
    LabelMask mask = 0;
    for (const std::string& tok : split(text, ',')) {
        auto it = std::find(names.begin(), names.end(), tok);
        if (it == names.end()) throw ConfigError("unknown predicate '" + tok + "' in label");
        mask |= LabelMask(1) << (it - names.begin());
    }
    return mask;
}

// Largest alpha over [0, len(u)], sampled densely inside each segment.
double alpha_sup(const ControlSystem& sys, const ControlSignal& u, double d)
{
    double best = d;
    const size_t K = u.segments();
    constexpr int kSamples = 16;
    for (size_t k = 0; k < K; ++k) {
        for (int j = 1; j <= kSamples; ++j) {
            const double t = u.tau * (double(k) + double(j) / kSamples);
            best = std::max(best, sys.alpha_forward(u, d, std::min(t, u.length())));
        }
    }
    return best;
}

bool valid_name(const std::string& s)
{
    if (s.empty()) return false;
    for (char c : s)
        if (!(std::isalnum((unsigned char)c) || c == '_')) return false;
    return true;
}

} // namespace

bool Predicate::holds(const SystemSpec& spec, std::span<const double> x) const
{
    if (kind == Kind::Halfspace) {
        double s = 0;
        for (size_t i = 0; i < coeffs.size(); ++i) s += coeffs[i] * x[i];
        return s > offset;
    }
    for (size_t i = 0; i < box.size(); ++i)
        if (!interval_contains(box[i], spec.state_box[i], x[i], 0.0)) return false;
    return true;
}

bool Predicate::holds_on_ball(const SystemSpec& spec, std::span<const double> x, std::span<const double> r) const
{
    if (kind == Kind::Halfspace) {
        double s = 0;
        for (size_t i = 0; i < coeffs.size(); ++i) s += coeffs[i] * x[i] - std::abs(coeffs[i]) * r[i];
        return s > offset;
    }
    for (size_t i = 0; i < box.size(); ++i)
        if (!interval_contains(box[i], spec.state_box[i], x[i], r[i])) return false;
    return true;
}

bool Predicate::fails_on_ball(const SystemSpec& spec, std::span<const double> x, std::span<const double> r) const
{
    if (kind == Kind::Halfspace) {
        double s = 0;
        for (size_t i = 0; i < coeffs.size(); ++i) s += coeffs[i] * x[i] + std::abs(coeffs[i]) * r[i];
        return s <= offset;
    }
    for (size_t i = 0; i < box.size(); ++i)
        if (interval_disjoint(box[i], spec.state_box[i], x[i], r[i])) return true;
    return false;
}

PredicateSet::PredicateSet(std::vector<Predicate> preds, const SystemSpec& spec) : preds_(std::move(preds))
{
    if (preds_.size() > 64) throw ConfigError("at most 64 predicates are supported");
    std::sort(preds_.begin(), preds_.end(), [](const Predicate& a, const Predicate& b) { return a.name < b.name; });
    for (size_t i = 0; i < preds_.size(); ++i) {
        const Predicate& p = preds_[i];
        if (!valid_name(p.name)) throw ConfigError("bad predicate name '" + p.name + "'");
        if (i > 0 && preds_[i - 1].name == p.name) throw ConfigError("duplicate predicate '" + p.name + "'");
        if (p.kind == Predicate::Kind::Halfspace) {
            if (p.coeffs.size() != spec.n()) throw ConfigError("predicate '" + p.name + "' has wrong dimension");
            for (size_t a = 0; a < spec.n(); ++a)
                if (spec.state_box[a].wrap && p.coeffs[a] != 0.0)
                    throw ConfigError("halfspace '" + p.name + "' uses a wrapped axis");
        } else {
            if (p.box.size() != spec.n()) throw ConfigError("predicate '" + p.name + "' has wrong dimension");
            for (const Axis& ax : p.box)
                if (!(ax.lo <= ax.hi)) throw ConfigError("predicate '" + p.name + "' has an empty box");
        }
    }
}

int PredicateSet::find(const std::string& name) const
{
    for (size_t i = 0; i < preds_.size(); ++i)
        if (preds_[i].name == name) return int(i);
    return -1;
}

std::vector<std::string> PredicateSet::names() const
{
    std::vector<std::string> out;
    for (const Predicate& p : preds_) out.push_back(p.name);
    return out;
}

LabelMask b_plus(const SystemSpec& spec, std::span<const double> x, std::span<const double> r, const PredicateSet& preds)
{
    LabelMask m = 0;
    for (size_t i = 0; i < preds.size(); ++i)
        if (preds[i].holds_on_ball(spec, x, r)) m |= LabelMask(1) << i;
    return m;
}

LabelMask b_minus(const SystemSpec& spec, std::span<const double> x, std::span<const double> r, const PredicateSet& preds)
{
    LabelMask m = 0;
    for (size_t i = 0; i < preds.size(); ++i)
        if (preds[i].fails_on_ball(spec, x, r)) m |= LabelMask(1) << i;
    return m;
}

LabelPair ball_labels(const SystemSpec& spec, std::span<const double> x, std::span<const double> r, const PredicateSet& preds)
{
    return {b_plus(spec, x, r, preds), b_minus(spec, x, r, preds)};
}

bool stays_inside(const ControlSystem& sys, const State& q, const ControlSignal& u, double eta_max)
{
    const SystemSpec& spec = sys.spec();
    const double r = alpha_sup(sys, u, eta_max);
    for (size_t i = 0; i < spec.n(); ++i) {
        const Axis& ax = spec.state_box[i];
        if (ax.wrap) continue;
        if (q[i] - r < ax.lo - kSlack || q[i] + r > ax.hi + kSlack) return false;
    }
    return true;
}

std::vector<uint32_t> successors(const ControlSystem& sys, const StateGrid& grid, size_t q,
                                 const ControlSignal& u, double eta_max)
{
    std::vector<uint32_t> out;
    const State xq = grid.coords(q);
    if (!stays_inside(sys, xq, u, eta_max)) return out;
    const SystemSpec& spec = sys.spec();
    const size_t n = spec.n();
    const double len = u.length();
    const double bf = sys.beta_forward(u, eta_max, len);
    const double bb = sys.beta_backward(u, eta_max, len);
    const State xe = nominal_endpoint(sys, xq, u);
    const std::vector<double>& eta = grid.eta();

    std::vector<std::vector<int64_t>> axis_idx(n);
    for (size_t i = 0; i < n; ++i) {
        const double pitch = 2 * eta[i];
        const double R = bf + eta[i] + kSlack;
        int64_t a = int64_t(std::ceil((xe[i] - R) / pitch));
        int64_t b = int64_t(std::floor((xe[i] + R) / pitch));
        const int64_t lo = grid.axis_lo(i), hi = grid.axis_hi(i);
        std::vector<int64_t>& v = axis_idx[i];
        if (grid.axis_wrap(i)) {
            const int64_t count = hi - lo + 1;
            if (b - a + 1 >= count) {
                for (int64_t l = lo; l <= hi; ++l) v.push_back(l);
            } else {
                for (int64_t l = a; l <= b; ++l) v.push_back(lo + (((l - lo) % count) + count) % count);
                std::sort(v.begin(), v.end());
                v.erase(std::unique(v.begin(), v.end()), v.end());
            }
        } else {
            for (int64_t l = std::max(a, lo); l <= std::min(b, hi); ++l) v.push_back(l);
        }
        if (v.empty()) return out;
    }

    GridIndex idx(n);
    std::vector<size_t> pos(n, 0);
    while (true) {
        for (size_t i = 0; i < n; ++i) idx[i] = axis_idx[i][pos[i]];
        const size_t flat = grid.flat(idx);
        if (flat != StateGrid::npos) {
            const State xt = grid.coords(flat);
            const State xb = nominal_backpoint(sys, xt, u);
            bool ok = true;
            for (size_t i = 0; i < n && ok; ++i) {
                if (spec.axis_distance(xt, xe, i) > bf + eta[i] + kSlack) ok = false;
                else if (spec.axis_distance(xb, xq, i) > bb + eta[i] + kSlack) ok = false;
            }
            if (ok) out.push_back(uint32_t(flat));
        }
        size_t i = n;
        while (i-- > 0) {
            if (++pos[i] < axis_idx[i].size()) break;
            pos[i] = 0;
        }
        if (i == size_t(-1)) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

TransitionLabels label_transition(const ControlSystem& sys, const StateGrid& grid, size_t q,
                                  const ControlSignal& u, size_t q_next, const PredicateSet& preds,
                                  double eta_max)
{
    const SystemSpec& spec = sys.spec();
    const State a = grid.coords(q), b = grid.coords(q_next);
    TransitionLabels out;
    out.rho_exists.push_back(ball_labels(spec, a, grid.eta(), preds));
    out.rho_exists.push_back(ball_labels(spec, b, grid.eta(), preds));
    const std::vector<double> r(spec.n(), alpha_sup(sys, u, eta_max));
    const LabelPair pa = ball_labels(spec, a, r, preds), pb = ball_labels(spec, b, r, preds);
    out.rho_forall = {pa.pos & pb.pos, pa.neg & pb.neg};
    return out;
}

TransitionLabels SymbolicModel::labels(size_t q, uint64_t transition) const
{
    TransitionLabels out;
    out.rho_exists = {state_pairs[q], state_pairs[targets[transition]]};
    out.rho_forall = forall_pool[forall_ids[transition]];
    return out;
}

std::string format_label_pair(const LabelPair& pair, const std::vector<std::string>& names)
{
    return join_names(pair.pos, names) + "|" + join_names(pair.neg, names);
}

LabelPair parse_label_pair(const std::string& text, const std::vector<std::string>& names)
{
    const auto parts = split(text, '|');
    if (parts.size() != 2) throw ConfigError("malformed label pair '" + text + "'");
    return {parse_names(parts[0], names), parse_names(parts[1], names)};
}

SymbolicModel build_symbolic_model(const ControlSystem& sys, const Quantization& quant,
                                   const PredicateSet& preds, const BuildOptions& options)
{
    const SystemSpec& spec = sys.spec();
    quant.validate(spec);
    SymbolicModel m;
    m.state_box = spec.state_box;
    m.grid = StateGrid(spec, quant.eta);
    m.signals = signal_set(input_grid(spec.input_box, quant.mu, quant.pitch_mode), quant.tau,
                           quant.min_segments(), quant.max_segments());
    if (m.signals.size() == 0) throw ConfigError("empty signal set");
    m.predicate_names = preds.names();
    if (m.grid.size() >= size_t(UINT32_MAX)) throw ConfigError("state grid too large");

    for (const State& x0 : spec.init_states) {
        if (!spec.contains(x0)) throw ConfigError("initial state outside the state box");
        size_t f;
        try {
            f = m.grid.project_flat(x0);
        } catch (const std::out_of_range&) {
            throw ConfigError("initial state cannot be projected");
        }
        m.initials.push_back(uint32_t(f));
    }
    std::sort(m.initials.begin(), m.initials.end());
    m.initials.erase(std::unique(m.initials.begin(), m.initials.end()), m.initials.end());

    const size_t N = m.grid.size(), S = m.signals.size();
    const double eta_max = quant.eta_max(spec);
    m.state_pairs.resize(N);
    for (size_t q = 0; q < N; ++q) m.state_pairs[q] = ball_labels(spec, m.grid.coords(q), m.grid.eta(), preds);

    std::vector<double> rho_r(S);
    for (size_t s = 0; s < S; ++s) rho_r[s] = alpha_sup(sys, m.signals.signals[s], eta_max);

    struct Slot
    {
        std::vector<uint32_t> targets;
        std::vector<LabelPair> forall;
    };
    std::vector<std::vector<Slot>> work(N);
    auto run = [&](size_t q) {
        std::vector<Slot>& out = work[q];
        out.resize(S);
        const State xq = m.grid.coords(q);
        for (size_t s = 0; s < S; ++s) {
            const ControlSignal& u = m.signals.signals[s];
            Slot& slot = out[s];
            slot.targets = successors(sys, m.grid, q, u, eta_max);
            const std::vector<double> r(spec.n(), rho_r[s]);
            const LabelPair pa = ball_labels(spec, xq, r, preds);
            for (uint32_t t : slot.targets) {
                const LabelPair pb = ball_labels(spec, m.grid.coords(t), r, preds);
                slot.forall.push_back({pa.pos & pb.pos, pa.neg & pb.neg});
            }
        }
    };

    const unsigned jobs = std::max(1u, options.jobs);
    if (jobs == 1) {
        for (size_t q = 0; q < N; ++q) run(q);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(jobs);
        for (unsigned j = 0; j < jobs; ++j) {
            pool.emplace_back([&, j] {
                try {
                    for (size_t q = j; q < N; q += jobs) run(q);
                } catch (...) {
                    errors[j] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    std::map<LabelPair, uint32_t> intern;
    m.offsets.assign(N * S + 1, 0);
    for (size_t q = 0; q < N; ++q) {
        for (size_t s = 0; s < S; ++s) {
            Slot& slot = work[q][s];
            for (size_t k = 0; k < slot.targets.size(); ++k) {
                auto [it, fresh] = intern.emplace(slot.forall[k], uint32_t(m.forall_pool.size()));
                if (fresh) m.forall_pool.push_back(slot.forall[k]);
                m.targets.push_back(slot.targets[k]);
                m.forall_ids.push_back(it->second);
            }
            m.offsets[q * S + s + 1] = m.targets.size();
        }
        std::vector<Slot>().swap(work[q]);
    }

    for (uint32_t q0 : m.initials) {
        if (m.offsets[(q0 + 1) * S] == m.offsets[q0 * S])
            m.warnings.push_back("initial cell " + std::to_string(q0) + " has no outgoing transitions");
    }
    return m;
}

void SymbolicModel::save(std::ostream& os) const
{
    const size_t n = state_box.size();
    os << "stsynth-model 1\n";
    os << "config " << (config_hash.empty() ? "-" : config_hash) << "\n";
    os << "axes " << n << "\n";
    for (const Axis& ax : state_box)
        os << "axis " << format_double(ax.lo) << ' ' << format_double(ax.hi) << ' ' << (ax.wrap ? 1 : 0) << "\n";
    os << "eta";
    for (double e : grid.eta()) os << ' ' << format_double(e);
    os << "\n";
    os << "predicates " << predicate_names.size();
    for (const auto& p : predicate_names) os << ' ' << p;
    os << "\n";
    os << "inputs " << signals.inputs.size() << "\n";
    for (const Input& in : signals.inputs) {
        os << "input";
        for (double v : in) os << ' ' << format_double(v);
        os << "\n";
    }
    os << "tau " << format_double(signals.size() ? signals.signals[0].tau : 0.0) << "\n";
    os << "signals " << signals.size() << "\n";
    for (size_t s = 0; s < signals.size(); ++s) {
        os << s << '\t';
        for (size_t k = 0; k < signals.sequences[s].size(); ++k) os << (k ? " " : "") << signals.sequences[s][k];
        os << "\n";
    }
    os << "initials " << initials.size();
    for (uint32_t q : initials) os << ' ' << q;
    os << "\n";
    os << "states " << num_states() << "\n";
    for (size_t q = 0; q < num_states(); ++q) {
        const GridIndex idx = grid.index(q);
        os << q << '\t';
        for (size_t i = 0; i < idx.size(); ++i) os << (i ? " " : "") << idx[i];
        os << '\t' << format_label_pair(state_pairs[q], predicate_names) << "\n";
    }
    os << "transitions " << num_transitions() << "\n";
    const size_t S = num_signals();
    for (size_t q = 0; q < num_states(); ++q) {
        for (size_t s = 0; s < S; ++s) {
            auto [b, e] = range(q, s);
            for (uint64_t t = b; t < e; ++t) {
                const uint32_t q2 = targets[t];
                os << q << '\t' << s << '\t' << q2 << '\t'
                   << format_label_pair(state_pairs[q], predicate_names) << ';'
                   << format_label_pair(state_pairs[q2], predicate_names) << '\t'
                   << format_label_pair(forall_pool[forall_ids[t]], predicate_names) << "\n";
            }
        }
    }
    os << "warnings " << warnings.size() << "\n";
    for (const auto& w : warnings) os << w << "\n";
}

namespace {

std::vector<std::string> keyed(std::istream& is, const char* key)
{
    const std::string line = expect_line(is, key);
    auto tok = split_ws(line);
    if (tok.empty() || tok[0] != key) throw ConfigError(std::string("model: expected '") + key + "'");
    tok.erase(tok.begin());
    return tok;
}

size_t count_of(std::istream& is, const char* key)
{
    auto tok = keyed(is, key);
    if (tok.empty()) throw ConfigError(std::string("model: missing count for '") + key + "'");
    return size_t(parse_int(tok[0]));
}

} // namespace

SymbolicModel SymbolicModel::load(std::istream& is)
{
    SymbolicModel m;
    if (trim(expect_line(is, "model")) != "stsynth-model 1") throw ConfigError("not a model file");
    {
        auto tok = keyed(is, "config");
        if (tok.size() != 1) throw ConfigError("model: bad config line");
        if (tok[0] != "-") m.config_hash = tok[0];
    }
    const size_t n = count_of(is, "axes");
    for (size_t i = 0; i < n; ++i) {
        auto tok = keyed(is, "axis");
        if (tok.size() != 3) throw ConfigError("model: bad axis line");
        m.state_box.push_back({parse_double(tok[0]), parse_double(tok[1]), parse_int(tok[2]) != 0});
    }
    std::vector<double> eta;
    for (auto& t : keyed(is, "eta")) eta.push_back(parse_double(t));
    SystemSpec spec;
    spec.state_box = m.state_box;
    m.grid = StateGrid(spec, eta);
    {
        auto tok = keyed(is, "predicates");
        if (tok.empty() || size_t(parse_int(tok[0])) != tok.size() - 1) throw ConfigError("model: bad predicates line");
        m.predicate_names.assign(tok.begin() + 1, tok.end());
    }
    const size_t ni = count_of(is, "inputs");
    std::vector<Input> inputs;
    for (size_t i = 0; i < ni; ++i) {
        Input in;
        for (auto& t : keyed(is, "input")) in.push_back(parse_double(t));
        inputs.push_back(in);
    }
    double tau;
    {
        auto tok = keyed(is, "tau");
        if (tok.size() != 1) throw ConfigError("model: bad tau line");
        tau = parse_double(tok[0]);
    }
    const size_t S = count_of(is, "signals");
    m.signals.inputs = inputs;
    for (size_t s = 0; s < S; ++s) {
        auto cols = split(expect_line(is, "signal"), '\t');
        if (cols.size() != 2 || size_t(parse_int(cols[0])) != s) throw ConfigError("model: bad signal line");
        std::vector<uint32_t> seq;
        ControlSignal u;
        u.tau = tau;
        for (auto& t : split_ws(cols[1])) {
            const int64_t k = parse_int(t);
            if (k < 0 || size_t(k) >= inputs.size()) throw ConfigError("model: input index out of range");
            seq.push_back(uint32_t(k));
            u.inputs.push_back(inputs[k]);
        }
        m.signals.sequences.push_back(seq);
        m.signals.signals.push_back(u);
    }
    {
        auto tok = keyed(is, "initials");
        if (tok.empty() || size_t(parse_int(tok[0])) != tok.size() - 1) throw ConfigError("model: bad initials line");
        for (size_t i = 1; i < tok.size(); ++i) m.initials.push_back(uint32_t(parse_int(tok[i])));
    }
    const size_t N = count_of(is, "states");
    if (N != m.grid.size()) throw ConfigError("model: state count does not match the grid");
    m.state_pairs.resize(N);
    for (size_t q = 0; q < N; ++q) {
        auto cols = split(expect_line(is, "state"), '\t');
        if (cols.size() != 3 || size_t(parse_int(cols[0])) != q) throw ConfigError("model: bad state line");
        m.state_pairs[q] = parse_label_pair(cols[2], m.predicate_names);
    }
    for (uint32_t q0 : m.initials)
        if (q0 >= N) throw ConfigError("model: initial state out of range");
    const size_t T = count_of(is, "transitions");
    m.offsets.assign(N * S + 1, 0);
    std::map<LabelPair, uint32_t> intern;
    size_t last_slot = 0;
    for (size_t t = 0; t < T; ++t) {
        auto cols = split(expect_line(is, "transition"), '\t');
        if (cols.size() != 5) throw ConfigError("model: bad transition line");
        const size_t q = size_t(parse_int(cols[0])), s = size_t(parse_int(cols[1])), q2 = size_t(parse_int(cols[2]));
        if (q >= N || s >= S || q2 >= N) throw ConfigError("model: transition index out of range");
        const size_t slot = q * S + s;
        if (slot < last_slot) throw ConfigError("model: transitions out of order");
        for (size_t k = last_slot; k < slot; ++k) m.offsets[k + 1] = m.targets.size();
        last_slot = slot;
        const LabelPair pair = parse_label_pair(cols[4], m.predicate_names);
        auto [it, fresh] = intern.emplace(pair, uint32_t(m.forall_pool.size()));
        if (fresh) m.forall_pool.push_back(pair);
        m.targets.push_back(uint32_t(q2));
        m.forall_ids.push_back(it->second);
    }
    for (size_t k = last_slot; k < N * S; ++k) m.offsets[k + 1] = m.targets.size();
    const size_t W = count_of(is, "warnings");
    for (size_t i = 0; i < W; ++i) m.warnings.push_back(expect_line(is, "warning"));
    return m;
}

} // namespace stsynth
