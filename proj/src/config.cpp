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

#include "config.hpp"

#include <cctype>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "error.hpp"
#include "logic.hpp"
#include "textio.hpp"

namespace stsynth {

namespace {

struct Expr
{
    const std::string& s;
    size_t i = 0;

    void skip()
    {
        while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
    }
    [[noreturn]] void fail(const std::string& what) const
    {
        throw ConfigError("bad expression '" + s + "': " + what);
    }
    double primary()
    {
        skip();
        if (i >= s.size()) fail("unexpected end");
        if (s[i] == '(') {
            ++i;
            const double v = sum();
            skip();
            if (i >= s.size() || s[i] != ')') fail("missing ')'");
            ++i;
            return v;
        }
        if (s[i] == '-' || s[i] == '+') {
            const bool neg = s[i++] == '-';
            const double v = primary();
            return neg ? -v : v;
        }
        if (s.compare(i, 2, "pi") == 0) {
            i += 2;
            return std::numbers::pi;
        }
        const size_t start = i;
        while (i < s.size() && (std::isdigit((unsigned char)s[i]) || s[i] == '.' || s[i] == 'e' || s[i] == 'E' ||
                                ((s[i] == '-' || s[i] == '+') && i > start && (s[i - 1] == 'e' || s[i - 1] == 'E'))))
            ++i;
        if (i == start) fail("expected a number");
        return parse_double(s.substr(start, i - start));
    }
    double product()
    {
        double v = primary();
        for (;;) {
            skip();
            if (i < s.size() && (s[i] == '*' || s[i] == '/')) {
                const char op = s[i++];
                const double r = primary();
                v = op == '*' ? v * r : v / r;
            } else {
                return v;
            }
        }
    }
    double sum()
    {
        double v = product();
        for (;;) {
            skip();
            if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
                const char op = s[i++];
                const double r = product();
                v = op == '+' ? v + r : v - r;
            } else {
                return v;
            }
        }
    }
};

double number(const std::string& text)
{
    const std::string t = trim(text);
    if (t == "inf") return INFINITY;
    if (t == "-inf") return -INFINITY;
    return eval_expression(t);
}

std::vector<double> numbers(const std::string& text)
{
    std::vector<double> out;
    for (const auto& tok : split_ws(text)) out.push_back(number(tok));
    return out;
}

std::string join(const std::vector<double>& v)
{
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + format_double(v[i]);
    return out;
}

bool boolean(const std::string& text)
{
    const std::string t = trim(text);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw ConfigError("expected a boolean, got '" + t + "'");
}

int64_t integer(const std::string& text)
{
    const double v = number(text);
    if (v != std::floor(v) || std::fabs(v) > 9e15) throw ConfigError("expected an integer, got '" + trim(text) + "'");
    return int64_t(v);
}

Predicate parse_predicate(const std::string& name, const std::string& text)
{
    Predicate p;
    p.name = name;
    auto tok = split_ws(text);
    if (tok.empty()) throw ConfigError("predicate '" + name + "' is empty");
    if (tok[0] == "halfspace") {
        p.kind = Predicate::Kind::Halfspace;
        size_t k = 1;
        for (; k < tok.size() && tok[k] != ">"; ++k) p.coeffs.push_back(number(tok[k]));
        if (k + 2 != tok.size()) throw ConfigError("predicate '" + name + "': expected 'halfspace a1 .. an > b'");
        p.offset = number(tok[k + 1]);
        bool nonzero = false;
        for (double c : p.coeffs) nonzero = nonzero || c != 0.0;
        if (!nonzero) throw ConfigError("predicate '" + name + "' has a zero normal");
    } else if (tok[0] == "box") {
        p.kind = Predicate::Kind::Box;
        for (size_t k = 1; k < tok.size(); ++k) {
            if (tok[k] == "*") {
                p.box.push_back({-INFINITY, INFINITY, false});
                continue;
            }
            auto lh = split(tok[k], ':');
            if (lh.size() != 2) throw ConfigError("predicate '" + name + "': box axes are 'lo:hi' or '*'");
            p.box.push_back({number(lh[0]), number(lh[1]), false});
        }
    } else {
        throw ConfigError("predicate '" + name + "': unknown kind '" + tok[0] + "'");
    }
    return p;
}

std::string predicate_text(const Predicate& p)
{
    std::string out;
    if (p.kind == Predicate::Kind::Halfspace) {
        out = "halfspace " + join(p.coeffs) + " > " + format_double(p.offset);
    } else {
        out = "box";
        for (const Axis& a : p.box) {
            if (std::isinf(a.lo) && std::isinf(a.hi)) out += " *";
            else out += " " + format_double(a.lo) + ":" + format_double(a.hi);
        }
    }
    return out;
}

const char* kRobotExample = R"(# Unicycle with uncertain speed in a 12 x 12 arena.
[system]
model = robot
v = 2.5
lambda_bar = 0.05
state_lo = -6 -6 0
state_hi = 6 6 2*pi
wrap = 0 0 1
input_lo = -pi/2
input_hi = pi/2
init = 0 0 pi/4

[quantization]
eta = 1 1 pi/8
mu = pi/2
tau = 0.5
ell_min = 0.5
ell_max = 1
pitch_mode = half

[predicates]
px = halfspace 1 0 0 > 0
py = halfspace 0 1 0 > 0

[spec]
formula = GF (px && py)

[threshold]
nu = 0.75

[refinement]
order = eta mu tau
eta_min = 0.5 0.5 pi/16
mu_min = pi/4
tau_min = 0.5
max_iterations = 6
time_limit = 1800

[simulation]
steps = 500
seed = 0
runs = 20
grace = 50
burn_in = 0.1
)";

} // namespace

double eval_expression(const std::string& text)
{
    Expr e{text};
    const double v = e.sum();
    e.skip();
    if (e.i != text.size()) e.fail("trailing characters");
    return v;
}

Config parse_config(const std::string& text)
{
    Config c;
    std::map<std::string, std::map<std::string, std::string>> sections;
    std::vector<std::string> predicate_order;
    std::string current;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    static const std::set<std::string> known{"system", "quantization", "predicates", "spec", "threshold", "refinement", "simulation"};
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        auto where = [&] { return "config line " + std::to_string(lineno) + ": "; };
        if (t.front() == '[') {
            if (t.back() != ']') throw ConfigError(where() + "malformed section header");
            current = trim(t.substr(1, t.size() - 2));
            if (!known.count(current)) throw ConfigError(where() + "unknown section [" + current + "]");
            continue;
        }
        const size_t eq = t.find('=');
        if (eq == std::string::npos) throw ConfigError(where() + "expected 'key = value'");
        if (current.empty()) throw ConfigError(where() + "setting outside a section");
        const std::string key = trim(t.substr(0, eq)), value = trim(t.substr(eq + 1));
        if (sections[current].count(key)) throw ConfigError(where() + "duplicate key '" + key + "'");
        sections[current][key] = value;
        if (current == "predicates") predicate_order.push_back(key);
    }

    auto take = [&](const std::string& sec, const std::string& key) -> const std::string* {
        auto s = sections.find(sec);
        if (s == sections.end()) return nullptr;
        auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    };
    auto require = [&](const std::string& sec, const std::string& key) -> const std::string& {
        const std::string* v = take(sec, key);
        if (!v) throw ConfigError("config: missing [" + sec + "] " + key);
        return *v;
    };
    auto check_keys = [&](const std::string& sec, std::set<std::string> allowed) {
        auto s = sections.find(sec);
        if (s == sections.end()) return;
        for (const auto& kv : s->second)
            if (!allowed.count(kv.first)) throw ConfigError("config: unknown key [" + sec + "] " + kv.first);
    };

    check_keys("system", {"model", "v", "lambda_bar", "state_lo", "state_hi", "wrap", "input_lo", "input_hi", "init",
                          "paper_beta", "drift", "step"});
    check_keys("quantization", {"eta", "mu", "tau", "ell_min", "ell_max", "pitch_mode"});
    check_keys("spec", {"formula"});
    check_keys("threshold", {"nu"});
    check_keys("refinement", {"order", "eta_min", "mu_min", "tau_min", "max_iterations", "time_limit"});
    check_keys("simulation", {"steps", "seed", "runs", "grace", "burn_in", "h", "jobs"});

    if (auto v = take("system", "model")) c.model = trim(*v);
    if (auto v = take("system", "v")) c.speed = number(*v);
    if (auto v = take("system", "lambda_bar")) c.system.lambda_bar = number(*v);
    if (auto v = take("system", "paper_beta")) c.system.paper_beta = boolean(*v);
    if (auto v = take("system", "drift")) c.drift = numbers(*v);
    if (auto v = take("system", "step")) c.step = number(*v);
    const auto lo = numbers(require("system", "state_lo")), hi = numbers(require("system", "state_hi"));
    if (lo.size() != hi.size() || lo.empty()) throw ConfigError("config: state_lo and state_hi differ in dimension");
    std::vector<double> wrap(lo.size(), 0.0);
    if (auto v = take("system", "wrap")) wrap = numbers(*v);
    if (wrap.size() != lo.size()) throw ConfigError("config: wrap has the wrong dimension");
    for (size_t i = 0; i < lo.size(); ++i) c.system.state_box.push_back({lo[i], hi[i], wrap[i] != 0.0});
    const auto ilo = numbers(require("system", "input_lo")), ihi = numbers(require("system", "input_hi"));
    if (ilo.size() != ihi.size() || ilo.empty()) throw ConfigError("config: input_lo and input_hi differ in dimension");
    for (size_t i = 0; i < ilo.size(); ++i) c.system.input_box.push_back({ilo[i], ihi[i], false});
    for (const auto& part : split(require("system", "init"), '|')) c.system.init_states.push_back(numbers(part));

    c.quant.eta = numbers(require("quantization", "eta"));
    c.quant.mu = numbers(require("quantization", "mu"));
    c.quant.tau = number(require("quantization", "tau"));
    c.quant.ell_min = number(require("quantization", "ell_min"));
    c.quant.ell_max = number(require("quantization", "ell_max"));
    if (auto v = take("quantization", "pitch_mode")) {
        const std::string m = trim(*v);
        if (m == "half") c.quant.pitch_mode = PitchMode::Half;
        else if (m == "paper") c.quant.pitch_mode = PitchMode::Paper;
        else throw ConfigError("config: pitch_mode must be 'half' or 'paper'");
    }

    for (const auto& name : predicate_order) c.predicates.push_back(parse_predicate(name, sections["predicates"][name]));
    c.formula = trim(require("spec", "formula"));
    c.nu = parse_rational(require("threshold", "nu"));

    RefinementSchedule& r = c.refinement;
    if (auto v = take("refinement", "order")) r.order = split_ws(*v);
    if (auto v = take("refinement", "eta_min")) r.eta_min = numbers(*v);
    if (auto v = take("refinement", "mu_min")) r.mu_min = numbers(*v);
    if (auto v = take("refinement", "tau_min")) r.tau_min = number(*v);
    if (auto v = take("refinement", "max_iterations")) r.max_iterations = int(integer(*v));
    if (auto v = take("refinement", "time_limit")) r.time_limit = number(*v);
    if (r.eta_min.empty()) for (double e : c.quant.eta) r.eta_min.push_back(e / 2);
    if (r.mu_min.empty()) for (double m : c.quant.mu) r.mu_min.push_back(m / 2);
    if (r.tau_min == 0.0) r.tau_min = c.quant.tau;

    SimulationOptions& s = c.simulation;
    if (auto v = take("simulation", "steps")) s.steps = integer(*v);
    if (auto v = take("simulation", "seed")) s.seed = uint64_t(integer(*v));
    if (auto v = take("simulation", "runs")) s.runs = integer(*v);
    if (auto v = take("simulation", "grace")) s.grace = integer(*v);
    if (auto v = take("simulation", "burn_in")) s.burn_in = number(*v);
    if (auto v = take("simulation", "h")) s.h = number(*v);
    if (auto v = take("simulation", "jobs")) c.jobs = unsigned(integer(*v));

    c.validate();
    return c;
}

void Config::validate() const
{
    if (model != "robot" && model != "drift") throw ConfigError("config: model must be 'robot' or 'drift'");
    if (model == "robot") {
        if (system.n() != 3 || system.m() != 1) throw ConfigError("config: the robot has 3 state axes and 1 input");
        if (!(speed > 0)) throw ConfigError("config: v must be positive");
        if (!system.state_box[2].wrap) throw ConfigError("config: the robot heading axis must be wrapped");
    } else if (drift.size() != system.n() || system.m() != system.n()) {
        throw ConfigError("config: the drift model needs one drift value and one input per state axis");
    }
    if (!(system.lambda_bar >= 0 && system.lambda_bar < 1)) throw ConfigError("config: lambda_bar must lie in [0, 1)");
    for (const Axis& a : system.state_box)
        if (!(a.lo < a.hi)) throw ConfigError("config: empty state interval");
    for (const Axis& a : system.input_box)
        if (!(a.lo <= a.hi)) throw ConfigError("config: empty input interval");
    if (system.init_states.empty()) throw ConfigError("config: no initial state");
    for (const State& x : system.init_states) {
        if (x.size() != system.n()) throw ConfigError("config: initial state has the wrong dimension");
        for (size_t i = 0; i < x.size(); ++i) {
            const Axis& a = system.state_box[i];
            if (a.wrap) continue;
            if (!(x[i] > a.lo && x[i] < a.hi)) throw ConfigError("config: initial states must lie in the interior of the state box");
        }
    }
    quant.validate(system);
    if (nu.num < 0) throw ConfigError("config: nu must be non-negative");
    for (const auto& o : refinement.order)
        if (o != "eta" && o != "mu" && o != "tau") throw ConfigError("config: refinement order entries are eta, mu, tau");
    if (refinement.eta_min.size() != quant.eta.size() || refinement.mu_min.size() != quant.mu.size())
        throw ConfigError("config: refinement floors have the wrong dimension");
    for (double v : refinement.eta_min)
        if (!(v > 0)) throw ConfigError("config: eta floors must be positive");
    for (double v : refinement.mu_min)
        if (!(v > 0)) throw ConfigError("config: mu floors must be positive");
    if (!(refinement.tau_min > 0)) throw ConfigError("config: tau floor must be positive");
    if (refinement.max_iterations < 1) throw ConfigError("config: max_iterations must be at least 1");
    if (simulation.steps < 1 || simulation.runs < 1 || simulation.grace < 1) throw ConfigError("config: simulation counts must be positive");
    if (!(simulation.burn_in >= 0 && simulation.burn_in < 1)) throw ConfigError("config: burn_in is a fraction in [0, 1)");
    if (simulation.h < 0 || step < 0) throw ConfigError("config: steps must be non-negative");
    if (jobs < 1) throw ConfigError("config: jobs must be at least 1");
    PredicateSet check(predicates, system);
    PathFormula phi = parse_spec(formula);
    ParityAnnotation ann = compile_parity(phi);
    ann.bind(check.names());
}

std::string Config::canonical() const
{
    std::ostringstream os;
    os << "[system]\n";
    os << "model = " << model << "\n";
    if (model == "robot") os << "v = " << format_double(speed) << "\n";
    else os << "drift = " << join(drift) << "\n";
    os << "lambda_bar = " << format_double(system.lambda_bar) << "\n";
    std::vector<double> lo, hi, wr, ilo, ihi;
    for (const Axis& a : system.state_box) {
        lo.push_back(a.lo);
        hi.push_back(a.hi);
        wr.push_back(a.wrap ? 1 : 0);
    }
    for (const Axis& a : system.input_box) {
        ilo.push_back(a.lo);
        ihi.push_back(a.hi);
    }
    os << "state_lo = " << join(lo) << "\nstate_hi = " << join(hi) << "\nwrap = " << join(wr) << "\n";
    os << "input_lo = " << join(ilo) << "\ninput_hi = " << join(ihi) << "\n";
    os << "init =";
    for (size_t i = 0; i < system.init_states.size(); ++i) os << (i ? " | " : " ") << join(system.init_states[i]);
    os << "\npaper_beta = " << (system.paper_beta ? "true" : "false") << "\n";
    os << "step = " << format_double(step) << "\n";
    os << "\n[quantization]\n";
    os << "eta = " << join(quant.eta) << "\nmu = " << join(quant.mu) << "\n";
    os << "tau = " << format_double(quant.tau) << "\nell_min = " << format_double(quant.ell_min)
       << "\nell_max = " << format_double(quant.ell_max) << "\n";
    os << "pitch_mode = " << (quant.pitch_mode == PitchMode::Half ? "half" : "paper") << "\n";
    os << "\n[predicates]\n";
    for (const Predicate& p : predicates) os << p.name << " = " << predicate_text(p) << "\n";
    os << "\n[spec]\nformula = " << parse_spec(formula).str() << "\n";
    os << "\n[threshold]\nnu = " << nu.str() << "\n";
    os << "\n[refinement]\norder =";
    for (const auto& o : refinement.order) os << " " << o;
    os << "\neta_min = " << join(refinement.eta_min) << "\nmu_min = " << join(refinement.mu_min) << "\n";
    os << "tau_min = " << format_double(refinement.tau_min) << "\nmax_iterations = " << refinement.max_iterations << "\n";
    os << "time_limit = " << format_double(refinement.time_limit) << "\n";
    os << "\n[simulation]\nsteps = " << simulation.steps << "\nseed = " << simulation.seed << "\nruns = " << simulation.runs
       << "\ngrace = " << simulation.grace << "\nburn_in = " << format_double(simulation.burn_in)
       << "\nh = " << format_double(simulation.h) << "\njobs = " << jobs << "\n";
    return os.str();
}

// Simulation settings do not change the synthesized controller.
std::string Config::hash() const
{
    const std::string all = canonical();
    return hash_hex(all.substr(0, all.find("\n[simulation]")));
}

std::unique_ptr<ControlSystem> Config::make_system() const { return make_system(quant); }

std::unique_ptr<ControlSystem> Config::make_system(const Quantization& q) const
{
    if (model == "robot") return std::make_unique<RobotSystem>(system, speed);
    const double h = step > 0 ? step : q.tau / 50;
    return make_drift_system(system, drift, h);
}

PredicateSet Config::predicate_set() const { return PredicateSet(predicates, system); }

Config load_config(const std::string& path) { return parse_config(read_file(path)); }

Config robot_example_config() { return parse_config(kRobotExample); }

} // namespace stsynth
