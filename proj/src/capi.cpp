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

#include "stsynth/stsynth.h"

#include <fstream>
#include <sstream>

#include "config.hpp"
#include "error.hpp"
#include "harness.hpp"
#include "synthesis.hpp"
#include "textio.hpp"
#include "threshold.hpp"

using namespace stsynth;

struct stsynth_config
{
    Config cfg;
    std::string text;
};
struct stsynth_model { SymbolicModel model; };
struct stsynth_annotation { ParityAnnotation ann; };
struct stsynth_game { Game game; };
struct stsynth_solution { ThresholdSolution sol; };
struct stsynth_result { SynthesisResult res; };
struct stsynth_controller { SymbolicController sc; };
struct stsynth_run { ClosedLoopRun run; };

namespace {

thread_local std::string g_error;

class IoError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

template <class F>
int guarded(F&& f)
{
    try {
        g_error.clear();
        return f();
    } catch (const ConfigError& e) {
        g_error = e.what();
        return STSYNTH_CONFIG;
    } catch (const OverflowError& e) {
        g_error = e.what();
        return STSYNTH_OVERFLOW;
    } catch (const UncontrollableState& e) {
        g_error = e.what();
        return STSYNTH_UNCONTROLLABLE;
    } catch (const IoError& e) {
        g_error = e.what();
        return STSYNTH_IO;
    } catch (const InvariantError& e) {
        g_error = e.what();
        return STSYNTH_INVARIANT;
    } catch (const std::invalid_argument& e) {
        g_error = e.what();
        return STSYNTH_CONFIG;
    } catch (const std::exception& e) {
        g_error = std::string("internal error: ") + e.what();
        return STSYNTH_INVARIANT;
    } catch (...) {
        g_error = "internal error";
        return STSYNTH_INVARIANT;
    }
}

void need(const void* p, const char* what)
{
    if (!p) throw ConfigError(std::string("null ") + what);
}

template <class T>
T load_from(const char* path, T (*loader)(std::istream&))
{
    need(path, "path");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(std::string("cannot open ") + path);
    return loader(in);
}

template <class T>
void save_to(const char* path, const T& obj)
{
    need(path, "path");
    std::ostringstream os;
    obj.save(os);
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << os.str())) throw IoError(std::string("cannot write ") + path);
}

void emit(stsynth_text_fn fn, void* user, const std::string& text)
{
    if (fn) fn(text.c_str(), user);
}

bool boolean(const std::string& v)
{
    if (v == "true" || v == "1" || v == "on") return true;
    if (v == "false" || v == "0" || v == "off") return false;
    throw ConfigError("expected a boolean, got '" + v + "'");
}

Quantization controller_quantization(const Config& cfg, const SymbolicController& sc)
{
    Quantization q = cfg.quant;
    q.eta = sc.eta;
    if (!sc.signals.signals.empty()) q.tau = sc.signals.signals.front().tau;
    return q;
}

} // namespace

extern "C" {

const char* stsynth_version(void) { return "1.0.0"; }

const char* stsynth_last_error(void) { return g_error.c_str(); }

int stsynth_config_load(const char* path, stsynth_config** out)
{
    return guarded([&] {
        need(out, "output");
        need(path, "path");
        std::ifstream probe(path);
        if (!probe) throw IoError(std::string("cannot open ") + path);
        *out = new stsynth_config{load_config(path), {}};
        return STSYNTH_OK;
    });
}

int stsynth_config_parse(const char* text, stsynth_config** out)
{
    return guarded([&] {
        need(out, "output");
        need(text, "text");
        *out = new stsynth_config{parse_config(text), {}};
        return STSYNTH_OK;
    });
}

int stsynth_config_robot_example(stsynth_config** out)
{
    return guarded([&] {
        need(out, "output");
        *out = new stsynth_config{robot_example_config(), {}};
        return STSYNTH_OK;
    });
}

int stsynth_config_set(stsynth_config* c, const char* key, const char* value)
{
    return guarded([&] {
        need(c, "config");
        need(key, "key");
        need(value, "value");
        const std::string k = key, v = trim(value);
        Config& cfg = c->cfg;
        if (k == "paper_beta") cfg.system.paper_beta = boolean(v);
        else if (k == "pitch_mode") {
            if (v == "half") cfg.quant.pitch_mode = PitchMode::Half;
            else if (v == "paper") cfg.quant.pitch_mode = PitchMode::Paper;
            else throw ConfigError("pitch mode must be 'half' or 'paper'");
        } else if (k == "jobs") {
            const int64_t j = parse_int(v);
            if (j < 1 || j > 1024) throw ConfigError("jobs must be in [1, 1024]");
            cfg.jobs = unsigned(j);
        } else if (k == "seed") cfg.simulation.seed = uint64_t(parse_int(v));
        else if (k == "steps") cfg.simulation.steps = parse_int(v);
        else if (k == "runs") cfg.simulation.runs = parse_int(v);
        else if (k == "grace") cfg.simulation.grace = parse_int(v);
        else throw ConfigError("unknown setting '" + k + "'");
        cfg.validate();
        return STSYNTH_OK;
    });
}

const char* stsynth_config_canonical(stsynth_config* c)
{
    if (!c) return "";
    c->text = c->cfg.canonical();
    return c->text.c_str();
}

const char* stsynth_config_hash(stsynth_config* c)
{
    if (!c) return "";
    c->text = c->cfg.hash();
    return c->text.c_str();
}

void stsynth_config_free(stsynth_config* c) { delete c; }

int stsynth_abstract(const stsynth_config* c, stsynth_model** out)
{
    return guarded([&] {
        need(c, "config");
        need(out, "output");
        c->cfg.validate();
        const auto sys = c->cfg.make_system();
        BuildOptions bo;
        bo.jobs = c->cfg.jobs;
        auto m = std::make_unique<stsynth_model>();
        m->model = build_symbolic_model(*sys, c->cfg.quant, c->cfg.predicate_set(), bo);
        m->model.config_hash = c->cfg.hash();
        *out = m.release();
        return STSYNTH_OK;
    });
}

int stsynth_model_load(const char* path, stsynth_model** out)
{
    return guarded([&] {
        need(out, "output");
        *out = new stsynth_model{load_from(path, &SymbolicModel::load)};
        return STSYNTH_OK;
    });
}

int stsynth_model_save(const stsynth_model* m, const char* path)
{
    return guarded([&] {
        need(m, "model");
        save_to(path, m->model);
        return STSYNTH_OK;
    });
}

int stsynth_model_info(const stsynth_model* m, size_t* states, size_t* signals, size_t* transitions)
{
    return guarded([&] {
        need(m, "model");
        if (states) *states = m->model.num_states();
        if (signals) *signals = m->model.num_signals();
        if (transitions) *transitions = m->model.num_transitions();
        return STSYNTH_OK;
    });
}

void stsynth_model_free(stsynth_model* m) { delete m; }

int stsynth_compile(const stsynth_config* c, stsynth_annotation** out)
{
    return guarded([&] {
        need(c, "config");
        need(out, "output");
        ParityAnnotation ann = compile_parity(parse_spec(c->cfg.formula));
        ann.bind(c->cfg.predicate_set().names());
        *out = new stsynth_annotation{std::move(ann)};
        return STSYNTH_OK;
    });
}

int stsynth_annotation_load(const char* path, stsynth_annotation** out)
{
    return guarded([&] {
        need(out, "output");
        *out = new stsynth_annotation{load_from(path, &ParityAnnotation::load)};
        return STSYNTH_OK;
    });
}

int stsynth_annotation_save(const stsynth_annotation* a, const char* path)
{
    return guarded([&] {
        need(a, "annotation");
        save_to(path, a->ann);
        return STSYNTH_OK;
    });
}

int stsynth_annotation_info(const stsynth_annotation* a, size_t* copies, int* max_color)
{
    return guarded([&] {
        need(a, "annotation");
        if (copies) *copies = a->ann.num_copies();
        if (max_color) *max_color = a->ann.max_color();
        return STSYNTH_OK;
    });
}

void stsynth_annotation_free(stsynth_annotation* a) { delete a; }

int stsynth_translate(const stsynth_config* c, const stsynth_model* m, const stsynth_annotation* a, stsynth_game** out)
{
    return guarded([&] {
        need(c, "config");
        need(m, "model");
        need(a, "annotation");
        need(out, "output");
        ParityAnnotation ann = a->ann;
        ann.bind(m->model.predicate_names);
        *out = new stsynth_game{translate(m->model, ann, c->cfg.nu).game};
        return STSYNTH_OK;
    });
}

int stsynth_game_load(const char* path, stsynth_game** out)
{
    return guarded([&] {
        need(out, "output");
        *out = new stsynth_game{load_from(path, &Game::load)};
        return STSYNTH_OK;
    });
}

int stsynth_game_save(const stsynth_game* g, const char* path)
{
    return guarded([&] {
        need(g, "game");
        save_to(path, g->game);
        return STSYNTH_OK;
    });
}

int stsynth_game_info(const stsynth_game* g, size_t* vertices, size_t* edges)
{
    return guarded([&] {
        need(g, "game");
        if (vertices) *vertices = g->game.num_vertices();
        if (edges) *edges = g->game.num_edges();
        return STSYNTH_OK;
    });
}

void stsynth_game_free(stsynth_game* g) { delete g; }

int stsynth_solve(const stsynth_game* g, stsynth_solution** out)
{
    return guarded([&] {
        need(g, "game");
        need(out, "output");
        *out = new stsynth_solution{solve_threshold(g->game)};
        return STSYNTH_OK;
    });
}

int stsynth_solution_winning(const stsynth_solution* s, uint8_t* win, size_t n)
{
    return guarded([&] {
        need(s, "solution");
        need(win, "buffer");
        if (n != s->sol.win.size()) throw ConfigError("buffer size does not match the vertex count");
        for (size_t v = 0; v < n; ++v) win[v] = s->sol.win[v] ? 1 : 0;
        return STSYNTH_OK;
    });
}

int stsynth_solution_info(const stsynth_solution* s, size_t* winning, int* positional, int* complete)
{
    return guarded([&] {
        need(s, "solution");
        if (winning) *winning = region_size(s->sol.win);
        if (positional) *positional = s->sol.positional ? 1 : 0;
        if (complete) *complete = s->sol.complete ? 1 : 0;
        return STSYNTH_OK;
    });
}

int stsynth_solution_save_strategy(const stsynth_solution* s, const char* path)
{
    return guarded([&] {
        need(s, "solution");
        save_to(path, s->sol.strategy);
        return STSYNTH_OK;
    });
}

int stsynth_solution_save_winning(const stsynth_solution* s, const char* path)
{
    return guarded([&] {
        need(s, "solution");
        need(path, "path");
        std::ostringstream os;
        os << "stsynth-winning 1\nvertices " << s->sol.win.size() << "\nwinning " << region_size(s->sol.win) << "\n";
        for (size_t v = 0; v < s->sol.win.size(); ++v)
            if (s->sol.win[v]) os << v << "\n";
        std::ofstream f(path, std::ios::binary);
        if (!f || !(f << os.str())) throw IoError(std::string("cannot write ") + path);
        return STSYNTH_OK;
    });
}

void stsynth_solution_free(stsynth_solution* s) { delete s; }

int stsynth_synthesize(const stsynth_config* c, stsynth_text_fn progress, void* user, stsynth_result** out)
{
    return guarded([&] {
        need(c, "config");
        need(out, "output");
        SynthesisOptions opt;
        if (progress) opt.progress = [&](const IterationReport& r) { emit(progress, user, format_iteration(r)); };
        auto r = std::make_unique<stsynth_result>();
        r->res = synthesize(c->cfg, opt);
        const bool ok = r->res.realized;
        *out = r.release();
        if (!ok) g_error = "unrealizable: " + (*out)->res.stop_reason;
        return ok ? STSYNTH_OK : STSYNTH_UNREALIZABLE;
    });
}

int stsynth_result_report(const stsynth_result* r, stsynth_text_fn sink, void* user)
{
    return guarded([&] {
        need(r, "result");
        emit(sink, user, r->res.report());
        return STSYNTH_OK;
    });
}

int stsynth_result_iterations(const stsynth_result* r, size_t* count)
{
    return guarded([&] {
        need(r, "result");
        need(count, "output");
        *count = r->res.iterations.size();
        return STSYNTH_OK;
    });
}

int stsynth_result_controller(const stsynth_result* r, stsynth_controller** out)
{
    return guarded([&] {
        need(r, "result");
        need(out, "output");
        if (!r->res.controller) {
            g_error = "no controller: the specification was not realized";
            return int(STSYNTH_UNREALIZABLE);
        }
        *out = new stsynth_controller{*r->res.controller};
        return int(STSYNTH_OK);
    });
}

void stsynth_result_free(stsynth_result* r) { delete r; }

int stsynth_controller_load(const char* path, stsynth_controller** out)
{
    return guarded([&] {
        need(out, "output");
        *out = new stsynth_controller{load_from(path, &SymbolicController::load)};
        return STSYNTH_OK;
    });
}

int stsynth_controller_save(const stsynth_controller* c, const char* path)
{
    return guarded([&] {
        need(c, "controller");
        save_to(path, c->sc);
        return STSYNTH_OK;
    });
}

int stsynth_controller_info(const stsynth_controller* c, size_t* memory, size_t* entries)
{
    return guarded([&] {
        need(c, "controller");
        if (memory) *memory = c->sc.memory_count();
        if (entries) *entries = c->sc.output.size();
        return STSYNTH_OK;
    });
}

void stsynth_controller_free(stsynth_controller* c) { delete c; }

int stsynth_simulate(const stsynth_config* c, const stsynth_controller* ctl, uint64_t seed, int64_t steps, stsynth_run** out)
{
    return guarded([&] {
        need(c, "config");
        need(ctl, "controller");
        need(out, "output");
        const Config& cfg = c->cfg;
        const SymbolicController& sc = ctl->sc;
        if (!sc.config_hash.empty() && sc.config_hash != cfg.hash())
            throw ConfigError("controller was synthesized for a different configuration (" + sc.config_hash + ")");
        if (steps < 0) throw ConfigError("steps must be non-negative");
        if (cfg.system.init_states.empty()) throw ConfigError("no initial state");
        const Quantization q = controller_quantization(cfg, sc);
        const auto sys = cfg.make_system(q);
        const double h = cfg.simulation.h > 0 ? cfg.simulation.h : q.tau / 50;
        auto r = std::make_unique<stsynth_run>();
        r->run = closed_loop_run(*sys, sc, cfg.system.init_states.front(), steps, seed, h);
        const bool ok = r->run.failure.empty();
        if (!ok) g_error = "uncontrollable state: " + r->run.failure;
        *out = r.release();
        return ok ? STSYNTH_OK : STSYNTH_UNCONTROLLABLE;
    });
}

int stsynth_run_load(const char* path, stsynth_run** out)
{
    return guarded([&] {
        need(out, "output");
        *out = new stsynth_run{load_from(path, &ClosedLoopRun::load)};
        return STSYNTH_OK;
    });
}

int stsynth_run_save(const stsynth_run* r, const char* path)
{
    return guarded([&] {
        need(r, "run");
        save_to(path, r->run);
        return STSYNTH_OK;
    });
}

int stsynth_run_save_csv(const stsynth_run* r, const char* path)
{
    return guarded([&] {
        need(r, "run");
        need(path, "path");
        std::ostringstream os;
        r->run.write_csv(os);
        std::ofstream f(path, std::ios::binary);
        if (!f || !(f << os.str())) throw IoError(std::string("cannot write ") + path);
        return STSYNTH_OK;
    });
}

int stsynth_run_info(const stsynth_run* r, size_t* steps, size_t* bound_violations, int* failed)
{
    return guarded([&] {
        need(r, "run");
        if (steps) *steps = r->run.signals.size();
        if (bound_violations) *bound_violations = r->run.bound_violations;
        if (failed) *failed = r->run.failure.empty() ? 0 : 1;
        return STSYNTH_OK;
    });
}

void stsynth_run_free(stsynth_run* r) { delete r; }

int stsynth_check(const stsynth_config* c, const stsynth_run* r, stsynth_verdict* out, stsynth_text_fn detail, void* user)
{
    return guarded([&] {
        need(c, "config");
        need(r, "run");
        need(out, "output");
        const Config& cfg = c->cfg;
        if (!r->run.config_hash.empty() && r->run.config_hash != cfg.hash())
            throw ConfigError("run was recorded under a different configuration (" + r->run.config_hash + ")");
        const PredicateSet preds = cfg.predicate_set();
        const Verdict v = check_bounded(r->run, parse_spec(cfg.formula), preds, cfg.system, cfg.simulation.grace,
                                        cfg.simulation.burn_in);
        const RunMetrics m = metrics(r->run, preds, cfg.system, cfg.simulation.burn_in);
        out->pass = v.pass && r->run.ok() ? 1 : 0;
        out->grace = v.grace;
        out->burn_in = v.burn_in;
        out->horizon = v.horizon;
        out->max_gap = v.max_gap;
        out->average_length = m.average_length;
        out->tail_average_length = m.tail_average_length;
        out->trigger_rate = m.trigger_rate;
        out->bound_violations = r->run.bound_violations;
        std::string text = v.detail;
        if (!r->run.failure.empty()) text += "; run failed: " + r->run.failure;
        if (r->run.bound_violations) text += "; " + std::to_string(r->run.bound_violations) + " successor-bound violations";
        emit(detail, user, text);
        return STSYNTH_OK;
    });
}

int stsynth_selftest(uint64_t seed, int instances, stsynth_text_fn sink, void* user)
{
    return guarded([&] {
        if (instances < 1) throw ConfigError("instances must be positive");
        std::ostringstream os;
        const bool ok = run_selftest(seed, instances, os);
        emit(sink, user, os.str());
        if (!ok) g_error = "solver disagrees with the oracle";
        return ok ? STSYNTH_OK : STSYNTH_INVARIANT;
    });
}

} // extern "C"
