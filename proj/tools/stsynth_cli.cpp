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

// Command line front end; talks to the library only through the C interface.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "stsynth/stsynth.h"

namespace {

struct Options
{
    std::string config;
    std::string out = ".";
    std::string pitch_mode;
    bool paper_beta = false;
    int jobs = 0;
    long long seed = -1;
    long long steps = -1;
    std::string model, annotation, game, controller, run;
    int instances = 500;
};

template <class T, void (*F)(T*)>
struct Deleter
{
    void operator()(T* p) const { F(p); }
};
using ConfigPtr = std::unique_ptr<stsynth_config, Deleter<stsynth_config, stsynth_config_free>>;

void print_text(const char* text, void*) { std::fputs(text, stdout); }

void keep_text(const char* text, void* user) { *static_cast<std::string*>(user) += text; }

int fail(int code)
{
    std::fprintf(stderr, "error: %s\n", stsynth_last_error());
    return code;
}

std::string out_path(const Options& o, const char* name)
{
    std::filesystem::create_directories(o.out);
    return (std::filesystem::path(o.out) / name).string();
}

int load_config(const Options& o, ConfigPtr& cfg)
{
    stsynth_config* raw = nullptr;
    const int rc = o.config.empty() ? stsynth_config_robot_example(&raw) : stsynth_config_load(o.config.c_str(), &raw);
    if (rc) return rc == STSYNTH_IO ? STSYNTH_CONFIG : rc;
    cfg.reset(raw);
    auto set = [&](const char* k, const std::string& v) { return stsynth_config_set(cfg.get(), k, v.c_str()); };
    int r = 0;
    if (o.paper_beta && (r = set("paper_beta", "true"))) return r;
    if (!o.pitch_mode.empty() && (r = set("pitch_mode", o.pitch_mode))) return r;
    if (o.jobs > 0 && (r = set("jobs", std::to_string(o.jobs)))) return r;
    if (o.seed >= 0 && (r = set("seed", std::to_string(o.seed)))) return r;
    if (o.steps >= 0 && (r = set("steps", std::to_string(o.steps)))) return r;
    return 0;
}

int code_of(int rc)
{
    if (rc == STSYNTH_IO) return STSYNTH_CONFIG;
    if (rc == STSYNTH_OVERFLOW || rc == STSYNTH_UNCONTROLLABLE) return STSYNTH_INVARIANT;
    return rc;
}

int cmd_abstract(const Options& o)
{
    ConfigPtr cfg;
    if (int rc = load_config(o, cfg)) return fail(code_of(rc));
    stsynth_model* m = nullptr;
    if (int rc = stsynth_abstract(cfg.get(), &m)) return fail(code_of(rc));
    size_t n = 0, s = 0, t = 0;
    stsynth_model_info(m, &n, &s, &t);
    const std::string path = out_path(o, "model.txt");
    const int rc = stsynth_model_save(m, path.c_str());
    stsynth_model_free(m);
    if (rc) return fail(code_of(rc));
    std::printf("model: %zu states, %zu signals, %zu transitions -> %s\n", n, s, t, path.c_str());
    return 0;
}

int cmd_compile(const Options& o)
{
    ConfigPtr cfg;
    if (int rc = load_config(o, cfg)) return fail(code_of(rc));
    stsynth_annotation* a = nullptr;
    if (int rc = stsynth_compile(cfg.get(), &a)) return fail(code_of(rc));
    size_t copies = 0;
    int colors = 0;
    stsynth_annotation_info(a, &copies, &colors);
    const std::string path = out_path(o, "annotation.txt");
    const int rc = stsynth_annotation_save(a, path.c_str());
    stsynth_annotation_free(a);
    if (rc) return fail(code_of(rc));
    std::printf("annotation: %zu copies, max color %d -> %s\n", copies, colors, path.c_str());
    return 0;
}

int cmd_translate(const Options& o)
{
    ConfigPtr cfg;
    if (int rc = load_config(o, cfg)) return fail(code_of(rc));
    stsynth_model* m = nullptr;
    stsynth_annotation* a = nullptr;
    stsynth_game* g = nullptr;
    int rc = stsynth_model_load(o.model.c_str(), &m);
    if (!rc) rc = stsynth_annotation_load(o.annotation.c_str(), &a);
    if (!rc) rc = stsynth_translate(cfg.get(), m, a, &g);
    const std::string path = rc ? "" : out_path(o, "game.txt");
    if (!rc) rc = stsynth_game_save(g, path.c_str());
    size_t n = 0, e = 0;
    if (!rc) stsynth_game_info(g, &n, &e);
    stsynth_model_free(m);
    stsynth_annotation_free(a);
    stsynth_game_free(g);
    if (rc) return fail(code_of(rc));
    std::printf("game: %zu vertices, %zu edges -> %s\n", n, e, path.c_str());
    return 0;
}

int cmd_solve(const Options& o)
{
    stsynth_game* g = nullptr;
    stsynth_solution* s = nullptr;
    int rc = stsynth_game_load(o.game.c_str(), &g);
    if (!rc) rc = stsynth_solve(g, &s);
    const std::string sp = rc ? "" : out_path(o, "strategy.txt"), wp = rc ? "" : out_path(o, "winning.txt");
    if (!rc) rc = stsynth_solution_save_strategy(s, sp.c_str());
    if (!rc) rc = stsynth_solution_save_winning(s, wp.c_str());
    size_t n = 0, win = 0;
    int positional = 0, complete = 0;
    if (!rc) {
        stsynth_game_info(g, &n, nullptr);
        stsynth_solution_info(s, &win, &positional, &complete);
    }
    stsynth_solution_free(s);
    stsynth_game_free(g);
    if (rc) return fail(code_of(rc));
    std::printf("winning: %zu of %zu vertices, strategy %s%s -> %s, %s\n", win, n, positional ? "memoryless" : "energy-tracking",
                complete ? "" : " (incomplete)", sp.c_str(), wp.c_str());
    return 0;
}

int cmd_synth(const Options& o)
{
    ConfigPtr cfg;
    if (int rc = load_config(o, cfg)) return fail(code_of(rc));
    std::string header;
    for (const char* p = stsynth_config_canonical(cfg.get()); *p;) {
        const char* e = p;
        while (*e && *e != '\n') ++e;
        header += "# " + std::string(p, e) + "\n";
        p = *e ? e + 1 : e;
    }
    std::fputs(header.c_str(), stdout);
    stsynth_result* r = nullptr;
    const int rc = stsynth_synthesize(cfg.get(), print_text, nullptr, &r);
    if (rc != STSYNTH_OK && rc != STSYNTH_UNREALIZABLE) return fail(code_of(rc));
    std::string report;
    stsynth_result_report(r, keep_text, &report);
    {
        const std::string path = out_path(o, "synth_report.txt");
        std::FILE* f = std::fopen(path.c_str(), "wb");
        if (f) {
            std::fputs((header + report).c_str(), f);
            std::fclose(f);
        }
    }
    std::string last = report.substr(report.rfind('\n', report.size() - 2) + 1);
    std::fputs(last.c_str(), stdout);
    if (rc == STSYNTH_UNREALIZABLE) {
        stsynth_result_free(r);
        return STSYNTH_UNREALIZABLE;
    }
    stsynth_controller* c = nullptr;
    int s = stsynth_result_controller(r, &c);
    const std::string path = out_path(o, "controller.txt");
    if (!s) s = stsynth_controller_save(c, path.c_str());
    stsynth_controller_free(c);
    stsynth_result_free(r);
    if (s) return fail(code_of(s));
    std::printf("controller -> %s\n", path.c_str());
    return 0;
}

int cmd_simulate(const Options& o)
{
    ConfigPtr cfg;
    if (int rc = load_config(o, cfg)) return fail(code_of(rc));
    stsynth_controller* c = nullptr;
    if (int rc = stsynth_controller_load(o.controller.c_str(), &c)) return fail(code_of(rc));
    stsynth_run* r = nullptr;
    const uint64_t seed = o.seed >= 0 ? uint64_t(o.seed) : 0;
    const int64_t steps = o.steps >= 0 ? o.steps : 500;
    const int rc = stsynth_simulate(cfg.get(), c, seed, steps, &r);
    stsynth_controller_free(c);
    if (rc != STSYNTH_OK && rc != STSYNTH_UNCONTROLLABLE) return fail(code_of(rc));
    const std::string run_path = out_path(o, "run.txt"), csv_path = out_path(o, "trajectory.csv");
    int s = stsynth_run_save(r, run_path.c_str());
    if (!s) s = stsynth_run_save_csv(r, csv_path.c_str());
    size_t k = 0, viol = 0;
    stsynth_run_info(r, &k, &viol, nullptr);
    stsynth_run_free(r);
    if (s) return fail(code_of(s));
    std::printf("run: %zu steps, %zu successor-bound violations -> %s, %s\n", k, viol, run_path.c_str(), csv_path.c_str());
    // Leaving the winning region means the controller is unsound for this plant.
    if (rc == STSYNTH_UNCONTROLLABLE) return fail(STSYNTH_INVARIANT);
    return viol ? STSYNTH_INVARIANT : 0;
}

int cmd_check(const Options& o)
{
    ConfigPtr cfg;
    if (int rc = load_config(o, cfg)) return fail(code_of(rc));
    stsynth_run* r = nullptr;
    if (int rc = stsynth_run_load(o.run.c_str(), &r)) return fail(code_of(rc));
    stsynth_verdict v{};
    std::string detail;
    const int rc = stsynth_check(cfg.get(), r, &v, keep_text, &detail);
    stsynth_run_free(r);
    if (rc) return fail(code_of(rc));
    std::printf("verdict: %s (%s)\n", v.pass ? "PASS" : "FAIL", detail.c_str());
    std::printf("horizon %lld steps, grace %lld, burn-in %lld, max gap %lld\n", (long long)v.horizon, (long long)v.grace,
                (long long)v.burn_in, (long long)v.max_gap);
    std::printf("average signal length %.6f (after burn-in %.6f), trigger rate %.6f per time unit\n", v.average_length,
                v.tail_average_length, v.trigger_rate);
    return v.pass ? 0 : 1;
}

int cmd_selftest(const Options& o)
{
    const uint64_t seed = o.seed >= 0 ? uint64_t(o.seed) : 0;
    const int rc = stsynth_selftest(seed, o.instances, print_text, nullptr);
    if (rc) return fail(code_of(rc));
    std::printf("selftest passed\n");
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Self-triggered controller synthesis for nonlinear systems"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--out", o.out, "Output directory")->capture_default_str();
    app.add_option("--seed", o.seed, "Random seed");
    app.add_flag("--paper-beta", o.paper_beta, "Use the uncorrected growth bound of the robot model");
    app.add_option("--pitch-mode", o.pitch_mode, "Input grid spacing")->check(CLI::IsMember({"half", "paper"}));
    app.add_option("--jobs", o.jobs, "Abstraction threads")->check(CLI::PositiveNumber);

    auto with_config = [&](CLI::App* c) { c->add_option("-c,--config", o.config, "Configuration file (default: robot example)"); };
    auto* abs = app.add_subcommand("abstract", "Build the symbolic model");
    with_config(abs);
    auto* comp = app.add_subcommand("compile", "Compile the specification to a parity annotation");
    with_config(comp);
    auto* tr = app.add_subcommand("translate", "Product of model and annotation");
    with_config(tr);
    tr->add_option("--model", o.model, "Model file")->required();
    tr->add_option("--annotation", o.annotation, "Annotation file")->required();
    auto* sol = app.add_subcommand("solve", "Solve a threshold game");
    sol->add_option("--game", o.game, "Game file")->required();
    auto* syn = app.add_subcommand("synth", "Run the refinement loop and write the controller");
    with_config(syn);
    auto* sim = app.add_subcommand("simulate", "Closed-loop simulation");
    with_config(sim);
    sim->add_option("--controller", o.controller, "Controller file")->required();
    sim->add_option("--steps", o.steps, "Number of control signals");
    auto* chk = app.add_subcommand("check", "Bounded-horizon check of a run record");
    with_config(chk);
    chk->add_option("--run", o.run, "Run record")->required();
    auto* st = app.add_subcommand("selftest", "Compare the solvers with brute-force oracles");
    st->add_option("--instances", o.instances, "Random instances per solver")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : STSYNTH_CONFIG;
    }
    try {
        if (*abs) return cmd_abstract(o);
        if (*comp) return cmd_compile(o);
        if (*tr) return cmd_translate(o);
        if (*sol) return cmd_solve(o);
        if (*syn) return cmd_synth(o);
        if (*sim) return cmd_simulate(o);
        if (*chk) return cmd_check(o);
        if (*st) return cmd_selftest(o);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return STSYNTH_CONFIG;
    }
    return 0;
}
