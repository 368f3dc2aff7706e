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

#include <random>
#include <sstream>

#include "doctest.h"
#include "error.hpp"
#include "lasso.hpp"
#include "logic.hpp"

using namespace stsynth;
using namespace testing_lasso;

namespace {

void bind_path(PathFormula& f, const std::vector<std::string>& names)
{
    if (f.is_base()) f.phi.bind(names);
    for (auto& a : f.args) bind_path(a, names);
}

StateFormula bound(const std::string& text, const std::vector<std::string>& names)
{
    PathFormula f = parse_spec("F (" + text + ")");
    f.phi.bind(names);
    return f.phi;
}

} // namespace

TEST_SUITE("logic")
{
    TEST_CASE("parsing")
    {
        const PathFormula a = parse_spec("GF (px && py)");
        CHECK(a.kind == PathFormula::Kind::GF);
        CHECK(a.phi.str() == StateFormula::make_and(StateFormula::make_atom("px"), StateFormula::make_atom("py")).str());
        const PathFormula b = parse_spec("F target && G !unsafe");
        REQUIRE(b.kind == PathFormula::Kind::And);
        CHECK(b.args[0].kind == PathFormula::Kind::F);
        CHECK(b.args[1].kind == PathFormula::Kind::G);
        CHECK(b.args[1].phi.kind == StateFormula::Kind::Not);
        CHECK_THROWS_AS(parse_spec("GF (F p)"), ConfigError);
        CHECK_THROWS_AS(parse_spec("GF p &&"), ConfigError);
        CHECK_THROWS_AS(parse_spec("p"), ConfigError);
        CHECK_THROWS_AS(parse_spec("G p $ q"), ConfigError);
        // && binds tighter than ||
        const PathFormula c = parse_spec("F a || G b && FG c");
        REQUIRE(c.kind == PathFormula::Kind::Or);
        CHECK(c.args[1].kind == PathFormula::Kind::And);
        // printing and reparsing is stable
        CHECK(parse_spec(c.str()).str() == c.str());
    }

    TEST_CASE("three-valued evaluation")
    {
        const std::vector<std::string> names{"p", "q"};
        const StateFormula f = bound("(p || !q)", names);
        CHECK(eval_three_valued(f, {0b01, 0}) == Tri::True);
        CHECK(eval_three_valued(f, {0, 0b11}) == Tri::True);
        CHECK(eval_three_valued(bound("p", names), {0, 0}) == Tri::Unknown);
        CHECK(eval_three_valued(bound("p && q", names), {0b01, 0}) == Tri::Unknown);
        CHECK(eval_three_valued(bound("p && q", names), {0b01, 0b10}) == Tri::False);
        CHECK(eval_three_valued(StateFormula::truth(), {0, 0}) == Tri::True);
        StateFormula unbound = StateFormula::make_atom("r");
        CHECK_THROWS_AS(unbound.bind(names), ConfigError);
    }

    TEST_CASE("sat modes")
    {
        const std::vector<std::string> names{"p"};
        const StateFormula p = bound("p", names), np = bound("!p", names);
        TransitionLabels l;
        l.rho_exists = {{1, 0}, {0, 1}};
        CHECK(sat(l, p, SatMode::Exists));
        l.rho_forall = {0, 0};
        CHECK(!sat(l, p, SatMode::Forall));
        l.rho_exists = {{0, 1}};
        CHECK(sat(l, np, SatMode::Exists));
        CHECK(!sat(l, p, SatMode::Exists));
    }

    TEST_CASE("GF annotation [reference]")
    {
        ParityAnnotation a = compile_parity(parse_spec("GF p"));
        a.bind({"p"});
        REQUIRE(a.num_copies() == 2);
        CHECK(a.colors == std::vector<int>{1, 2});
        CHECK(a.init_copy == 0);
        const TransitionLabels yes = exact(1, 1), no = exact(0, 1);
        CHECK(a.jump(0, yes) == 1);
        CHECK(a.jump(0, no) == 0);
        CHECK(a.jump(1, yes) == 1);
        CHECK(a.jump(1, no) == 0);
    }

    TEST_CASE("base constructions")
    {
        const TransitionLabels yes = exact(1, 1), no = exact(0, 1);
        ParityAnnotation f = compile_parity(parse_spec("F p"));
        f.bind({"p"});
        CHECK(f.colors == std::vector<int>{1, 2});
        CHECK(f.jump(0, no) == 0);
        CHECK(f.jump(0, yes) == 1);
        CHECK(f.jump(1, no) == 1);
        ParityAnnotation g = compile_parity(parse_spec("G p"));
        g.bind({"p"});
        CHECK(g.colors == std::vector<int>{0, 1});
        CHECK(g.jump(0, yes) == 0);
        CHECK(g.jump(0, no) == 1);
        CHECK(g.jump(1, yes) == 1);
        ParityAnnotation fg = compile_parity(parse_spec("FG p"));
        fg.bind({"p"});
        CHECK(fg.colors == std::vector<int>{0, 1});
        CHECK(fg.jump(1, yes) == 0);
        CHECK(fg.jump(0, no) == 1);
        // G needs the universal labels: an existential witness alone is not enough
        TransitionLabels partial;
        partial.rho_exists = {{1, 0}};
        partial.rho_forall = {0, 0};
        CHECK(g.jump(0, partial) == 1);
        CHECK(f.jump(0, partial) == 1);
    }

    TEST_CASE("F with no satisfying transition loses")
    {
        ToyModel m;
        m.states = 1;
        m.atoms = {"p"};
        m.edges = {{0, 0, 0}};
        ParityAnnotation a = compile_parity(parse_spec("F p"));
        a.bind(m.atoms);
        CHECK(!product_wins(m, a));
        CHECK(annotation_verdict(a, 1, {}, {0}) == 1);
    }

    TEST_CASE("(GF p) && (G q) on a two-state toy [DERIVED]")
    {
        ToyModel m;
        m.states = 2;
        m.atoms = {"p", "q"};
        // 0 -> 1 with p,q ; 1 -> 0 with q ; 1 -> 1 with nothing ; 0 -> 0 with q
        m.edges = {{0, 1, 0b11}, {1, 0, 0b10}, {1, 1, 0}, {0, 0, 0b10}};
        PathFormula phi = parse_spec("(GF p) && (G q)");
        ParityAnnotation a = compile_parity(phi);
        a.bind(m.atoms);
        bind_path(phi, m.atoms);
        bool exists = false;
        each_lasso(m, 4, 8, [&](const auto& pre, const auto& cyc) {
            const bool direct = holds_on(phi, pre, cyc);
            CHECK(direct == (annotation_verdict(a, 2, pre, cyc) % 2 == 0));
            exists = exists || direct;
        });
        CHECK(exists);
        CHECK(product_wins(m, a));
        // without the q on 1 -> 0 the only p-cycle breaks G q
        m.edges[1].truth = 0;
        CHECK(!product_wins(m, a));
    }

    TEST_CASE("random lasso agreement")
    {
        std::mt19937_64 rng(2024);
        size_t lassos = 0;
        for (int it = 0; it < 100; ++it) {
            ToyModel m = random_model(rng, 4, 3);
            PathFormula phi = parse_spec(random_spec(rng, m.atoms));
            ParityAnnotation a = compile_parity(phi);
            a.bind(m.atoms);
            bind_path(phi, m.atoms);
            // colors stay small: at most 2 per temporal subformula
            CHECK(a.max_color() <= int(2 * a.bases.size()) + 1);
            bool exists = false;
            each_lasso(m, 3, 6, [&](const auto& pre, const auto& cyc) {
                const bool direct = holds_on(phi, pre, cyc);
                const int top = annotation_verdict(a, m.atoms.size(), pre, cyc);
                CHECK_MESSAGE(direct == (top % 2 == 0), phi.str());
                exists = exists || direct;
                ++lassos;
            });
            CHECK_MESSAGE(exists == product_wins(m, a), phi.str());
        }
        CHECK(lassos > 1000);
    }

    TEST_CASE("annotation dump round-trip and determinism")
    {
        const std::string spec = "(GF a && FG !b) || F (a && b)";
        const ParityAnnotation a = compile_parity(parse_spec(spec)), b = compile_parity(parse_spec(spec));
        std::ostringstream x, y, z;
        a.save(x);
        b.save(y);
        CHECK(x.str() == y.str());
        std::istringstream in(x.str());
        ParityAnnotation::load(in).save(z);
        CHECK(x.str() == z.str());
        std::string broken = x.str();
        broken[broken.size() - 2] = broken[broken.size() - 2] == '0' ? '1' : '0';
        std::istringstream bad(broken);
        CHECK_THROWS_AS(ParityAnnotation::load(bad), ConfigError);
    }
}
