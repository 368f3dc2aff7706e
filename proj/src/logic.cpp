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

#include "logic.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <ostream>
#include <sstream>

#include "error.hpp"
#include "textio.hpp"

namespace stsynth {

StateFormula StateFormula::make_atom(std::string name)
{
    StateFormula f;
    f.kind = Kind::Atom;
    f.atom = std::move(name);
    return f;
}

StateFormula StateFormula::make_not(StateFormula a)
{
    StateFormula f;
    f.kind = Kind::Not;
    f.args.push_back(std::move(a));
    return f;
}

StateFormula StateFormula::make_or(StateFormula a, StateFormula b)
{
    StateFormula f;
    f.kind = Kind::Or;
    f.args.push_back(std::move(a));
    f.args.push_back(std::move(b));
    return f;
}

StateFormula StateFormula::make_and(StateFormula a, StateFormula b)
{
    return make_not(make_or(make_not(std::move(a)), make_not(std::move(b))));
}

void StateFormula::bind(const std::vector<std::string>& names)
{
    if (kind == Kind::Atom) {
        auto it = std::find(names.begin(), names.end(), atom);
        if (it == names.end()) throw ConfigError("unknown atomic proposition '" + atom + "'");
        atom_index = int(it - names.begin());
    }
    for (auto& a : args) a.bind(names);
}

bool StateFormula::holds(LabelMask truth) const
{
    switch (kind) {
    case Kind::True: return true;
    case Kind::Atom:
        if (atom_index < 0) throw InvariantError("unbound atom '" + atom + "'");
        return truth >> atom_index & 1;
    case Kind::Not: return !args[0].holds(truth);
    case Kind::Or: return args[0].holds(truth) || args[1].holds(truth);
    }
    return false;
}

std::string StateFormula::str() const
{
    switch (kind) {
    case Kind::True: return "true";
    case Kind::Atom: return atom;
    case Kind::Not: return "!" + args[0].str();
    case Kind::Or: return "(" + args[0].str() + " || " + args[1].str() + ")";
    }
    return "?";
}

std::string PathFormula::str() const
{
    switch (kind) {
    case Kind::F: return "F " + phi.str();
    case Kind::G: return "G " + phi.str();
    case Kind::GF: return "GF " + phi.str();
    case Kind::FG: return "FG " + phi.str();
    case Kind::Or: return "(" + args[0].str() + ") || (" + args[1].str() + ")";
    case Kind::And: return "(" + args[0].str() + ") && (" + args[1].str() + ")";
    }
    return "?";
}

// ---- parser

namespace {

struct Token
{
    enum Type { Ident, Not, And, Or, LParen, RParen, End } type;
    std::string text;
    size_t pos;
};

std::vector<Token> tokenize(const std::string& s)
{
    std::vector<Token> out;
    size_t i = 0;
    while (i < s.size()) {
        const char c = s[i];
        if (std::isspace((unsigned char)c)) {
            ++i;
        } else if (std::isalpha((unsigned char)c) || c == '_') {
            size_t j = i;
            while (j < s.size() && (std::isalnum((unsigned char)s[j]) || s[j] == '_')) ++j;
            out.push_back({Token::Ident, s.substr(i, j - i), i});
            i = j;
        } else if (c == '!') {
            out.push_back({Token::Not, "!", i++});
        } else if (c == '(') {
            out.push_back({Token::LParen, "(", i++});
        } else if (c == ')') {
            out.push_back({Token::RParen, ")", i++});
        } else if (s.compare(i, 2, "&&") == 0) {
            out.push_back({Token::And, "&&", i});
            i += 2;
        } else if (s.compare(i, 2, "||") == 0) {
            out.push_back({Token::Or, "||", i});
            i += 2;
        } else {
            throw ConfigError("spec syntax error at position " + std::to_string(i) + ": unexpected '" +
                              std::string(1, c) + "'");
        }
    }
    out.push_back({Token::End, "", s.size()});
    return out;
}

bool is_path_op(const std::string& s) { return s == "F" || s == "G" || s == "GF" || s == "FG"; }

class Parser
{
public:
    explicit Parser(const std::string& text) : toks_(tokenize(text)) {}

    PathFormula parse()
    {
        PathFormula f = path_or();
        if (peek().type != Token::End) fail("unexpected '" + peek().text + "'");
        return f;
    }

private:
    const Token& peek() const { return toks_[i_]; }
    Token take() { return toks_[i_++]; }

    [[noreturn]] void fail(const std::string& msg) const
    {
        throw ConfigError("spec syntax error at position " + std::to_string(peek().pos) + ": " + msg);
    }

    void expect(Token::Type t, const char* what)
    {
        if (peek().type != t) fail(std::string("expected ") + what);
        ++i_;
    }

    PathFormula path_or()
    {
        PathFormula f = path_and();
        while (peek().type == Token::Or) {
            take();
            PathFormula g;
            g.kind = PathFormula::Kind::Or;
            g.args.push_back(std::move(f));
            g.args.push_back(path_and());
            f = std::move(g);
        }
        return f;
    }

    PathFormula path_and()
    {
        PathFormula f = path_atom();
        while (peek().type == Token::And) {
            take();
            PathFormula g;
            g.kind = PathFormula::Kind::And;
            g.args.push_back(std::move(f));
            g.args.push_back(path_atom());
            f = std::move(g);
        }
        return f;
    }

    PathFormula path_atom()
    {
        if (peek().type == Token::LParen) {
            take();
            PathFormula f = path_or();
            expect(Token::RParen, "')'");
            return f;
        }
        if (peek().type != Token::Ident || !is_path_op(peek().text))
            fail("expected a path operator (F, G, GF, FG)");
        const std::string op = take().text;
        PathFormula f;
        f.kind = op == "F" ? PathFormula::Kind::F
               : op == "G" ? PathFormula::Kind::G
               : op == "GF" ? PathFormula::Kind::GF
                            : PathFormula::Kind::FG;
        f.phi = state_unary();
        return f;
    }

    StateFormula state_or()
    {
        StateFormula f = state_and();
        while (peek().type == Token::Or) {
            take();
            f = StateFormula::make_or(std::move(f), state_and());
        }
        return f;
    }

    StateFormula state_and()
    {
        StateFormula f = state_unary();
        while (peek().type == Token::And) {
            take();
            f = StateFormula::make_and(std::move(f), state_unary());
        }
        return f;
    }

    StateFormula state_unary()
    {
        const Token& t = peek();
        switch (t.type) {
        case Token::Not:
            take();
            return StateFormula::make_not(state_unary());
        case Token::LParen: {
            take();
            StateFormula f = state_or();
            expect(Token::RParen, "')'");
            return f;
        }
        case Token::Ident:
            if (is_path_op(t.text))
                fail("path operator '" + t.text + "' cannot appear inside a state formula");
            take();
            if (t.text == "true") return StateFormula::truth();
            if (t.text == "false") return StateFormula::make_not(StateFormula::truth());
            return StateFormula::make_atom(t.text);
        default:
            fail("expected a state formula");
        }
    }

    std::vector<Token> toks_;
    size_t i_ = 0;
};

} // namespace

PathFormula parse_spec(const std::string& text) { return Parser(text).parse(); }

// ---- semantics

Tri eval_three_valued(const StateFormula& phi, const LabelPair& pair)
{
    switch (phi.kind) {
    case StateFormula::Kind::True: return Tri::True;
    case StateFormula::Kind::Atom: {
        if (phi.atom_index < 0) throw ConfigError("unknown atomic proposition '" + phi.atom + "'");
        const LabelMask bit = LabelMask(1) << phi.atom_index;
        if (pair.pos & bit) return Tri::True;
        if (pair.neg & bit) return Tri::False;
        return Tri::Unknown;
    }
    case StateFormula::Kind::Not: {
        const Tri a = eval_three_valued(phi.args[0], pair);
        return a == Tri::True ? Tri::False : a == Tri::False ? Tri::True : Tri::Unknown;
    }
    case StateFormula::Kind::Or: {
        const Tri a = eval_three_valued(phi.args[0], pair);
        if (a == Tri::True) return Tri::True;
        const Tri b = eval_three_valued(phi.args[1], pair);
        if (b == Tri::True) return Tri::True;
        return a == Tri::False && b == Tri::False ? Tri::False : Tri::Unknown;
    }
    }
    return Tri::Unknown;
}

bool sat(const TransitionLabels& labels, const StateFormula& phi, SatMode mode)
{
    if (mode == SatMode::Forall) return eval_three_valued(phi, labels.rho_forall) == Tri::True;
    for (const LabelPair& p : labels.rho_exists)
        if (eval_three_valued(phi, p) == Tri::True) return true;
    return false;
}

// ---- annotation

int ParityAnnotation::max_color() const
{
    int m = 0;
    for (int c : colors) m = std::max(m, c);
    return m;
}

uint32_t ParityAnnotation::mask(const TransitionLabels& labels) const
{
    uint32_t m = 0;
    for (size_t i = 0; i < bases.size(); ++i) {
        const PathFormula& b = bases[i];
        const bool universal = b.kind == PathFormula::Kind::G || b.kind == PathFormula::Kind::FG;
        if (sat(labels, b.phi, universal ? SatMode::Forall : SatMode::Exists)) m |= 1u << i;
    }
    return m;
}

void ParityAnnotation::bind(const std::vector<std::string>& names)
{
    for (auto& b : bases) b.phi.bind(names);
}

void ParityAnnotation::save(std::ostream& os) const
{
    os << "stsynth-annotation 1\n";
    os << "formula " << formula << "\n";
    os << "bases " << bases.size() << "\n";
    for (size_t i = 0; i < bases.size(); ++i) os << i << '\t' << bases[i].str() << "\n";
    os << "copies " << num_copies() << "\n";
    os << "init " << init_copy << "\n";
    for (size_t z = 0; z < num_copies(); ++z) os << z << '\t' << copy_names[z] << '\t' << colors[z] << "\n";
    os << "jumps " << jump_table.size() << "\n";
    for (size_t z = 0; z < num_copies(); ++z)
        for (size_t m = 0; m < num_masks(); ++m) os << z << '\t' << m << '\t' << jump(uint32_t(z), uint32_t(m)) << "\n";
}

ParityAnnotation ParityAnnotation::load(std::istream& is)
{
    if (trim(expect_line(is, "annotation")) != "stsynth-annotation 1") throw ConfigError("not an annotation file");
    const std::string line = expect_line(is, "annotation formula");
    if (line.rfind("formula ", 0) != 0) throw ConfigError("annotation: expected 'formula'");
    ParityAnnotation ann = compile_parity(parse_spec(line.substr(8)));
    std::ostringstream expect, got;
    ann.save(expect);
    got << "stsynth-annotation 1\n" << line << "\n";
    std::string rest;
    while (std::getline(is, rest)) got << rest << "\n";
    if (got.str() != expect.str()) throw ConfigError("annotation tables do not match the formula");
    return ann;
}

namespace {

void collect_bases(const PathFormula& f, std::vector<PathFormula>& out)
{
    if (f.is_base()) {
        out.push_back(f);
        return;
    }
    for (const auto& a : f.args) collect_bases(a, out);
}

bool is_cobuchi(const PathFormula& b) { return b.kind == PathFormula::Kind::G || b.kind == PathFormula::Kind::FG; }

// Evaluates the boolean skeleton given the set of bases whose flag recurs.
bool accepts(const PathFormula& f, const std::vector<PathFormula>& bases, uint32_t recurring, size_t& next)
{
    if (f.is_base()) {
        const size_t i = next++;
        const bool inf = recurring >> i & 1;
        return is_cobuchi(bases[i]) ? !inf : inf;
    }
    const bool a = accepts(f.args[0], bases, recurring, next);
    const bool b = accepts(f.args[1], bases, recurring, next);
    return f.kind == PathFormula::Kind::And ? a && b : a || b;
}

ParityAnnotation compile_base(const PathFormula& f)
{
    ParityAnnotation a;
    a.bases = {f};
    a.init_copy = 0;
    switch (f.kind) {
    case PathFormula::Kind::GF:
        a.copy_names = {"1", "2"};
        a.colors = {1, 2};
        a.jump_table = {0, 1, 0, 1};
        break;
    case PathFormula::Kind::F:
        a.copy_names = {"pending", "done"};
        a.colors = {1, 2};
        a.jump_table = {0, 1, 1, 1};
        break;
    case PathFormula::Kind::G:
        a.copy_names = {"ok", "dead"};
        a.colors = {0, 1};
        a.jump_table = {1, 0, 1, 1};
        break;
    case PathFormula::Kind::FG:
        a.copy_names = {"good", "bad"};
        a.colors = {0, 1};
        a.jump_table = {1, 0, 1, 0};
        break;
    default: throw InvariantError("not a base formula");
    }
    return a;
}

struct LarCopy
{
    uint32_t states = 0;          // bit i: F done / G dead
    std::vector<uint8_t> perm;    // most recent first
    int color = 0;
    auto key() const { return std::tuple(states, perm, color); }
};

} // namespace

ParityAnnotation compile_parity(const PathFormula& phi)
{
    if (phi.is_base()) {
        ParityAnnotation a = compile_base(phi);
        a.formula = phi.str();
        return a;
    }
    ParityAnnotation a;
    a.formula = phi.str();
    collect_bases(phi, a.bases);
    const size_t k = a.bases.size();
    if (k > 6) throw ConfigError("at most 6 temporal subformulas are supported in one specification");
    const size_t masks = size_t(1) << k;

    auto accept_set = [&](uint32_t set) {
        size_t next = 0;
        return accepts(phi, a.bases, set, next);
    };

    std::map<std::tuple<uint32_t, std::vector<uint8_t>, int>, uint32_t> ids;
    std::vector<LarCopy> copies;
    std::deque<uint32_t> queue;
    auto intern = [&](LarCopy c) {
        auto [it, fresh] = ids.emplace(c.key(), uint32_t(copies.size()));
        if (fresh) {
            copies.push_back(std::move(c));
            queue.push_back(it->second);
        }
        return it->second;
    };

    LarCopy init;
    for (size_t i = 0; i < k; ++i) init.perm.push_back(uint8_t(i));
    init.color = accept_set(0) ? 0 : 1;
    a.init_copy = intern(init);

    std::vector<std::vector<uint32_t>> rows;
    while (!queue.empty()) {
        const uint32_t id = queue.front();
        queue.pop_front();
        if (rows.size() <= id) rows.resize(id + 1);
        std::vector<uint32_t> row(masks);
        for (size_t m = 0; m < masks; ++m) {
            const LarCopy cur = copies[id];
            LarCopy nxt;
            uint32_t flags = 0;
            for (size_t i = 0; i < k; ++i) {
                const bool bit = m >> i & 1;
                bool flag = false;
                switch (a.bases[i].kind) {
                case PathFormula::Kind::F:
                    if ((cur.states >> i & 1) || bit) nxt.states |= 1u << i;
                    flag = nxt.states >> i & 1;
                    break;
                case PathFormula::Kind::G:
                    if ((cur.states >> i & 1) || !bit) nxt.states |= 1u << i;
                    flag = nxt.states >> i & 1;
                    break;
                case PathFormula::Kind::GF: flag = bit; break;
                case PathFormula::Kind::FG: flag = !bit; break;
                default: break;
                }
                if (flag) flags |= 1u << i;
            }
            size_t h = 0;
            for (size_t p = 0; p < k; ++p)
                if (flags >> cur.perm[p] & 1) h = p + 1;
            uint32_t prefix = 0;
            for (size_t p = 0; p < h; ++p) prefix |= 1u << cur.perm[p];
            const bool good = accept_set(prefix);
            nxt.color = h == 0 ? (good ? 0 : 1) : int(good ? 2 * h : 2 * h - 1);
            for (size_t p = 0; p < k; ++p)
                if (flags >> cur.perm[p] & 1) nxt.perm.push_back(cur.perm[p]);
            for (size_t p = 0; p < k; ++p)
                if (!(flags >> cur.perm[p] & 1)) nxt.perm.push_back(cur.perm[p]);
            row[m] = intern(std::move(nxt));
        }
        rows[id] = std::move(row);
    }

    for (const LarCopy& c : copies) {
        std::string name = "s=";
        for (size_t i = 0; i < k; ++i) name += char('0' + (c.states >> i & 1));
        name += ",p=";
        for (uint8_t p : c.perm) name += char('0' + p);
        name += ",c=" + std::to_string(c.color);
        a.copy_names.push_back(name);
        a.colors.push_back(c.color);
    }
    for (auto& row : rows) a.jump_table.insert(a.jump_table.end(), row.begin(), row.end());
    return a;
}

} // namespace stsynth
