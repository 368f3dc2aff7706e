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

#include "textio.hpp"

#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "error.hpp"
#include "rational.hpp"

namespace stsynth {

std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(std::string_view text)
{
    std::string s(trim(text));
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
        throw ConfigError("malformed number '" + s + "'");
    return v;
}

int64_t parse_int(std::string_view text)
{
    std::string s(trim(text));
    char* end = nullptr;
    errno = 0;
    long long v = std::strtoll(s.c_str(), &end, 10);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
        throw ConfigError("malformed integer '" + s + "'");
    return v;
}

std::vector<std::string> split(std::string_view text, char sep)
{
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t pos = text.find(sep, start);
        out.emplace_back(text.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::vector<std::string> split_ws(std::string_view text)
{
    std::vector<std::string> out;
    std::istringstream is{std::string(text)};
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

std::string trim(std::string_view text)
{
    size_t b = 0, e = text.size();
    while (b < e && std::isspace((unsigned char)text[b])) ++b;
    while (e > b && std::isspace((unsigned char)text[e - 1])) --e;
    return std::string(text.substr(b, e - b));
}

std::string hash_hex(std::string_view data)
{
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
    return buf;
}

std::string expect_line(std::istream& is, const char* what)
{
    std::string line;
    if (!std::getline(is, line)) throw ConfigError(std::string(what) + ": unexpected end of file");
    return line;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& contents)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << contents;
    if (!out) throw ConfigError("write failed for '" + path + "'");
}

Rational parse_rational(const std::string& raw)
{
    const std::string text = trim(raw);
    if (auto slash = text.find('/'); slash != std::string::npos)
        return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
    // exact decimal: [-]digits[.digits]
    size_t i = 0;
    bool neg = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) neg = text[i++] == '-';
    int64_t num = 0, den = 1;
    bool digits = false, dot = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c == '.' && !dot) { dot = true; continue; }
        if (!std::isdigit((unsigned char)c)) throw ConfigError("malformed rational '" + text + "'");
        if (num > (INT64_MAX - 9) / 10 || (dot && den > INT64_MAX / 10))
            throw ConfigError("rational '" + text + "' has too many digits");
        num = num * 10 + (c - '0');
        if (dot) den *= 10;
        digits = true;
    }
    if (!digits) throw ConfigError("malformed rational '" + text + "'");
    return Rational(neg ? -num : num, den);
}

} // namespace stsynth
