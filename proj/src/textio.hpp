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

#ifndef STSYNTH_TEXTIO_HPP
#define STSYNTH_TEXTIO_HPP

#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace stsynth {

/// Shortest-safe round-trip formatting ("%.17g").
std::string format_double(double v);
double parse_double(std::string_view text);
int64_t parse_int(std::string_view text);

std::vector<std::string> split(std::string_view text, char sep);
std::vector<std::string> split_ws(std::string_view text);
std::string trim(std::string_view text);

/// FNV-1a 64-bit, printed as 16 hex digits.
std::string hash_hex(std::string_view data);

/// Reads the next line, throwing ConfigError("<what>: unexpected end of file") at EOF.
std::string expect_line(std::istream& is, const char* what);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

} // namespace stsynth

#endif
