/*
 * Copyright 2026 The skelgraph Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Plain-text helpers for the CSV-like data files.

#ifndef SKELGRAPH_TEXT_HPP
#define SKELGRAPH_TEXT_HPP

#include <string>
#include <vector>

namespace skelgraph::text {

std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& line, char sep);

/// Non-empty, non-comment ('#') lines split on commas, fields trimmed.
std::vector<std::vector<std::string>> csv_rows(const std::string& content);

int to_int(const std::string& field, const std::string& context);
double to_double(const std::string& field, const std::string& context);

/// Shortest text that parses back to the identical double.
std::string format_double(double value);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace skelgraph::text

#endif  // SKELGRAPH_TEXT_HPP
