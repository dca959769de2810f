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

#include "skelgraph/text.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "skelgraph/common.hpp"

namespace skelgraph {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::SequenceTooShort: return "SequenceTooShort";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::LayoutMismatch: return "LayoutMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyNeighborhood: return "EmptyNeighborhood";
    case ErrorCode::UncoveredJoint: return "UncoveredJoint";
    case ErrorCode::InvalidLength: return "InvalidLength";
    case ErrorCode::InvalidLabel: return "InvalidLabel";
    case ErrorCode::GraphNotRecorded: return "GraphNotRecorded";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IO: return "IO";
  }
  return "Unknown";
}

namespace text {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) fields.push_back(trim(field));
  if (!line.empty() && line.back() == sep) fields.emplace_back();
  return fields;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& content) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(content);
  std::string line;
  while (std::getline(in, line)) {
    const std::string body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    rows.push_back(split(body, ','));
  }
  return rows;
}

int to_int(const std::string& field, const std::string& context) {
  int value = 0;
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  require(ec == std::errc() && ptr == end && !field.empty(), ErrorCode::ParseError,
          context + ": '" + field + "' is not an integer");
  return value;
}

double to_double(const std::string& field, const std::string& context) {
  require(!field.empty(), ErrorCode::ParseError, context + ": empty number");
  char* end = nullptr;
  const double value = std::strtod(field.c_str(), &end);
  require(end == field.c_str() + field.size(), ErrorCode::ParseError,
          context + ": '" + field + "' is not a number");
  return value;
}

std::string format_double(double value) {
  char buffer[64];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buffer, sizeof(buffer), "%.*g", precision, value);
    if (std::strtod(buffer, nullptr) == value) break;
  }
  return buffer;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::IO, "cannot open " + path);
  std::ostringstream content;
  content << in.rdbuf();
  return content.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorCode::IO, "cannot write " + path);
  out << content;
  require(static_cast<bool>(out), ErrorCode::IO, "write failed for " + path);
}

}  // namespace text
}  // namespace skelgraph
