//  Copyright 2026 The ctxemb Authors. All Rights Reserved.
//
//  Licensed under the Apache License, Version 2.0 (the "License");
//  you may not use this file except in compliance with the License.
//  You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
//  Unless required by applicable law or agreed to in writing, software
//  distributed under the License is distributed on an "AS IS" BASIS,
//  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//  See the License for the specific language governing permissions and
//  limitations under the License.

#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ctxemb {

/// Malformed input. The message always names the file and, when known, the line.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& file, std::size_t line, const std::string& what);

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

/// Strict parse of the whole field; throws std::invalid_argument otherwise.
double parse_double(std::string_view text);
long long parse_int(std::string_view text);

std::string_view trim(std::string_view text);
std::vector<std::string_view> split(std::string_view text, char sep);
/// Splits on runs of spaces/tabs, dropping empty fields.
std::vector<std::string_view> split_ws(std::string_view text);

/// ASCII lowercasing; bytes >= 0x80 pass through untouched.
std::string to_lower(std::string_view text);

std::ifstream open_input(const std::filesystem::path& path);

/// Writes through a sibling temp file and renames it over `path` on success,
/// so readers never observe a half-written output.
void write_atomically(const std::filesystem::path& path,
                      const std::function<void(std::ostream&)>& writer,
                      bool binary = false);

}  // namespace ctxemb
