/*
 * Copyright 2026 The advmask Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace advmask {

/// RFC 4180 field quoting: fields containing a comma, quote or newline are
/// wrapped in quotes with embedded quotes doubled.
std::string csv_escape(std::string_view field);

std::string csv_row(const std::vector<std::string>& fields);

/// Splits one CSV record. Throws FormatError on an unterminated quote.
std::vector<std::string> parse_csv_line(std::string_view line);

}  // namespace advmask
