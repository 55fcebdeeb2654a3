/*
 * Copyright 2026 The churnpno Authors.
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

#ifndef CHURNPNO_CSV_H_
#define CHURNPNO_CSV_H_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace churnpno::csv {

using Row = std::vector<std::string>;

struct Table {
  Row header;
  std::vector<Row> rows;

  // Index of `name` in the header, or -1.
  int ColumnIndex(std::string_view name) const;
};

// RFC-4180 reader: quoted fields, doubled quotes, CRLF or LF line endings.
// A UTF-8 byte-order mark before the header is skipped. Blank lines are
// ignored. Throws DataError on an unterminated quote.
Table Parse(std::string_view text);
Table ReadFile(const std::filesystem::path& path);

// Quotes a field only when it contains a comma, quote, CR or LF.
std::string Escape(std::string_view field);
void WriteRow(std::ostream& os, const Row& row);

// Parses a decimal number with '.' separator; the whole cell must be
// consumed. Returns false on failure.
bool ParseDouble(std::string_view cell, double* out);

// Shortest round-trip representation of a double.
std::string FormatExact(double v);
// Fixed-point with `digits` decimals; used for reports.
std::string FormatFixed(double v, int digits);

}  // namespace churnpno::csv

#endif  // CHURNPNO_CSV_H_
