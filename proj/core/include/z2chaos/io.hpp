// Copyright 2026 The z2chaos Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace z2chaos {

/// "rows cols" header, then one "re im" pair per entry in row-major order.
void write_matrix(const std::filesystem::path &path, const Eigen::MatrixXcd &m);
Eigen::MatrixXcd read_matrix(const std::filesystem::path &path);

/// Shortest decimal text that round-trips the double.
std::string format_double(double v);

/// Minimal CSV table: a header and rows of already-formatted cells.
class CsvTable {
  public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(std::vector<std::string> cells);
    [[nodiscard]] std::size_t rows() const { return rows_.size(); }
    [[nodiscard]] std::string str() const;
    void write(const std::filesystem::path &path) const;

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

struct CsvData {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index by name; throws std::out_of_range if absent.
    [[nodiscard]] std::size_t column(std::string_view name) const;
    [[nodiscard]] std::vector<double> numeric(std::string_view name) const;
};

CsvData read_csv(const std::filesystem::path &path);

/// 64-bit FNV-1a of the file content, as 16 hex digits.
std::string file_checksum(const std::filesystem::path &path);
std::uint64_t fnv1a(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);

std::string read_text(const std::filesystem::path &path);
void write_text(const std::filesystem::path &path, std::string_view text);

} // namespace z2chaos
