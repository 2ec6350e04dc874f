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

#include "z2chaos/io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace z2chaos {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    if (res.ec != std::errc()) {
        throw std::runtime_error("double formatting failed");
    }
    return {buf, res.ptr};
}

void write_matrix(const std::filesystem::path &path, const Eigen::MatrixXcd &m) {
    std::ostringstream out;
    out << m.rows() << ' ' << m.cols() << "\n";
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            out << format_double(m(r, c).real()) << ' '
                << format_double(m(r, c).imag()) << "\n";
        }
    }
    write_text(path, out.str());
}

Eigen::MatrixXcd read_matrix(const std::filesystem::path &path) {
    std::istringstream in(read_text(path));
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    if (!(in >> rows >> cols) || rows < 0 || cols < 0 || rows > 65536 ||
        cols > 65536) {
        throw std::invalid_argument("bad matrix header in " + path.string());
    }
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            double re = 0.0;
            double im = 0.0;
            if (!(in >> re >> im)) {
                throw std::invalid_argument("truncated matrix file " +
                                            path.string());
            }
            m(r, c) = {re, im};
        }
    }
    return m;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
    if (header_.empty()) {
        throw std::invalid_argument("CSV header must not be empty");
    }
}

void CsvTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != header_.size()) {
        throw std::invalid_argument("CSV row width differs from the header");
    }
    rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
    std::string out;
    auto line = [&out](const std::vector<std::string> &cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) {
                out.push_back(',');
            }
            out += cells[i];
        }
        out.push_back('\n');
    };
    line(header_);
    for (const auto &r : rows_) {
        line(r);
    }
    return out;
}

void CsvTable::write(const std::filesystem::path &path) const {
    write_text(path, str());
}

std::size_t CsvData::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return i;
        }
    }
    throw std::out_of_range("CSV column '" + std::string(name) + "' not found");
}

std::vector<double> CsvData::numeric(std::string_view name) const {
    const std::size_t c = column(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto &r : rows) {
        out.push_back(std::stod(r.at(c)));
    }
    return out;
}

CsvData read_csv(const std::filesystem::path &path) {
    std::istringstream in(read_text(path));
    CsvData d;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) {
            cells.push_back(cell);
        }
        if (first) {
            d.header = std::move(cells);
            first = false;
        } else {
            if (cells.size() != d.header.size()) {
                throw std::invalid_argument("ragged CSV row in " + path.string());
            }
            d.rows.push_back(std::move(cells));
        }
    }
    if (first) {
        throw std::invalid_argument("empty CSV file " + path.string());
    }
    return d;
}

std::uint64_t fnv1a(std::string_view data, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string file_checksum(const std::filesystem::path &path) {
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << fnv1a(read_text(path));
    return out.str();
}

std::string read_text(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text(const std::filesystem::path &path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

} // namespace z2chaos
