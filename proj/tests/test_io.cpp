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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>

#include "z2chaos/io.hpp"

using namespace z2chaos;
namespace fs = std::filesystem;

TEST(FormatDouble, RoundTrips) {
    for (double v : {0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 6.02214076e23, 2.2250738585072014e-308,
                     std::numeric_limits<double>::max()}) {
        EXPECT_EQ(std::stod(format_double(v)), v) << format_double(v);
    }
    EXPECT_EQ(format_double(0.1), "0.1");
}

TEST(Csv, WriteAndRead) {
    const auto path = fs::temp_directory_path() / "z2chaos_io_test.csv";
    CsvTable t({"a", "b"});
    t.add_row({"1", "x"});
    t.add_row({"2.5", "y"});
    EXPECT_THROW(t.add_row({"1"}), std::invalid_argument);
    t.write(path);
    const auto d = read_csv(path);
    EXPECT_EQ(d.header, (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(d.numeric("a"), (std::vector<double>{1.0, 2.5}));
    EXPECT_THROW((void)d.column("c"), std::out_of_range);
}

TEST(Matrix, RoundTripExact) {
    const auto path = fs::temp_directory_path() / "z2chaos_io_test.mat";
    Eigen::MatrixXcd m(2, 3);
    m << std::complex<double>(0.1, -1.0 / 3), 2, 3, 4, std::complex<double>(0, 1e-300), 6;
    write_matrix(path, m);
    EXPECT_EQ(read_matrix(path), m);
}

TEST(Checksum, StableAndSensitive) {
    EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
    const auto path = fs::temp_directory_path() / "z2chaos_io_test.txt";
    write_text(path, "hello");
    const auto c1 = file_checksum(path);
    EXPECT_EQ(c1.size(), 16U);
    write_text(path, "hellp");
    EXPECT_NE(file_checksum(path), c1);
    EXPECT_EQ(read_text(path), "hellp");
}
