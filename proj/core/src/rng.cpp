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

#include "z2chaos/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace z2chaos {

namespace {
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t x) {
    // SplitMix64 finalizer.
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

CounterRng CounterRng::stream(std::uint64_t seed,
                              std::initializer_list<std::uint64_t> tags) {
    CounterRng r(mix64(seed + kGamma));
    for (std::uint64_t t : tags) {
        r = r.substream(t);
    }
    return r;
}

CounterRng CounterRng::substream(std::uint64_t tag) const {
    return CounterRng(mix64(mix64(key_ ^ 0xD1B54A32D192ED03ULL) + tag * kGamma));
}

CounterRng::result_type CounterRng::operator()() {
    const std::uint64_t c = counter_++;
    return mix64(mix64(key_ + (c + 1) * kGamma) ^ key_);
}

double CounterRng::uniform() {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

std::uint64_t CounterRng::below(std::uint64_t n) {
    if (n == 0) {
        throw std::invalid_argument("CounterRng::below requires n > 0");
    }
    // Rejection keeps the result free of modulo bias.
    const std::uint64_t limit = max() - max() % n;
    std::uint64_t v = 0;
    do {
        v = (*this)();
    } while (v >= limit);
    return v % n;
}

double CounterRng::normal() {
    double u1 = uniform();
    while (u1 <= 0.0) {
        u1 = uniform();
    }
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace z2chaos
