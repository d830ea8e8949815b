// Copyright 2026 The covpol authors
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

// Internal CSV helpers shared by the loaders and result writers. Not
// installed.

#ifndef COVPOL_SRC_CSV_UTIL_HPP
#define COVPOL_SRC_CSV_UTIL_HPP

#include "covpol/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace covpol::detail {

inline std::vector<std::string> split_csv_line(const std::string &line) {
    std::vector<std::string> fields;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    fields.push_back(field);
    return fields;
}

/// Shortest decimal representation that parses back to the same double.
inline std::string format_double(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    return std::string(buf, ptr);
}

inline double parse_double_strict(const std::string &text, const std::string &context) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ValidationError(context + ": not a number: '" + text + "'");
    }
    return value;
}

inline long long parse_int_strict(const std::string &text, const std::string &context) {
    long long value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ValidationError(context + ": not an integer: '" + text + "'");
    }
    return value;
}

inline std::uint64_t parse_u64_strict(const std::string &text, const std::string &context) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ValidationError(context + ": not an unsigned integer: '" + text + "'");
    }
    return value;
}

} // namespace covpol::detail

#endif // COVPOL_SRC_CSV_UTIL_HPP
