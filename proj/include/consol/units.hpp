/*
 * Copyright 2026 The consol Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace consol {

// Sizes are exact byte counts. One KB is 1024 bytes everywhere.
using Bytes = std::uint64_t;

inline constexpr Bytes kKiB = 1024;
inline constexpr Bytes kMiB = 1024 * kKiB;
inline constexpr Bytes kGiB = 1024 * kMiB;

// Accepts plain byte counts ("4096") or a number with a K/KB/M/MB/G/GB suffix
// ("32KB", "1M"). Fractional values are allowed when they land on a whole
// byte ("1.5MB").
Bytes parse_size(std::string_view text);

// Shortest exact rendering: "32KB", "1MB", "1GB", or the raw byte count.
std::string format_size(Bytes value);

}  // namespace consol
