// SPDX-License-Identifier: Apache-2.0
//
// rislocal: RIS sector probing and angle regression toolkit
// Copyright (C) 2026 The rislocal authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <string_view>

namespace rislocal
{
    // SplitMix64 finalizer.
    constexpr std::uint64_t mix64(std::uint64_t x) noexcept
    {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    constexpr std::uint64_t fnv1a64(std::string_view s) noexcept
    {
        std::uint64_t h = 0xCBF29CE484222325ULL;
        for (char c : s)
        {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001B3ULL;
        }
        return h;
    }

    /// Seed for a named pipeline stage: mix64(seed ^ fnv1a64(stage)).
    constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view stage) noexcept
    {
        return mix64(seed ^ fnv1a64(stage));
    }

    /// Seed for an indexed sub-stream (e.g. grid angle, repeat, tree index).
    constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) noexcept
    {
        return mix64(mix64(seed ^ mix64(a)) ^ mix64(b + 0x632BE59BD9B4E019ULL));
    }
}
