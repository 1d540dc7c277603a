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

#include <filesystem>
#include <string>
#include <string_view>

namespace rislocal
{
    /// Writes `contents` to `path` via a sibling temporary file and a rename,
    /// so readers never observe a partially written file. Throws IoError.
    void write_file_atomic(const std::filesystem::path &path, std::string_view contents);

    std::string read_file(const std::filesystem::path &path);

    /// printf-style "%.6f" without locale dependence.
    std::string fixed6(double value);
}
