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

#include "rislocal/fileio.hpp"
#include "rislocal/errors.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

namespace rislocal
{
    void write_file_atomic(const std::filesystem::path &path, std::string_view contents)
    {
        namespace fs = std::filesystem;
        std::error_code ec;
        if (path.has_parent_path())
        {
            fs::create_directories(path.parent_path(), ec);
            if (ec)
                throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
        }
        fs::path tmp = path;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out)
                throw IoError("cannot open " + tmp.string() + " for writing");
            out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
            if (!out)
                throw IoError("write failed: " + tmp.string());
        }
        fs::rename(tmp, path, ec);
        if (ec)
            throw IoError("cannot rename " + tmp.string() + " -> " + path.string() + ": " + ec.message());
    }

    std::string read_file(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw IoError("cannot open " + path.string());
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    std::string fixed6(double value)
    {
        char buf[64];
        auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, 6);
        std::string s(buf, res.ptr);
        if (s == "-0.000000")
            s = "0.000000";
        return s;
    }
}
