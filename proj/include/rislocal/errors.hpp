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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rislocal
{
    // Invalid physical configuration or unknown / malformed config key.
    class ConfigError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // Argument outside the operation's mathematical domain (angles, grids, fractions).
    class DomainError : public std::domain_error
    {
    public:
        using std::domain_error::domain_error;
    };

    // Shape or width mismatch between otherwise valid inputs.
    class InvalidInputError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    class ParseError : public std::runtime_error
    {
    public:
        ParseError(const std::string &what, std::size_t line)
            : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

        std::size_t line() const noexcept { return line_; }

    private:
        std::size_t line_;
    };

    class IoError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Unknown model kind, bad hyperparameters, or malformed model file.
    class ModelError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };
}
