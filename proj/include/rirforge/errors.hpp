// SPDX-FileCopyrightText: © 2026 The rirforge Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rirforge {

// Bad argument, configuration value or geometry. Maps to CLI exit code 2.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A value outside the domain of a formula (e.g. a volume too small for the
// volume/T60 law, t60max not exceeding the offset).
class DomainError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// File missing, unreadable, truncated or unwritable. Exit code 3.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A measurement could not be made on the given signal (e.g. no decay region).
class AnalysisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Dataset generation gave up on an example after all retries. Exit code 4.
class GenerationError : public std::runtime_error {
public:
    GenerationError(std::size_t example_index, const std::string& what)
        : std::runtime_error("example " + std::to_string(example_index) + ": " + what),
          example_index_(example_index) {}

    std::size_t example_index() const noexcept { return example_index_; }

private:
    std::size_t example_index_;
};

}  // namespace rirforge
