#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dnabot {

/// Malformed or unreadable input data (timelines, labels, DNA files, artifacts).
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}

    InputError(const std::string& what, std::size_t line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    /// 1-based line number, or 0 when the error is not tied to a line.
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_ = 0;
};

/// Invalid parameters, alphabets or configuration documents.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A stage cannot proceed on otherwise valid input (e.g. no bot seed species).
class PipelineError : public std::runtime_error {
public:
    explicit PipelineError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dnabot
