#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace netsamp {

/// Malformed input text. Carries the 1-based line number when known.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string &what, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Well-formed input that violates a structural rule (self-loop, row count mismatch, ...).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside an operation's domain (non-positive weight, unknown node id, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Configuration value that cannot be used; message names the offending key.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace netsamp
