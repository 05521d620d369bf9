#pragma once

#include <stdexcept>
#include <string>

namespace wmcfg {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands or arguments violate an operation's precondition.
class UsageError : public Error {
public:
    using Error::Error;
};

/// Malformed textual input (grammar files, literals, partition files).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Well-formed input that breaks a structural invariant (sorts, linearity, zero weight).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A word could not be decoded back into a derivation.
class DecodeError : public Error {
public:
    DecodeError(const std::string& what, std::size_t position)
        : Error("at position " + std::to_string(position) + ": " + what), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

} // namespace wmcfg
