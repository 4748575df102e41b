#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace urlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed instance, query, graph or probability text.
class ParseError : public Error {
public:
    ParseError(const std::string &what, std::size_t line, std::size_t column = 0)
        : Error(format(what, line, column)), line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    static std::string format(const std::string &what, std::size_t line, std::size_t column) {
        std::string out = "line " + std::to_string(line);
        if (column != 0)
            out += ", column " + std::to_string(column);
        return out + ": " + what;
    }

    std::size_t line_;
    std::size_t column_;
};

/// An exhaustive enumeration would exceed the configured cap.
class CapExceeded : public Error {
public:
    CapExceeded(const std::string &what, std::size_t size, std::size_t cap)
        : Error(what + ": size " + std::to_string(size) + " exceeds cap " + std::to_string(cap)),
          size_(size), cap_(cap) {}

    std::size_t size() const noexcept { return size_; }
    std::size_t cap() const noexcept { return cap_; }

private:
    std::size_t size_;
    std::size_t cap_;
};

/// A documented precondition of an operation does not hold on its input.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// An internal invariant failed (e.g. a rounding gap that the bound excludes).
class InternalError : public Error {
public:
    using Error::Error;
};

} // namespace urlab
