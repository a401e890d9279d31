#ifndef DALG_ERROR_HPP
#define DALG_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dalg {

/// Base class for every error raised by the library. A domain error is a
/// violated precondition or an undefined value (pole, vanishing separant).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

/// Raised when a value would require dividing by something that vanishes.
class PoleError : public DomainError {
public:
    PoleError(const std::string& what, std::string factor)
        : DomainError(what), factor_(std::move(factor)) {}
    const std::string& factor() const noexcept { return factor_; }

private:
    std::string factor_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t line, std::size_t column)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
          line_(line), column_(column) {}
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

namespace detail {

[[noreturn]] inline void domain_fail(const std::string& msg) { throw DomainError(msg); }

}  // namespace detail
}  // namespace dalg

#endif
