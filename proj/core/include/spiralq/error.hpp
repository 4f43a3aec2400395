#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace spiralq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A SpiralSpec (or another input record) violates one or more invariants.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

/// A closed-form expression was evaluated outside its domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A quantity is singular (coincident filaments, lossless Y11, singular I+S).
class SingularityError : public Error {
public:
    using Error::Error;
};

/// Text input could not be parsed. line() is 1-based, 0 when unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::string source = {});
    std::size_t line() const noexcept { return line_; }
    const std::string& source() const noexcept { return source_; }

private:
    std::size_t line_;
    std::string source_;
};

/// Two networks do not share an identical frequency grid.
class AlignmentError : public Error {
public:
    using Error::Error;
};

/// The structural model is unconstrained or its stiffness matrix is singular.
class StabilityError : public Error {
public:
    StabilityError(const std::string& what, std::vector<std::string> free_dofs = {});
    const std::vector<std::string>& free_dofs() const noexcept { return free_dofs_; }

private:
    std::vector<std::string> free_dofs_;
};

}  // namespace spiralq
