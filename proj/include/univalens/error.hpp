#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace univalens {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset` is a 1-based byte position.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t offset, std::vector<std::string> expected, const std::string& found)
        : Error(format(offset, expected, found)), offset_(offset), expected_(std::move(expected)) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    static std::string format(std::size_t offset, const std::vector<std::string>& expected,
                              const std::string& found) {
        std::ostringstream os;
        os << "syntax error at offset " << offset << ": expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (i) os << (i + 1 == expected.size() ? " or " : ", ");
            os << expected[i];
        }
        os << ", found " << found;
        return os.str();
    }

    std::size_t offset_;
    std::vector<std::string> expected_;
};

class UnknownIdentifier : public Error {
public:
    UnknownIdentifier(std::size_t offset, const std::string& name)
        : Error("unknown identifier '" + name + "' at offset " + std::to_string(offset)),
          offset_(offset), name_(name) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::string& name() const noexcept { return name_; }

private:
    std::size_t offset_;
    std::string name_;
};

/// Failure while evaluating an expression (division by ~0, log of 0, ...).
class EvaluationError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A denominator in a criterion or chain expression vanished.
class PoleError : public Error {
public:
    using Error::Error;
};

class OverflowError : public Error {
public:
    using Error::Error;
};

class NonConvergence : public Error {
public:
    using Error::Error;
};

/// Violated precondition on parameters (m <= 0, Re beta <= 0, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

inline std::string to_string(std::complex<double> z) {
    std::ostringstream os;
    os.precision(12);
    os << z.real() << (std::signbit(z.imag()) ? " - " : " + ") << std::abs(z.imag()) << "i";
    return os.str();
}

}  // namespace univalens
