#pragma once

#include <stdexcept>
#include <string>

namespace greens {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "Error"; }
};

/// Parameters or points outside the domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "DomainError"; }
};

/// |m| sits on (k pi / T)^2: the reflection kernel does not exist.
class ResonanceError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "EigenvalueResonance"; }
};

/// The linear problem has no unique solution (singular assembly matrix).
class NonUniqueSolution : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "NonUniqueSolution"; }
};

class QuadratureError : public Error {
public:
    QuadratureError(const std::string& what, double best_estimate, double achieved_error)
        : Error(what), best_estimate_(best_estimate), achieved_error_(achieved_error) {}
    const char* kind() const noexcept override { return "QuadratureError"; }
    double best_estimate() const noexcept { return best_estimate_; }
    double achieved_error() const noexcept { return achieved_error_; }

private:
    double best_estimate_;
    double achieved_error_;
};

/// A root bracket whose ends do not straddle a sign change.
class BracketError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "BracketError"; }
};

class NotFound : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "NotFound"; }
};

class NonConvergence : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "NonConvergence"; }
};

/// (m, M) outside the constant-sign region required by an operation.
class InvalidRegion : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "InvalidRegion"; }
};

}  // namespace greens
