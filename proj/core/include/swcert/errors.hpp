#pragma once

#include <stdexcept>
#include <string>

namespace swcert {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& msg) : Error("dimension mismatch: " + msg) {}
};

class NotPositiveDefinite : public Error {
public:
    explicit NotPositiveDefinite(const std::string& msg) : Error("not positive definite: " + msg) {}
};

class Unstable : public Error {
public:
    explicit Unstable(const std::string& msg) : Error("unstable: " + msg) {}
};

class NoConvergence : public Error {
public:
    explicit NoConvergence(const std::string& msg) : Error("no convergence: " + msg) {}
};

class NotStabilizable : public Error {
public:
    explicit NotStabilizable(const std::string& msg) : Error("not stabilizable: " + msg) {}
};

class DwellTimeOverflow : public Error {
public:
    explicit DwellTimeOverflow(const std::string& msg) : Error("dwell time overflow: " + msg) {}
};

class InvalidDof : public Error {
public:
    explicit InvalidDof(const std::string& msg) : Error("invalid degrees of freedom: " + msg) {}
};

class InconsistentDwell : public Error {
public:
    explicit InconsistentDwell(const std::string& msg) : Error("inconsistent dwell structure: " + msg) {}
};

class DegenerateGains : public Error {
public:
    explicit DegenerateGains(const std::string& msg) : Error("degenerate gains: " + msg) {}
};

class NonFinite : public Error {
public:
    explicit NonFinite(const std::string& msg) : Error("non-finite value: " + msg) {}
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error("parse error: " + msg) {}
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error("validation error: " + msg) {}
};

}  // namespace swcert
