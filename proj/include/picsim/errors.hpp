#pragma once

#include <stdexcept>
#include <string>

namespace picsim {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A requested point lies outside the stored data span (no extrapolation).
class RangeError : public Error {
public:
    using Error::Error;
};

// A parameter violates its documented range or a value fails validation.
class ParamError : public Error {
public:
    using Error::Error;
};

// Malformed input text; carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(int line, const std::string& msg)
        : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// Two operands carry different frequency grids.
class GridMismatch : public Error {
public:
    using Error::Error;
};

// A port or matrix index is out of bounds or otherwise invalid.
class IndexError : public Error {
public:
    using Error::Error;
};

// The connection denominator vanished: the joint has no unique solution
// (e.g. a lossless loop exactly on resonance).
class SingularConnection : public Error {
public:
    SingularConnection(const std::string& msg, double frequency_hz)
        : Error(msg), frequency_hz_(frequency_hz) {}
    double frequency_hz() const { return frequency_hz_; }

private:
    double frequency_hz_;
};

// The full linear system of the reference solver is not uniquely solvable.
class SingularSystem : public Error {
public:
    using Error::Error;
};

// Circuit construction errors.
class DuplicateName : public Error {
public:
    using Error::Error;
};

class UnknownPin : public Error {
public:
    using Error::Error;
};

class DuplicatePin : public Error {
public:
    using Error::Error;
};

class ArityMismatch : public Error {
public:
    using Error::Error;
};

class UnknownEndpoint : public Error {
public:
    using Error::Error;
};

class AlreadyConnected : public Error {
public:
    using Error::Error;
};

class SelfPin : public Error {
public:
    using Error::Error;
};

// A subcircuit directly or indirectly contains itself.
class CycleError : public Error {
public:
    using Error::Error;
};

}  // namespace picsim
