#pragma once

#include <stdexcept>
#include <string>

namespace streetperc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

// Fewer than three points, or all points collinear.
class DegenerateInput : public Error {
public:
    using Error::Error;
};

class InvalidState : public Error {
public:
    using Error::Error;
};

class UnfittableCurve : public Error {
public:
    using Error::Error;
};

class NonPercolatingFit : public Error {
public:
    using Error::Error;
};

class NoRoot : public Error {
public:
    using Error::Error;
};

class InsufficientPairs : public Error {
public:
    InsufficientPairs(const std::string& what, double max_separation)
        : Error(what), max_separation_(max_separation) {}

    double max_separation() const noexcept { return max_separation_; }

private:
    double max_separation_;
};

} // namespace streetperc
