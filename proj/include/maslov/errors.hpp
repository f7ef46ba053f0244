#pragma once

#include <stdexcept>
#include <string>

namespace maslov {

// Base for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or out-of-range user input. The CLI maps this to exit status 3.
class InputError : public Error {
public:
    using Error::Error;
};

// An interval enclosure could not separate a value from the test point.
class EnclosureBudgetExceeded : public Error {
public:
    EnclosureBudgetExceeded() : Error("enclosure budget exceeded") {}
    explicit EnclosureBudgetExceeded(const std::string& what)
        : Error("enclosure budget exceeded: " + what) {}
};

// A product or inverse that leaves the representable number system.
class NonlinearError : public Error {
public:
    using Error::Error;
};

// Two independent evaluations of one quantity disagree.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

// Floating-point decisions that fall inside the ambiguity band.
class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace maslov
