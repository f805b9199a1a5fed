#pragma once

#include <stdexcept>
#include <string>

namespace qvanish {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Series inversion was requested but the leading coefficient is not +1 or -1.
class NotAUnit : public Error {
public:
    using Error::Error;
};

/// A coefficient was requested at or above the truncation order.
class OutOfRange : public Error {
public:
    using Error::Error;
};

/// Parameters violate the constraints of the family they were supplied for.
class InvalidParams : public Error {
public:
    using Error::Error;
};

/// Parameters make the numerator contain the vanishing factor (1;q)_inf.
class Degenerate : public InvalidParams {
public:
    using InvalidParams::InvalidParams;
};

/// Exhaustive enumeration would exceed the configured cap.
class TooLarge : public Error {
public:
    using Error::Error;
};

}  // namespace qvanish
