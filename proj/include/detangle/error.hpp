#pragma once

#include <stdexcept>
#include <string>

namespace detangle {

/// Base for every error the library raises.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class FileNotFound : public Error {
public:
    using Error::Error;
};

class UnsupportedFormat : public Error {
public:
    using Error::Error;
};

class CorruptData : public Error {
public:
    using Error::Error;
};

class WriteError : public Error {
public:
    using Error::Error;
};

/// Raised by Otsu thresholding when every pixel has the same intensity.
class DegenerateHistogram : public Error {
public:
    using Error::Error;
};

/// Raised when a patch's midpoints cannot support a polynomial fit.
class UnfittablePatch : public Error {
public:
    using Error::Error;
};

} // namespace detangle
