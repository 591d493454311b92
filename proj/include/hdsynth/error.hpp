#pragma once

#include <stdexcept>
#include <string>

namespace hdsynth {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A matrix that was required to be unitary is not. Carries ‖AA† − I‖_F.
class NotUnitaryError : public Error {
public:
    NotUnitaryError(const std::string& what, double defect)
        : Error(what + " (unitarity defect " + std::to_string(defect) + ")"), defect_(defect) {}

    double defect() const noexcept { return defect_; }

private:
    double defect_;
};

/// Dimensions or levels that do not fit together.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Malformed input files or circuits that violate a structural precondition.
class ParseError : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

}  // namespace hdsynth
