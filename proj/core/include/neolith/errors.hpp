#pragma once

#include <stdexcept>
#include <string>

namespace neolith {

/// Unreadable or malformed input (files, config keys, CLI values).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Integration produced a non-finite rate or violated the step-size guard.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, int region)
        : std::runtime_error(what), region_(region) {}

    int region() const noexcept { return region_; }

private:
    int region_;
};

/// Too many malformed records in an external data set.
class DataQualityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A regression whose slope is undefined (zero variance in a variable).
class DegenerateFitError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace neolith
