#pragma once

#include <stdexcept>
#include <string>

namespace schedwin {

// Requested computation has no finite answer for these parameters
// (e.g. stationary distribution of an unstable queue without a capacity bound).
class StabilityError : public std::domain_error {
public:
    explicit StabilityError(const std::string& what) : std::domain_error(what) {}
};

// A numeric routine produced a result outside its certified error bound.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace schedwin
