#pragma once

#include <stdexcept>
#include <string>

namespace teichflow {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Domain-type violations.
struct InvalidSlope : Error        { using Error::Error; };
struct InvalidFoliation : Error    { using Error::Error; };
struct ZeroFunctional : Error      { using Error::Error; };
struct FamilyError : Error         { using Error::Error; };

// Hyperbolic-structure failures.
struct NotRealizable : Error       { using Error::Error; };
struct DegenerateStructure : Error { using Error::Error; };

// Quadratic-differential failures.
struct InvalidBasis : Error        { using Error::Error; };
struct AreaError : Error           { using Error::Error; };

// Diagnostics / orchestration.
struct InsufficientData : Error        { using Error::Error; };
struct DegenerateDenominator : Error   { using Error::Error; };
struct ConfigError : Error             { using Error::Error; };
struct NumericalFailure : Error        { using Error::Error; };

} // namespace teichflow
