// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace daqsim {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MissingParameter : Error {
    explicit MissingParameter(const std::string &name)
        : Error("missing value for parameter '" + name + "'"), name(name) {}
    std::string name;
};

struct DomainError : Error {
    using Error::Error;
};

struct OverlappingSupport : Error {
    using Error::Error;
};

struct EmptyComposition : Error {
    using Error::Error;
};

struct DuplicateQubit : Error {
    using Error::Error;
};

struct InvalidSpacing : Error {
    using Error::Error;
};

struct EmptyRegister : Error {
    using Error::Error;
};

struct StrengthLengthMismatch : Error {
    using Error::Error;
};

struct NonHermitianCoefficient : Error {
    using Error::Error;
};

struct CoincidentAtoms : Error {
    using Error::Error;
};

struct SingularTransform : Error {
    using Error::Error;
};

struct UnsupportedStrategy : Error {
    using Error::Error;
};

struct BadBitstring : Error {
    using Error::Error;
};

struct NonUnitaryBlockInCircuit : Error {
    using Error::Error;
};

struct NonHermitianObservable : Error {
    using Error::Error;
};

struct NonHermitianGenerator : Error {
    using Error::Error;
};

struct TooManyQubitsForDense : Error {
    using Error::Error;
};

struct IllConditionedShifts : Error {
    using Error::Error;
};

struct AnalogBlockInAdjoint : Error {
    using Error::Error;
};

struct NaNLoss : Error {
    explicit NaNLoss(std::vector<double> trace_so_far)
        : Error("loss became non-finite after " + std::to_string(trace_so_far.size()) +
                " iterations"),
          trace(std::move(trace_so_far)) {}
    std::vector<double> trace;
};

struct EmbeddingNotConverged : Error {
    using Error::Error;
};

} // namespace daqsim
