#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace zdflow {

enum class ErrorCode {
    NonPrimeModulus,
    ModulusTooLarge,
    EvenModulus,
    ZeroInverse,
    DimensionMismatch,
    UnknownVertex,
    MalformedGraph,
    MissingLabel,
    ZeroLabel,
    InvalidFlow,
    CyclicDependency,
    IndexOutOfRange,
    PartitionMismatch,
    InstanceTooLarge,
    NotInMeasurementSpace,
    WrongInputRegister,
    InputSupport,
    OrderViolation,
    TooManyBranches,
    NotRunnable,
    NotStandardForm,
    MalformedInput,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it to an exit status without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace zdflow
