#include "zdflow/error.hpp"

namespace zdflow {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::NonPrimeModulus: return "NonPrimeModulus";
    case ErrorCode::ModulusTooLarge: return "ModulusTooLarge";
    case ErrorCode::EvenModulus: return "EvenModulus";
    case ErrorCode::ZeroInverse: return "ZeroInverse";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::MalformedGraph: return "MalformedGraph";
    case ErrorCode::MissingLabel: return "MissingLabel";
    case ErrorCode::ZeroLabel: return "ZeroLabel";
    case ErrorCode::InvalidFlow: return "InvalidFlow";
    case ErrorCode::CyclicDependency: return "CyclicDependency";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::PartitionMismatch: return "PartitionMismatch";
    case ErrorCode::InstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::NotInMeasurementSpace: return "NotInMeasurementSpace";
    case ErrorCode::WrongInputRegister: return "WrongInputRegister";
    case ErrorCode::InputSupport: return "InputSupport";
    case ErrorCode::OrderViolation: return "OrderViolation";
    case ErrorCode::TooManyBranches: return "TooManyBranches";
    case ErrorCode::NotRunnable: return "NotRunnable";
    case ErrorCode::NotStandardForm: return "NotStandardForm";
    case ErrorCode::MalformedInput: return "MalformedInput";
    }
    return "Unknown";
}

} // namespace zdflow
