#ifndef GQSB_ERROR_HPP
#define GQSB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace gqsb {

enum class ErrorCode {
    DuplicateEdge,
    SelfLoop,
    BadIndex,
    ZeroWeight,
    TooLarge,
    NotGQSB,
    BadGamma,
    NotSymmetric,
    NoConvergence,
    DimensionMismatch,
    BadStep,
    NotPolarizing,
    ParseError,
    IoError,
    MissingDataset,
    BadPartition,
};

inline const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::DuplicateEdge: return "DuplicateEdge";
        case ErrorCode::SelfLoop: return "SelfLoop";
        case ErrorCode::BadIndex: return "BadIndex";
        case ErrorCode::ZeroWeight: return "ZeroWeight";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::NotGQSB: return "NotGQSB";
        case ErrorCode::BadGamma: return "BadGamma";
        case ErrorCode::NotSymmetric: return "NotSymmetric";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::BadStep: return "BadStep";
        case ErrorCode::NotPolarizing: return "NotPolarizing";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::MissingDataset: return "MissingDataset";
        case ErrorCode::BadPartition: return "BadPartition";
    }
    return "Unknown";
}

// Every failure in the library surfaces as this exception; code() is stable,
// what() carries the human-readable detail.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace gqsb

#endif  // GQSB_ERROR_HPP
