#pragma once

#include <stdexcept>
#include <string>

namespace trl {

// Every failure the library can raise, grouped by pipeline stage. The CLI
// maps these onto exit-code classes; tests match on the code, not the text.
enum class ErrorCode {
    // loading
    MissingFile,
    SchemaError,
    DuplicateKey,
    ReferentialError,
    EmptyHorizon,
    // series / selection
    ZeroBaseline,
    UnknownRegion,
    IncompleteSeries,
    WindowOutOfRange,
    // covariates
    InvalidCoordinate,
    EmptyPath,
    EmptySeries,
    MissingCounty,
    ConstantColumn,
    RankDeficient,
    ZeroTotalVariance,
    // model
    NonPositiveResponse,
    RankDeficientDesign,
    NoConvergence,
    SingleGroup,
    // generators
    BadParams,
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::MissingFile: return "MissingFile";
        case ErrorCode::SchemaError: return "SchemaError";
        case ErrorCode::DuplicateKey: return "DuplicateKey";
        case ErrorCode::ReferentialError: return "ReferentialError";
        case ErrorCode::EmptyHorizon: return "EmptyHorizon";
        case ErrorCode::ZeroBaseline: return "ZeroBaseline";
        case ErrorCode::UnknownRegion: return "UnknownRegion";
        case ErrorCode::IncompleteSeries: return "IncompleteSeries";
        case ErrorCode::WindowOutOfRange: return "WindowOutOfRange";
        case ErrorCode::InvalidCoordinate: return "InvalidCoordinate";
        case ErrorCode::EmptyPath: return "EmptyPath";
        case ErrorCode::EmptySeries: return "EmptySeries";
        case ErrorCode::MissingCounty: return "MissingCounty";
        case ErrorCode::ConstantColumn: return "ConstantColumn";
        case ErrorCode::RankDeficient: return "RankDeficient";
        case ErrorCode::ZeroTotalVariance: return "ZeroTotalVariance";
        case ErrorCode::NonPositiveResponse: return "NonPositiveResponse";
        case ErrorCode::RankDeficientDesign: return "RankDeficientDesign";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::SingleGroup: return "SingleGroup";
        case ErrorCode::BadParams: return "BadParams";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + msg), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
    throw Error(code, msg);
}

}  // namespace trl
