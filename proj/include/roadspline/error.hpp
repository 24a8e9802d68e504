#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace roadspline {

enum class ErrorCode {
    IoError,
    MissingField,
    NotText,
    MalformedXml,
    MalformedJson,
    EmptyNetwork,
    MissingPlanView,
    UnknownGeometry,
    BadAttribute,
    OutOfRange,
    NonFinite,
    NoLaneSection,
    EmptyPlanView,
    EmptyBoundary,
    TooFewPoints,
    DegenerateKnots,
    EmptyInput,
    LengthMismatch,
    TooShort,
};

constexpr std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::NotText: return "NotText";
    case ErrorCode::MalformedXml: return "MalformedXml";
    case ErrorCode::MalformedJson: return "MalformedJson";
    case ErrorCode::EmptyNetwork: return "EmptyNetwork";
    case ErrorCode::MissingPlanView: return "MissingPlanView";
    case ErrorCode::UnknownGeometry: return "UnknownGeometry";
    case ErrorCode::BadAttribute: return "BadAttribute";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NoLaneSection: return "NoLaneSection";
    case ErrorCode::EmptyPlanView: return "EmptyPlanView";
    case ErrorCode::EmptyBoundary: return "EmptyBoundary";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::DegenerateKnots: return "DegenerateKnots";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::TooShort: return "TooShort";
    }
    return "Unknown";
}

/// Error raised by every stage of the conversion pipeline. Carries the road
/// id and a source line when they are known (empty / 0 otherwise).
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message, std::string road_id = {}, int line = 0)
        : std::runtime_error(compose(code, message, road_id, line)),
          code_(code),
          message_(std::move(message)),
          road_id_(std::move(road_id)),
          line_(line)
    {
    }

    ErrorCode code() const noexcept { return code_; }
    const std::string& message() const noexcept { return message_; }
    const std::string& road_id() const noexcept { return road_id_; }
    int line() const noexcept { return line_; }

private:
    static std::string compose(ErrorCode code, const std::string& message,
                               const std::string& road_id, int line)
    {
        std::string out(to_string(code));
        if (!road_id.empty())
            out += " [road " + road_id + "]";
        if (line > 0)
            out += " (line " + std::to_string(line) + ")";
        out += ": " + message;
        return out;
    }

    ErrorCode code_;
    std::string message_;
    std::string road_id_;
    int line_;
};

} // namespace roadspline
