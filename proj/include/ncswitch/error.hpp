#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ncswitch {

enum class ErrorCode {
    InvalidArgument,
    MalformedDocument,
    RateOutOfRange,
    InputOutOfRange,
    FanoutOutOfRange,
    EmptyFanout,
    DuplicateOutput,
    DuplicateFlow,
    LimitExceeded,
    Inadmissible,
    NotInStab,
    RankDeficient,
    LengthMismatch,
    ImpossibleReceiver,
    InsufficientSymbols,
    RepeatedPosition,
    NonPerfectMember,
    UnevenCover,
    OutsideRegion,
    InvalidConfig,
};

std::string_view to_string(ErrorCode code);

/// Domain error carrying a machine-readable code; the CLI maps it to exit 1.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message) : std::runtime_error(message), code_(code) {}
    [[nodiscard]] ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

}  // namespace ncswitch
