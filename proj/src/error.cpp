#include "ncswitch/error.hpp"

namespace ncswitch {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "invalid_argument";
        case ErrorCode::MalformedDocument: return "malformed_document";
        case ErrorCode::RateOutOfRange: return "rate_out_of_range";
        case ErrorCode::InputOutOfRange: return "input_out_of_range";
        case ErrorCode::FanoutOutOfRange: return "fanout_out_of_range";
        case ErrorCode::EmptyFanout: return "empty_fanout";
        case ErrorCode::DuplicateOutput: return "duplicate_output";
        case ErrorCode::DuplicateFlow: return "duplicate_flow";
        case ErrorCode::LimitExceeded: return "limit_exceeded";
        case ErrorCode::Inadmissible: return "inadmissible";
        case ErrorCode::NotInStab: return "not_in_stab";
        case ErrorCode::RankDeficient: return "rank_deficient";
        case ErrorCode::LengthMismatch: return "length_mismatch";
        case ErrorCode::ImpossibleReceiver: return "impossible_receiver";
        case ErrorCode::InsufficientSymbols: return "insufficient_symbols";
        case ErrorCode::RepeatedPosition: return "repeated_position";
        case ErrorCode::NonPerfectMember: return "non_perfect_member";
        case ErrorCode::UnevenCover: return "uneven_cover";
        case ErrorCode::OutsideRegion: return "outside_region";
        case ErrorCode::InvalidConfig: return "invalid_config";
    }
    return "unknown";
}

}  // namespace ncswitch
