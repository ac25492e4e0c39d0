// SPDX-License-Identifier: Apache-2.0

#include "voxtok/error.hpp"

namespace voxtok {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidDimension: return "invalid-dimension";
        case ErrorKind::OutOfBounds: return "out-of-bounds";
        case ErrorKind::InvalidArgument: return "invalid-argument";
        case ErrorKind::Format: return "format";
        case ErrorKind::Truncation: return "truncation";
        case ErrorKind::LengthMismatch: return "length-mismatch";
        case ErrorKind::Parse: return "parse";
        case ErrorKind::Consistency: return "consistency";
        case ErrorKind::OutOfVocabulary: return "out-of-vocabulary";
        case ErrorKind::InvalidToken: return "invalid-token";
        case ErrorKind::WrongCodebook: return "wrong-codebook";
        case ErrorKind::Io: return "io";
    }
    return "unknown";
}

TruncationError::TruncationError(std::uint64_t decoded, std::uint64_t expected)
    : Error(ErrorKind::Truncation,
            "binvox body truncated: decoded " + std::to_string(decoded) + " of " +
                std::to_string(expected) + " cells"),
      decoded_(decoded),
      expected_(expected) {}

ParseError::ParseError(std::size_t offset, const std::string& what)
    : Error(ErrorKind::Parse, "RLE parse error at byte " + std::to_string(offset) + ": " + what),
      offset_(offset) {}

InvalidTokenError::InvalidTokenError(std::uint32_t id, std::size_t vocab_size)
    : Error(ErrorKind::InvalidToken,
            "token id " + std::to_string(id) + " out of range for codebook of " +
                std::to_string(vocab_size) + " tokens"),
      id_(id) {}

}  // namespace voxtok
