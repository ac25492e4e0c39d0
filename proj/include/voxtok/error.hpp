// SPDX-License-Identifier: Apache-2.0

#ifndef VOXTOK_ERROR_HPP
#define VOXTOK_ERROR_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace voxtok {

enum class ErrorKind {
    InvalidDimension,
    OutOfBounds,
    InvalidArgument,
    Format,
    Truncation,
    LengthMismatch,
    Parse,
    Consistency,
    OutOfVocabulary,
    InvalidToken,
    WrongCodebook,
    Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base for every error raised by the library. The kind is the stable,
/// machine-checkable part; the message is for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Binvox body ended before every cell was decoded.
class TruncationError : public Error {
public:
    TruncationError(std::uint64_t decoded, std::uint64_t expected);

    std::uint64_t cells_decoded() const noexcept { return decoded_; }
    std::uint64_t cells_expected() const noexcept { return expected_; }

private:
    std::uint64_t decoded_;
    std::uint64_t expected_;
};

/// Malformed RLE text; offset is the byte position of the problem.
class ParseError : public Error {
public:
    ParseError(std::size_t offset, const std::string& what);

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// A token id outside the codebook range.
class InvalidTokenError : public Error {
public:
    InvalidTokenError(std::uint32_t id, std::size_t vocab_size);

    std::uint32_t token_id() const noexcept { return id_; }

private:
    std::uint32_t id_;
};

}  // namespace voxtok

#endif  // VOXTOK_ERROR_HPP
