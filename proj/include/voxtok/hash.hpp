// SPDX-License-Identifier: Apache-2.0

#ifndef VOXTOK_HASH_HPP
#define VOXTOK_HASH_HPP

#include <cstdint>
#include <string>
#include <string_view>

namespace voxtok {

constexpr std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : bytes) {
        h ^= static_cast<std::uint8_t>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// 16 lowercase hex digits.
std::string to_hex(std::uint64_t value);

/// Inverse of to_hex; returns false on anything but 16 hex digits.
bool from_hex(std::string_view text, std::uint64_t& value) noexcept;

}  // namespace voxtok

#endif  // VOXTOK_HASH_HPP
