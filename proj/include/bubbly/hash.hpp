#pragma once

#include <cstddef>
#include <cstdint>
#include <cstring>
#include <string>

namespace bubbly {

inline constexpr std::uint64_t fnv1a64_offset = 0xcbf29ce484222325ull;

inline std::uint64_t fnv1a64(const void* data, std::size_t n,
                             std::uint64_t state = fnv1a64_offset) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        state ^= bytes[i];
        state *= 0x100000001b3ull;
    }
    return state;
}

inline std::uint64_t fnv1a64(const std::string& s, std::uint64_t state = fnv1a64_offset) {
    return fnv1a64(s.data(), s.size(), state);
}

inline std::uint64_t fnv1a64_value(double v, std::uint64_t state = fnv1a64_offset) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    return fnv1a64(&bits, sizeof bits, state);
}

inline std::string to_hex(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

}
