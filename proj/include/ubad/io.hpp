#ifndef UBAD_IO_HPP
#define UBAD_IO_HPP

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>

namespace ubad {

/// Shortest round-trip decimal form of a double; locale-free and byte-stable
/// across runs, so CSV outputs can be compared by hash.
inline std::string fmt_double(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

/// FNV-1a 64-bit, used to fingerprint configurations and output files.
inline std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

inline std::string to_hex(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int k = 15; k >= 0; --k) {
        out[static_cast<std::size_t>(k)] = digits[v & 0xF];
        v >>= 4;
    }
    return out;
}

} // namespace ubad

#endif // UBAD_IO_HPP
