#pragma once

#include "snns/error.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

namespace snns::binary {

// Little-endian primitives for the on-disk formats.

inline void put_u32(std::ostream& out, std::uint32_t v) {
    char bytes[4];
    for (int i = 0; i < 4; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFFU);
    out.write(bytes, 4);
}

inline void put_u64(std::ostream& out, std::uint64_t v) {
    char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFFU);
    out.write(bytes, 8);
}

inline void put_i64(std::ostream& out, std::int64_t v) { put_u64(out, static_cast<std::uint64_t>(v)); }
inline void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

inline void get_bytes(std::istream& in, char* dst, std::size_t count) {
    in.read(dst, static_cast<std::streamsize>(count));
    if (static_cast<std::size_t>(in.gcount()) != count) {
        throw FormatError("unexpected end of file");
    }
}

inline std::uint32_t get_u32(std::istream& in) {
    unsigned char bytes[4];
    get_bytes(in, reinterpret_cast<char*>(bytes), 4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | bytes[i];
    return v;
}

inline std::uint64_t get_u64(std::istream& in) {
    unsigned char bytes[8];
    get_bytes(in, reinterpret_cast<char*>(bytes), 8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[i];
    return v;
}

inline std::int64_t get_i64(std::istream& in) { return static_cast<std::int64_t>(get_u64(in)); }
inline double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

inline void put_magic(std::ostream& out, const char (&magic)[5]) { out.write(magic, 4); }

inline void expect_magic(std::istream& in, const char (&magic)[5], const std::string& what) {
    char got[4];
    get_bytes(in, got, 4);
    if (std::memcmp(got, magic, 4) != 0) {
        throw FormatError(what + ": bad magic");
    }
}

/// FNV-1a 64 over a byte range; chained via `seed`.
inline std::uint64_t fnv1a(const char* data, std::size_t size, std::uint64_t seed = 0xCBF29CE484222325ULL) {
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= static_cast<unsigned char>(data[i]);
        h *= 0x100000001B3ULL;
    }
    return h;
}

}  // namespace snns::binary
