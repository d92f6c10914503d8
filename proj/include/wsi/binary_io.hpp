#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace wsi::io {

static_assert(std::endian::native == std::endian::little, "little-endian host required");

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

template <class T>
void put(std::ostream& out, T v) {
    static_assert(std::is_arithmetic_v<T>);
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in) {
    static_assert(std::is_arithmetic_v<T>);
    T v{};
    if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) {
        throw FormatError("truncated index data");
    }
    return v;
}

inline void put_string(std::ostream& out, const std::string& s) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::string get_string(std::istream& in, std::uint32_t max_len = 1u << 20) {
    const auto len = get<std::uint32_t>(in);
    if (len > max_len) {
        throw FormatError("string field too long");
    }
    std::string s(len, '\0');
    if (!in.read(s.data(), len)) {
        throw FormatError("truncated index data");
    }
    return s;
}

// Reads a count and rejects values larger than the bytes that could back it.
inline std::uint64_t get_count(std::istream& in, std::uint64_t limit) {
    const auto c = get<std::uint64_t>(in);
    if (c > limit) {
        throw FormatError("implausible element count");
    }
    return c;
}

}  // namespace wsi::io
