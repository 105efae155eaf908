#include "sparseproj/vector_io.hpp"

#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <istream>
#include <iterator>
#include <ostream>
#include <string>

#include "sparseproj/core.hpp"

namespace sparseproj::io {

namespace {

std::uint64_t load_le64(const unsigned char* bytes) noexcept {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) {
        v = (v << 8) | bytes[i];
    }
    return v;
}

void store_le64(std::uint64_t v, unsigned char* bytes) noexcept {
    for (int i = 0; i < 8; ++i) {
        bytes[i] = static_cast<unsigned char>(v & 0xffu);
        v >>= 8;
    }
}

std::vector<double> parse_text(std::string_view text) {
    std::vector<double> out;
    const char* cur = text.data();
    const char* const end = text.data() + text.size();
    while (true) {
        while (cur != end && std::isspace(static_cast<unsigned char>(*cur))) ++cur;
        if (cur == end) break;
        // from_chars rejects a leading '+', which is still a valid decimal literal.
        const char* token = cur;
        if (*cur == '+') ++cur;
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(cur, end, v);
        if (ec != std::errc() || (cur != token && *cur == '-') ||
            (ptr != end && !std::isspace(static_cast<unsigned char>(*ptr)))) {
            const char* stop = token;
            while (stop != end && !std::isspace(static_cast<unsigned char>(*stop))) ++stop;
            throw Error(ErrorCode::MalformedInput,
                        "not a decimal number: '" + std::string(token, stop) + "'");
        }
        out.push_back(v);
        cur = ptr;
    }
    return out;
}

std::vector<double> parse_binary(std::string_view data) {
    if (data.size() < 16 || data.substr(0, 8) != kBinaryMagic) {
        throw Error(ErrorCode::MalformedInput, "binary vector header is missing or truncated");
    }
    const auto* bytes = reinterpret_cast<const unsigned char*>(data.data());
    const std::uint64_t n = load_le64(bytes + 8);
    if (n > (data.size() - 16) / 8 || data.size() - 16 != n * 8) {
        throw Error(ErrorCode::MalformedInput, "binary vector payload does not match its length");
    }
    std::vector<double> out(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        out[i] = std::bit_cast<double>(load_le64(bytes + 16 + 8 * i));
    }
    return out;
}

std::string slurp(std::istream& in) {
    std::string data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    if (in.bad()) {
        throw Error(ErrorCode::Io, "failed to read input stream");
    }
    return data;
}

}  // namespace

std::vector<double> read_text(std::istream& in) { return parse_text(slurp(in)); }

std::vector<double> read_binary(std::istream& in) { return parse_binary(slurp(in)); }

std::vector<double> read_vector(std::istream& in) {
    const std::string data = slurp(in);
    if (std::string_view(data).substr(0, 8) == kBinaryMagic) {
        return parse_binary(data);
    }
    return parse_text(data);
}

void write_vector(std::ostream& out, const std::vector<double>& v, VectorFormat format) {
    if (format == VectorFormat::Binary) {
        std::array<unsigned char, 8> buf{};
        out.write(kBinaryMagic.data(), static_cast<std::streamsize>(kBinaryMagic.size()));
        store_le64(v.size(), buf.data());
        out.write(reinterpret_cast<const char*>(buf.data()), 8);
        for (const double x : v) {
            store_le64(std::bit_cast<std::uint64_t>(x), buf.data());
            out.write(reinterpret_cast<const char*>(buf.data()), 8);
        }
    } else {
        std::array<char, 32> buf{};
        for (std::size_t i = 0; i < v.size(); ++i) {
            const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v[i]);
            if (i) out.put(' ');
            out.write(buf.data(), ptr - buf.data());
        }
        out.put('\n');
    }
    if (!out) {
        throw Error(ErrorCode::Io, "failed to write vector");
    }
}

}  // namespace sparseproj::io
