#pragma once

// Vector file formats.
//
//   text:   UTF-8, decimal literals separated by whitespace or newlines.
//   binary: the 8 bytes "SPRJVEC1", a little-endian uint64 length n, then n
//           little-endian IEEE-754 binary64 values.

#include <iosfwd>
#include <string_view>
#include <vector>

namespace sparseproj::io {

enum class VectorFormat { Text, Binary };

inline constexpr std::string_view kBinaryMagic = "SPRJVEC1";

/// Detects the format from the leading magic bytes. Throws Error(MalformedInput).
std::vector<double> read_vector(std::istream& in);

std::vector<double> read_text(std::istream& in);
std::vector<double> read_binary(std::istream& in);

/// Text output uses the shortest representation that round-trips.
void write_vector(std::ostream& out, const std::vector<double>& v, VectorFormat format);

}  // namespace sparseproj::io
