#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lrcert {

// Shortest decimal form that round-trips to the same double.
std::string format_double(double value);

// Strict parse; throws LoadError naming `what` on trailing garbage.
double parse_double(std::string_view text, std::string_view what);
long long parse_int(std::string_view text, std::string_view what);

std::vector<std::string_view> split(std::string_view text, char sep);
std::string_view trim(std::string_view text);

// 64-bit FNV-1a, used for config provenance hashes.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

}  // namespace lrcert
