#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace qwrng::text {

std::string_view trim(std::string_view s);

/// Splits on '\n', dropping a trailing '\r' from each line.
std::vector<std::string_view> lines(std::string_view s);

std::vector<std::string_view> split(std::string_view s, char sep);

/// Whole-field parses; throw Error(Parse) naming `what` on failure.
long long parse_int(std::string_view s, std::string_view what);
double parse_double(std::string_view s, std::string_view what);

/// 17 significant digits, enough for an exact binary64 round trip.
std::string format_double(double v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace qwrng::text
