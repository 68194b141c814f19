#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace avc {

// Locale-independent number formatting/parsing so file outputs are
// byte-reproducible regardless of the host environment.
std::string format_double(double value, int precision = 10);
std::string format_fixed(double value, int decimals);
std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_int(std::string_view text);

std::string_view trim(std::string_view s);
std::vector<std::string> split_csv_line(std::string_view line);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace avc
