#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace difftrail {

// Writes to a sibling temporary file and renames it over `path`, so a failure
// never leaves a partial file behind. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

std::vector<std::string> split(std::string_view text, char sep);
std::string_view trim(std::string_view text);
std::vector<std::string> split_lines(std::string_view text);

// Strict parsers: the whole field must be consumed.
std::optional<std::uint32_t> parse_hex_word(std::string_view text); // "0x1a2b" or "1a2b"
std::optional<std::int64_t> parse_int(std::string_view text);
std::optional<std::uint64_t> parse_uint(std::string_view text);
std::optional<double> parse_double(std::string_view text);

std::string hex_word(std::uint32_t w, int word_bits);

} // namespace difftrail
