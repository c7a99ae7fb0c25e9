#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace autopatch::text {

[[nodiscard]] bool is_valid_utf8(std::string_view bytes) noexcept;

/// Decodes UTF-8 into code points. Invalid sequences decode byte-wise so the
/// result is total; callers that care validate first.
[[nodiscard]] std::u32string decode_utf8(std::string_view bytes);

[[nodiscard]] std::string_view trim(std::string_view s) noexcept;
[[nodiscard]] std::string_view trim_right(std::string_view s) noexcept;

/// Splits on '\n', dropping a trailing '\r' from each line. A trailing newline
/// does not produce an empty last line.
[[nodiscard]] std::vector<std::string_view> split_lines(std::string_view s);

/// Runs of spaces, tabs, CR and LF collapse to a single space; ends trimmed.
[[nodiscard]] std::string collapse_whitespace(std::string_view s);

/// Per line: trim, collapse internal whitespace, drop blank lines; joined by
/// '\n'. This is the text the edit-distance metric compares.
[[nodiscard]] std::string normalize_code_text(std::string_view s);

/// Trailing whitespace removed from every line and trailing newlines removed
/// from the whole text. Program outputs are compared in this form.
[[nodiscard]] std::string normalize_output(std::string_view s);

[[nodiscard]] std::string join(const std::vector<std::string>& parts, std::string_view sep);

[[nodiscard]] bool starts_with(std::string_view s, std::string_view prefix) noexcept;

[[nodiscard]] std::string sha256_hex(std::string_view data);
[[nodiscard]] std::uint64_t fnv1a64(std::string_view data) noexcept;

/// Throws Error(FileNotFound) when the file is absent, Error(Io) on read failure.
[[nodiscard]] std::string read_file(const std::filesystem::path& path);

/// Writes via a sibling temp file and rename, creating parent directories.
void write_file(const std::filesystem::path& path, std::string_view contents);

/// UTC, second resolution, e.g. 2024-05-01T12:00:00Z.
[[nodiscard]] std::string utc_timestamp();

}  // namespace autopatch::text
