#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace cks {

/// Whole file as bytes. Throws IoError.
std::string read_file(const std::filesystem::path& path);
/// Replaces the file's contents. Throws IoError.
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace cks
