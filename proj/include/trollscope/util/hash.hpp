#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace trollscope::hash {

// Lowercase hex SHA-256 digest.
std::string sha256(std::string_view data);

std::string sha256_file(const std::filesystem::path& path);

}  // namespace trollscope::hash
