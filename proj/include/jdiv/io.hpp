#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace jdiv {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::filesystem::path& path);
/// Creates parent directories as needed.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace jdiv
