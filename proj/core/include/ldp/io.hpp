#pragma once

#include <string>

namespace ldp::io {

// Writes to a temp file in the destination directory, then renames.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace ldp::io
