#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace accd::testing {

inline std::filesystem::path source_dir() { return ACCD_SOURCE_DIR; }

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string kmeans_listing() { return read_file(source_dir() / "programs" / "kmeans.ddsl"); }

}  // namespace accd::testing
