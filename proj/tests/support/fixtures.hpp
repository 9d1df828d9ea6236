#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

namespace testutil {

inline std::filesystem::path fixture_dir() {
  if (const char* dir = std::getenv("VULNCHAIN_FIXTURES"); dir && *dir)
    return dir;
#ifdef VULNCHAIN_FIXTURE_DIR
  return VULNCHAIN_FIXTURE_DIR;
#else
  throw std::runtime_error("VULNCHAIN_FIXTURES not set");
#endif
}

inline std::string read_fixture(const std::string& name) {
  const auto path = fixture_dir() / name;
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("missing fixture: " + path.string());
  return std::string((std::istreambuf_iterator<char>(is)),
                     std::istreambuf_iterator<char>());
}

}  // namespace testutil
