#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace pqk::test {

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline std::string sample_path(const std::string& name) { return std::string(PQK_SAMPLES_DIR) + "/" + name; }
inline std::string fixture_path(const std::string& name) { return std::string(PQK_FIXTURES_DIR) + "/" + name; }
inline std::string sample(const std::string& name) { return read_text(sample_path(name)); }

}  // namespace pqk::test
