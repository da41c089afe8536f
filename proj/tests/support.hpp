#pragma once

#include <fstream>
#include <sstream>
#include <string>

namespace qnlp::test {

inline std::string fixture(const std::string& name) {
  return std::string(QNLP_FIXTURE_DIR) + "/" + name;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace qnlp::test
