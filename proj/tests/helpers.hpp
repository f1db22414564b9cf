#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "plwhile/parser.hpp"

namespace plw::test {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string corpus_path(const std::string& name) {
  return std::string(PLW_CORPUS_DIR) + "/" + name;
}

inline Program load_corpus(const std::string& name) {
  return parse_program(read_file(corpus_path(name)));
}

inline std::string golden_path(const std::string& name) {
  return std::string(PLW_GOLDEN_DIR) + "/" + name;
}

}  // namespace plw::test
