#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "tiesmatch/instance.hpp"

#ifndef TIESMATCH_DATA_DIR
#error "TIESMATCH_DATA_DIR must be defined"
#endif

namespace testsupport {

inline std::string read_data(const std::string& name) {
  std::ifstream in(std::string(TIESMATCH_DATA_DIR) + "/" + name, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline tiesmatch::Instance tight() { return tiesmatch::parse_instance(read_data("tight.instance")); }

}  // namespace testsupport
