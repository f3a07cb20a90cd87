#include "nmrqip/common.hpp"

#include <cstdio>
#include <cstdlib>
#include <iostream>

namespace nmrqip {

std::string format_g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

double round_g9(double v) {
  return std::strtod(format_g9(v).c_str(), nullptr);
}

void warn(const std::string& msg) {
  std::cerr << "warning: " << msg << "\n";
}

}  // namespace nmrqip
