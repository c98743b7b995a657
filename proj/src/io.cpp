#include "torusflow/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace torusflow {

std::string format_g(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t x) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

std::vector<std::string> output_header(std::string_view config_text, std::uint64_t seed) {
  return {std::string("torusflow ") + kToolVersion, "config " + hex64(fnv1a64(config_text)),
          "seed " + std::to_string(seed)};
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read file: " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace torusflow
