#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace torusflow {

inline constexpr const char* kToolVersion = "0.1.0";

// Fixed 17-significant-digit formatting so repeated runs diff bit-exactly.
std::string format_g(double x);

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t x);

// Standard output-file preamble: tool version, config hash, seed.
std::vector<std::string> output_header(std::string_view config_text, std::uint64_t seed);

std::string read_text_file(const std::string& path);

}  // namespace torusflow
