#include "elliptic/format.hpp"

#include <array>
#include <charconv>

namespace elliptic {

std::string format_double(double x) {
  std::array<char, 32> buf{};
  const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), result.ptr);
}

}  // namespace elliptic
