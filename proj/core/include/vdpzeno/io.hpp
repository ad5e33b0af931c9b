#pragma once

#include <charconv>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>

namespace vdp::io {

/// Shortest round-trip decimal form of a double; locale-independent, so
/// output files are byte-stable.
inline std::string number(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, res.ptr};
}

inline std::string number(long long x) { return std::to_string(x); }
inline std::string number(unsigned long long x) { return std::to_string(x); }
inline std::string number(unsigned long x) { return std::to_string(x); }
inline std::string number(int x) { return std::to_string(x); }

/// Writes one comma-separated line of already formatted fields.
inline void row(std::ostream& out, std::initializer_list<std::string_view> fields) {
  bool first = true;
  for (auto f : fields) {
    if (!first) out << ',';
    out << f;
    first = false;
  }
  out << '\n';
}

}  // namespace vdp::io
