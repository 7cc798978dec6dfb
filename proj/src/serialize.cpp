// SPDX-License-Identifier: Apache-2.0
#include "serialize.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "ortho/errors.hpp"

namespace ortho::detail {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_magic(std::ostream& os, std::string_view magic, int version) {
  os << magic << ' ' << version << '\n';
}

int read_magic(std::istream& is, std::string_view magic,
               const std::string& what) {
  std::string line;
  if (!std::getline(is, line)) {
    throw DataError(what + ": empty file");
  }
  std::istringstream ls(line);
  std::string name;
  int version = 0;
  if (!(ls >> name >> version) || name != magic) {
    throw DataError(what + ": bad magic line, expected \"" +
                    std::string(magic) + " <version>\"");
  }
  return version;
}

void write_double_row(std::ostream& os, const double* v, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (i != 0) os << ' ';
    os << format_double(v[i]);
  }
  os << '\n';
}

std::vector<double> read_double_row(std::istream& is, std::size_t n,
                                    const std::string& what) {
  std::string line;
  if (!std::getline(is, line)) {
    throw DataError(what + ": unexpected end of file");
  }
  std::vector<double> out;
  out.reserve(n);
  const char* p = line.c_str();
  char* end = nullptr;
  for (std::size_t i = 0; i < n; ++i) {
    errno = 0;
    double v = std::strtod(p, &end);
    if (end == p) {
      throw DataError(what + ": expected " + std::to_string(n) +
                      " numbers, got " + std::to_string(i));
    }
    if (!std::isfinite(v)) {
      throw DataError(what + ": non-finite value");
    }
    out.push_back(v);
    p = end;
  }
  while (*p == ' ') ++p;
  if (*p != '\0') {
    throw DataError(what + ": trailing data after " + std::to_string(n) +
                    " numbers");
  }
  return out;
}

void write_kv(std::ostream& os, std::string_view key, std::string_view value) {
  os << key << ' ' << value << '\n';
}

std::string expect_kv(std::istream& is, std::string_view key,
                      const std::string& what) {
  std::string line;
  if (!std::getline(is, line)) {
    throw DataError(what + ": unexpected end of file, expected \"" +
                    std::string(key) + "\"");
  }
  auto space = line.find(' ');
  if (space == std::string::npos || line.substr(0, space) != key) {
    throw DataError(what + ": expected key \"" + std::string(key) +
                    "\", got \"" + line + "\"");
  }
  return line.substr(space + 1);
}

std::uint64_t expect_kv_u64(std::istream& is, std::string_view key,
                            const std::string& what) {
  std::string value = expect_kv(is, key, what);
  char* end = nullptr;
  errno = 0;
  unsigned long long v = std::strtoull(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0' || errno == ERANGE) {
    throw DataError(what + ": bad integer for \"" + std::string(key) + "\"");
  }
  return v;
}

double expect_kv_double(std::istream& is, std::string_view key,
                        const std::string& what) {
  std::string value = expect_kv(is, key, what);
  char* end = nullptr;
  double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0' || !std::isfinite(v)) {
    throw DataError(what + ": bad number for \"" + std::string(key) + "\"");
  }
  return v;
}

}  // namespace ortho::detail
