// SPDX-License-Identifier: Apache-2.0
#pragma once

// Internal helpers for the versioned text artifacts (vocabulary, class
// index, model files). Every artifact starts with a magic line
// "<MAGIC> <version>"; doubles are written with 17 significant digits so
// they round-trip exactly.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ortho::detail {

std::string format_double(double v);

void write_magic(std::ostream& os, std::string_view magic, int version);

// Reads and checks the magic line; returns the version. Throws DataError
// on mismatch.
int read_magic(std::istream& is, std::string_view magic,
               const std::string& what);

// One line of space-separated doubles.
void write_double_row(std::ostream& os, const double* v, std::size_t n);

// Parses exactly n doubles from the next line; values must be finite.
std::vector<double> read_double_row(std::istream& is, std::size_t n,
                                    const std::string& what);

// "key value" line helpers; expect_kv throws DataError if the key differs.
void write_kv(std::ostream& os, std::string_view key, std::string_view value);
std::string expect_kv(std::istream& is, std::string_view key,
                      const std::string& what);

std::uint64_t expect_kv_u64(std::istream& is, std::string_view key,
                            const std::string& what);
double expect_kv_double(std::istream& is, std::string_view key,
                        const std::string& what);

}  // namespace ortho::detail
