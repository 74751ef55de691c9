#pragma once

// Deterministic file output: CSV with a header row naming units, dot-decimal,
// shortest round-trip float formatting (std::to_chars, locale-free), and
// UTF-8 JSON reports.  Identical inputs produce identical bytes.

#include <cstdint>
#include <string>
#include <vector>

#include "tmsim/trace.hpp"

namespace tmsim {

std::string format_double(double v);  // shortest round-trip representation

// rows[i] has one value per column.
std::string csv_table(const std::vector<std::string>& columns,
                      const std::vector<std::vector<double>>& rows);

std::string csv_from_trace(const Trace& t);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

std::uint64_t fnv1a64(const std::string& bytes);
std::string fnv1a64_hex(const std::string& bytes);

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tmsim
